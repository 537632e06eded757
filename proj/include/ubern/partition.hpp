#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ubern/rational.hpp"

namespace ubern {

/// One run of equal parts: `count` copies of `part`.
struct PartRun {
  std::uint32_t part = 0;
  std::uint32_t count = 0;

  friend bool operator==(const PartRun&, const PartRun&) = default;
};

/// An integer partition held as an exponent vector u: u_i copies of part i.
///
/// Only occupied parts are stored, largest part first. Weight is
/// sum(i * u_i) and degree is sum(u_i); the empty partition has both zero.
/// A Partition doubles as the monomial c^u = prod c_i^{u_i}.
class Partition {
 public:
  Partition() = default;

  /// From (part, multiplicity) pairs in any order; repeated parts are merged
  /// and zero multiplicities dropped.
  static Partition from_multiplicities(std::initializer_list<std::pair<std::uint32_t, std::uint32_t>> runs);
  static Partition from_multiplicities(std::span<const std::pair<std::uint32_t, std::uint32_t>> runs);
  /// From a plain list of part sizes, e.g. {3, 1, 1}.
  static Partition from_parts(std::span<const std::uint32_t> parts);

  std::uint64_t weight() const { return weight_; }
  std::uint64_t degree() const { return degree_; }
  bool empty() const { return runs_.empty(); }

  /// Occupied parts, largest first.
  std::span<const PartRun> runs() const { return runs_; }
  std::uint32_t multiplicity(std::uint32_t part) const;
  std::uint32_t largest_part() const { return runs_.empty() ? 0 : runs_.front().part; }

  /// Copy with `count` extra copies of `part` (multiplying the monomial by
  /// c_part^count).
  Partition with_added(std::uint32_t part, std::uint32_t count) const;
  /// Copy with the multiplicity of `part` replaced; zero removes the part.
  Partition with_multiplicity(std::uint32_t part, std::uint32_t count) const;

  /// [[part, mult], ...] with parts ascending.
  std::string to_json() const;
  /// Human form "{2:1, 3:1}" with parts ascending.
  std::string to_string() const;

  friend bool operator==(const Partition& a, const Partition& b) { return a.runs_ == b.runs_; }

 private:
  friend struct PartitionAccess;

  void recompute();

  std::vector<PartRun> runs_;
  std::uint64_t weight_ = 0;
  std::uint64_t degree_ = 0;
};

/// Strict weak order matching enumeration order: descending lexicographic
/// on the parts listed largest first. `a` precedes `b` iff a's part sequence
/// is lexicographically greater.
struct CanonicalOrder {
  bool operator()(const Partition& a, const Partition& b) const;
};

/// Lazily walks the partitions of n in canonical order, one step per
/// next() call, without materializing the whole list.
class PartitionCursor {
 public:
  explicit PartitionCursor(unsigned n);
  /// Advances and returns the next partition, or nullptr once exhausted.
  const Partition* next();

 private:
  Partition current_;
  unsigned n_;
  bool started_ = false;
  bool done_ = false;
};

/// Every partition of n, each exactly once, in canonical order. n = 0 yields
/// the single empty partition.
std::vector<Partition> enumerate(unsigned n);

/// Visits the partitions of n with at most `max_degree` parts in canonical
/// order. The reference passed to `visit` is only valid during the call.
void for_each_partition(unsigned n, unsigned max_degree, const std::function<void(const Partition&)>& visit);

/// p(n) by Euler's pentagonal-number recurrence; independent of enumerate().
BigInt count_partitions(unsigned n);

/// True iff every occupied part has the form p^a - 1 (a >= 1), except for at
/// most one other part g, which must have multiplicity 1.
bool is_reduced(std::uint32_t p, const Partition& u);

/// True iff part == p^a - 1 for some a >= 1.
bool is_prime_power_minus_one(std::uint32_t p, std::uint64_t part);

/// Weight-preserving transform onto a reduced partition:
///   (i)   parts e*p^a - 1 with p !| e, e > 1 move onto part p^a - 1;
///   (ii)  parts t with u_t >= p and p !| t+1 become ceil(u_t/(p-1)) - 1
///         copies of part p - 1;
///   (iii) parts t with 0 < u_t < p and p !| t+1 are dropped;
/// then the lost weight g, if positive, is added back as a single part g.
/// Parts are processed in ascending order. Throws PreconditionError unless p
/// is an odd prime and u is nonempty.
Partition reduce(std::uint32_t p, const Partition& u);

}  // namespace ubern
