#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "ubern/padic.hpp"
#include "ubern/partition.hpp"
#include "ubern/rational.hpp"

namespace ubern {

/// A polynomial in c_1, c_2, ... with exact rational coefficients, stored as
/// monomial (Partition) -> coefficient. Zero coefficients are never stored.
/// An optional weight tag asserts that every monomial has that weight.
class SparsePoly {
 public:
  using Terms = std::map<Partition, Rational, CanonicalOrder>;

  SparsePoly() = default;
  explicit SparsePoly(std::optional<std::uint64_t> weight_tag) : weight_(weight_tag) {}

  /// Adds c * c^u, merging with an existing term and dropping it if it
  /// cancels. Throws PreconditionError if u violates the weight tag.
  void add_term(const Partition& u, const Rational& c);
  /// Appends a term known to sort after every existing key (enumeration
  /// order); falls back to add_term otherwise.
  void append_term(const Partition& u, const Rational& c);

  /// Coefficient of c^u, zero when absent.
  Rational coefficient(const Partition& u) const;
  bool contains(const Partition& u) const { return terms_.count(u) != 0; }

  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  std::optional<std::uint64_t> weight_tag() const { return weight_; }

  /// This polynomial times c_part^count.
  SparsePoly times_monomial(std::uint32_t part, std::uint32_t count) const;

  SparsePoly& operator+=(const SparsePoly& other);
  SparsePoly& operator-=(const SparsePoly& other);
  friend SparsePoly operator+(SparsePoly a, const SparsePoly& b) { return a += b; }
  friend SparsePoly operator-(SparsePoly a, const SparsePoly& b) { return a -= b; }
  friend bool operator==(const SparsePoly& a, const SparsePoly& b) { return a.terms_ == b.terms_; }

 private:
  void check_weight(const Partition& u) const;

  Terms terms_;
  std::optional<std::uint64_t> weight_;
};

/// gamma_u = prod_i (i+1)^{u_i} u_i!
BigInt gamma(const Partition& u);

/// tau_u = (-1)^{d-1} (n+d-2)! / gamma_u with n = weight, d = degree: the
/// coefficient of c^u in the divided universal Bernoulli number.
Rational tau(const Partition& u);

/// v_p(tau_u) from factorial valuations alone.
long tau_valuation(std::uint64_t p, const Partition& u);

/// tau_u in Z_p with relative precision k, via factorial_unit_mod; no
/// factorial is formed.
PadicScalar tau_padic(std::uint64_t p, const Partition& u, unsigned k);
/// tau_u modulo p^absolute_precision (zero mark when v_p(tau_u) is at least
/// that).
PadicScalar tau_padic_absolute(std::uint64_t p, const Partition& u, long absolute_precision);

struct ComputeLimits {
  unsigned n_ceiling = 60;
};

/// B^_n / n = sum over partitions u of n of tau_u c^u, in enumeration order.
/// Throws PreconditionError for n = 0 and ResourceLimitError above the
/// ceiling.
SparsePoly divided_ubern(unsigned n, const ComputeLimits& limits = {});

/// Substitutes c_i -> values[i]. Throws PreconditionError if an index that
/// occurs in the polynomial has no value.
Rational specialize(const SparsePoly& poly, const std::map<std::uint32_t, Rational>& values);

/// Values c_i = (-1)^i for i = 1..n (the classical specialization).
std::map<std::uint32_t, Rational> classical_values(unsigned n);

/// Bernoulli number B_n from sum_{k=0}^{n} C(n+1, k) B_k = 0, B_0 = 1.
Rational classical_bernoulli(unsigned n);

/// min over coefficients of v_p; +infinity for the zero polynomial.
Valuation poly_vp(std::uint64_t p, const SparsePoly& poly);

// Coefficient cache: ubern_<n>.jsonl, one header line then one line per
// term in canonical order.

std::filesystem::path cache_path(const std::filesystem::path& dir, unsigned n);
/// Serialized cache file contents for divided_ubern(n).
std::string cache_serialize(unsigned n, const SparsePoly& poly);
/// Parses and integrity-checks a cache file; throws CacheError on any
/// mismatch (header, p(n), line count, digest, weights, order).
SparsePoly cache_parse(unsigned n, const std::string& contents);
/// nullopt if the file does not exist; throws CacheError if it is corrupt.
std::optional<SparsePoly> cache_load(const std::filesystem::path& dir, unsigned n);
void cache_store(const std::filesystem::path& dir, unsigned n, const SparsePoly& poly);

}  // namespace ubern
