#include "ubern/partition.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "ubern/errors.hpp"
#include "ubern/padic.hpp"

namespace ubern {

struct PartitionAccess {
  static std::vector<PartRun>& runs(Partition& u) { return u.runs_; }
  static void recompute(Partition& u) { u.recompute(); }
};

void Partition::recompute() {
  weight_ = 0;
  degree_ = 0;
  for (const auto& r : runs_) {
    weight_ += std::uint64_t(r.part) * r.count;
    degree_ += r.count;
  }
}

Partition Partition::from_multiplicities(std::span<const std::pair<std::uint32_t, std::uint32_t>> runs) {
  std::map<std::uint32_t, std::uint64_t, std::greater<>> merged;
  for (auto [part, count] : runs) {
    if (part == 0) throw PreconditionError("partition parts must be positive");
    if (count) merged[part] += count;
  }
  Partition u;
  for (auto [part, count] : merged) u.runs_.push_back({part, static_cast<std::uint32_t>(count)});
  u.recompute();
  return u;
}

Partition Partition::from_multiplicities(std::initializer_list<std::pair<std::uint32_t, std::uint32_t>> runs) {
  return from_multiplicities(std::span<const std::pair<std::uint32_t, std::uint32_t>>(runs.begin(), runs.size()));
}

Partition Partition::from_parts(std::span<const std::uint32_t> parts) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> runs;
  runs.reserve(parts.size());
  for (auto part : parts) runs.emplace_back(part, 1);
  return from_multiplicities(runs);
}

std::uint32_t Partition::multiplicity(std::uint32_t part) const {
  for (const auto& r : runs_) {
    if (r.part == part) return r.count;
    if (r.part < part) break;
  }
  return 0;
}

Partition Partition::with_multiplicity(std::uint32_t part, std::uint32_t count) const {
  Partition u = *this;
  auto it = std::find_if(u.runs_.begin(), u.runs_.end(), [&](const PartRun& r) { return r.part <= part; });
  if (it != u.runs_.end() && it->part == part) {
    if (count)
      it->count = count;
    else
      u.runs_.erase(it);
  } else if (count) {
    u.runs_.insert(it, {part, count});
  }
  u.recompute();
  return u;
}

Partition Partition::with_added(std::uint32_t part, std::uint32_t count) const {
  return with_multiplicity(part, multiplicity(part) + count);
}

std::string Partition::to_json() const {
  std::string out = "[";
  for (auto it = runs_.rbegin(); it != runs_.rend(); ++it) {
    if (it != runs_.rbegin()) out += ',';
    out += '[' + std::to_string(it->part) + ',' + std::to_string(it->count) + ']';
  }
  return out + ']';
}

std::string Partition::to_string() const {
  std::string out = "{";
  for (auto it = runs_.rbegin(); it != runs_.rend(); ++it) {
    if (it != runs_.rbegin()) out += ", ";
    out += std::to_string(it->part) + ':' + std::to_string(it->count);
  }
  return out + '}';
}

bool CanonicalOrder::operator()(const Partition& a, const Partition& b) const {
  auto ra = a.runs();
  auto rb = b.runs();
  std::size_t i = 0;
  for (; i < ra.size() && i < rb.size(); ++i) {
    if (ra[i].part != rb[i].part) return ra[i].part > rb[i].part;
    if (ra[i].count != rb[i].count) {
      // The longer run keeps the larger part where the shorter one moves on
      // to a smaller part (or ends).
      return ra[i].count > rb[i].count;
    }
  }
  // A proper prefix is lexicographically smaller, so it comes later.
  return i == rb.size() && i < ra.size();
}

PartitionCursor::PartitionCursor(unsigned n) : n_(n) {}

const Partition* PartitionCursor::next() {
  if (done_) return nullptr;
  auto& runs = PartitionAccess::runs(current_);
  if (!started_) {
    started_ = true;
    runs.clear();
    if (n_ > 0) runs.push_back({n_, 1});
    PartitionAccess::recompute(current_);
    return &current_;
  }
  // Take one copy of the smallest part x > 1 together with all trailing 1s
  // and redistribute that mass greedily into parts of size x - 1.
  std::uint64_t freed = 0;
  if (!runs.empty() && runs.back().part == 1) {
    freed = runs.back().count;
    runs.pop_back();
  }
  if (runs.empty()) {
    done_ = true;
    return nullptr;
  }
  PartRun& last = runs.back();
  const std::uint32_t x = last.part;
  freed += x;
  if (--last.count == 0) runs.pop_back();
  const std::uint32_t y = x - 1;
  runs.push_back({y, static_cast<std::uint32_t>(freed / y)});
  if (auto rest = static_cast<std::uint32_t>(freed % y)) runs.push_back({rest, 1});
  PartitionAccess::recompute(current_);
  return &current_;
}

std::vector<Partition> enumerate(unsigned n) {
  std::vector<Partition> out;
  PartitionCursor cursor(n);
  while (const Partition* u = cursor.next()) out.push_back(*u);
  return out;
}

namespace {

struct BoundedWalker {
  const std::function<void(const Partition&)>& visit;
  Partition current;

  void walk(unsigned remaining, unsigned max_part, unsigned parts_left) {
    if (remaining == 0) {
      PartitionAccess::recompute(current);
      visit(current);
      return;
    }
    auto& runs = PartitionAccess::runs(current);
    for (unsigned part = std::min(remaining, max_part); part >= 1; --part) {
      if (std::uint64_t(part) * parts_left < remaining) break;
      unsigned max_count = std::min(remaining / part, parts_left);
      for (unsigned count = max_count; count >= 1; --count) {
        unsigned rest = remaining - part * count;
        if (rest > 0 && std::uint64_t(part - 1) * (parts_left - count) < rest) break;
        runs.push_back({part, count});
        walk(rest, part - 1, parts_left - count);
        runs.pop_back();
      }
    }
  }
};

}  // namespace

void for_each_partition(unsigned n, unsigned max_degree, const std::function<void(const Partition&)>& visit) {
  BoundedWalker walker{visit, Partition{}};
  if (n == 0) {
    visit(walker.current);
    return;
  }
  walker.walk(n, n, std::min(n, max_degree));
}

BigInt count_partitions(unsigned n) {
  std::vector<BigInt> p(n + 1);
  p[0] = 1;
  for (unsigned m = 1; m <= n; ++m) {
    BigInt sum = 0;
    for (long k = 1;; ++k) {
      long g1 = k * (3 * k - 1) / 2;
      if (g1 > long(m)) break;
      long g2 = k * (3 * k + 1) / 2;
      BigInt term = p[m - g1];
      if (g2 <= long(m)) term += p[m - g2];
      if (k % 2)
        sum += term;
      else
        sum -= term;
    }
    p[m] = sum;
  }
  return p[n];
}

bool is_prime_power_minus_one(std::uint32_t p, std::uint64_t part) {
  std::uint64_t q = part + 1;
  if (q < p) return false;
  while (q % p == 0) q /= p;
  return q == 1;
}

bool is_reduced(std::uint32_t p, const Partition& u) {
  int exceptional = 0;
  for (const auto& r : u.runs()) {
    if (is_prime_power_minus_one(p, r.part)) continue;
    if (r.count != 1 || ++exceptional > 1) return false;
  }
  return true;
}

Partition reduce(std::uint32_t p, const Partition& u) {
  if (p < 3 || !is_prime(p)) throw PreconditionError("reduce: p must be an odd prime, got " + std::to_string(p));
  if (u.empty()) throw PreconditionError("reduce: partition must be nonempty");

  std::map<std::uint32_t, std::uint64_t> loaded;  // part p^a - 1 -> multiplicity
  auto runs = u.runs();
  for (auto it = runs.rbegin(); it != runs.rend(); ++it) {
    const std::uint32_t t = it->part;
    const std::uint32_t count = it->count;
    std::uint64_t q = std::uint64_t(t) + 1;
    if (q % p == 0) {
      // t + 1 = e * p^a with p !| e: the part itself (e = 1) or step (i).
      std::uint64_t pa = 1;
      while (q % p == 0) {
        q /= p;
        pa *= p;
      }
      loaded[static_cast<std::uint32_t>(pa - 1)] += count;
    } else if (count >= p) {
      loaded[p - 1] += (count + (p - 2)) / (p - 1) - 1;  // step (ii)
    }
    // else step (iii): dropped
  }

  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  std::uint64_t w = 0;
  for (auto [part, count] : loaded) {
    if (count == 0) continue;
    out.emplace_back(part, static_cast<std::uint32_t>(count));
    w += std::uint64_t(part) * count;
  }
  const std::uint64_t g = u.weight() - w;
  if (g > 0) out.emplace_back(static_cast<std::uint32_t>(g), 1);
  return Partition::from_multiplicities(out);
}

}  // namespace ubern
