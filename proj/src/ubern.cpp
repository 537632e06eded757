#include "ubern/ubern.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "ubern/errors.hpp"

namespace ubern {

// ---------------------------------------------------------------------------
// SparsePoly

void SparsePoly::check_weight(const Partition& u) const {
  if (weight_ && u.weight() != *weight_)
    throw PreconditionError("monomial " + u.to_string() + " has weight " + std::to_string(u.weight()) +
                            ", polynomial is tagged " + std::to_string(*weight_));
}

void SparsePoly::add_term(const Partition& u, const Rational& c) {
  check_weight(u);
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(u, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void SparsePoly::append_term(const Partition& u, const Rational& c) {
  if (c == 0) return;
  if (!terms_.empty() && !CanonicalOrder{}(terms_.rbegin()->first, u)) {
    add_term(u, c);
    return;
  }
  check_weight(u);
  terms_.emplace_hint(terms_.end(), u, c);
}

Rational SparsePoly::coefficient(const Partition& u) const {
  auto it = terms_.find(u);
  return it == terms_.end() ? Rational(0) : it->second;
}

SparsePoly SparsePoly::times_monomial(std::uint32_t part, std::uint32_t count) const {
  std::optional<std::uint64_t> tag;
  if (weight_) tag = *weight_ + std::uint64_t(part) * count;
  SparsePoly out(tag);
  for (const auto& [u, c] : terms_) out.add_term(u.with_added(part, count), c);
  return out;
}

SparsePoly& SparsePoly::operator+=(const SparsePoly& other) {
  if (weight_ != other.weight_) weight_.reset();
  for (const auto& [u, c] : other.terms_) add_term(u, c);
  return *this;
}

SparsePoly& SparsePoly::operator-=(const SparsePoly& other) {
  if (weight_ != other.weight_) weight_.reset();
  for (const auto& [u, c] : other.terms_) add_term(u, -c);
  return *this;
}

// ---------------------------------------------------------------------------
// Coefficients

BigInt gamma(const Partition& u) {
  if (u.empty()) throw PreconditionError("gamma: partition must be nonempty");
  BigInt g = 1;
  for (const auto& r : u.runs()) g *= pow(BigInt(r.part + 1UL), r.count) * factorial(r.count);
  return g;
}

namespace {

void require_nonempty(const Partition& u, const char* what) {
  if (u.empty()) throw PreconditionError(std::string(what) + ": partition must be nonempty");
}

Rational signed_ratio(const BigInt& num, const BigInt& den, bool negative) {
  Rational q = make_rational(num, den);
  return negative ? Rational(-q) : q;
}

}  // namespace

Rational tau(const Partition& u) {
  require_nonempty(u, "tau");
  const std::uint64_t top = u.weight() + u.degree() - 2;
  return signed_ratio(factorial(top), gamma(u), u.degree() % 2 == 0);
}

long tau_valuation(std::uint64_t p, const Partition& u) {
  require_nonempty(u, "tau_valuation");
  require_prime(p, "tau_valuation");
  long v = static_cast<long>(vp_factorial(p, u.weight() + u.degree() - 2));
  for (const auto& r : u.runs()) v -= static_cast<long>(r.count * vp(p, r.part + 1ULL) + vp_factorial(p, r.count));
  return v;
}

PadicScalar tau_padic(std::uint64_t p, const Partition& u, unsigned k) {
  const long v = tau_valuation(p, u);
  const std::uint64_t m = prime_power(p, k);
  std::uint64_t den = 1;
  for (const auto& r : u.runs()) {
    std::uint64_t base = r.part + 1ULL;
    while (base % p == 0) base /= p;
    den = modp::mul(den, modp::pow(base % m, r.count, m), m);
    den = modp::mul(den, factorial_unit_mod(p, r.count, k), m);
  }
  std::uint64_t unit = modp::mul(factorial_unit_mod(p, u.weight() + u.degree() - 2, k), modp::inverse(den, m), m);
  if (u.degree() % 2 == 0) unit = (m - unit) % m;
  return PadicScalar(p, v, unit, k);
}

PadicScalar tau_padic_absolute(std::uint64_t p, const Partition& u, long absolute_precision) {
  const long v = tau_valuation(p, u);
  if (v >= absolute_precision) return PadicScalar::zero(p, absolute_precision);
  return tau_padic(p, u, static_cast<unsigned>(absolute_precision - v));
}

SparsePoly divided_ubern(unsigned n, const ComputeLimits& limits) {
  if (n == 0) throw PreconditionError("divided_ubern: n must be positive");
  if (n > limits.n_ceiling)
    throw ResourceLimitError("divided_ubern: n = " + std::to_string(n) + " exceeds the ceiling " +
                             std::to_string(limits.n_ceiling));
  // (n+d-2)! for every degree d, and j! for every multiplicity, computed once.
  std::vector<BigInt> fact(2 * n);
  fact[0] = 1;
  for (unsigned i = 1; i < fact.size(); ++i) fact[i] = fact[i - 1] * i;

  SparsePoly poly(n);
  PartitionCursor cursor(n);
  while (const Partition* u = cursor.next()) {
    BigInt g = 1;
    for (const auto& r : u->runs()) g *= pow(BigInt(r.part + 1UL), r.count) * fact[r.count];
    poly.append_term(*u, signed_ratio(fact[n + u->degree() - 2], g, u->degree() % 2 == 0));
  }
  return poly;
}

Rational specialize(const SparsePoly& poly, const std::map<std::uint32_t, Rational>& values) {
  Rational sum = 0;
  for (const auto& [u, c] : poly.terms()) {
    Rational term = c;
    for (const auto& r : u.runs()) {
      auto it = values.find(r.part);
      if (it == values.end()) throw PreconditionError("specialize: no value for c_" + std::to_string(r.part));
      Rational power = 1;
      for (std::uint32_t i = 0; i < r.count; ++i) power *= it->second;
      term *= power;
    }
    sum += term;
  }
  return sum;
}

std::map<std::uint32_t, Rational> classical_values(unsigned n) {
  std::map<std::uint32_t, Rational> values;
  for (std::uint32_t i = 1; i <= n; ++i) values[i] = (i % 2) ? -1 : 1;
  return values;
}

Rational classical_bernoulli(unsigned n) {
  std::vector<Rational> b(n + 1);
  b[0] = 1;
  for (unsigned m = 1; m <= n; ++m) {
    // sum_{k=0}^{m} C(m+1, k) B_k = 0, solved for B_m (C(m+1, m) = m+1).
    Rational acc = 0;
    BigInt binom = 1;  // C(m+1, k)
    for (unsigned k = 0; k < m; ++k) {
      acc += binom * b[k];
      binom = binom * (m + 1 - k) / (k + 1);
    }
    b[m] = -acc / (m + 1);
  }
  return b[n];
}

Valuation poly_vp(std::uint64_t p, const SparsePoly& poly) {
  require_prime(p, "poly_vp");
  Valuation best = Valuation::infinite();
  for (const auto& [u, c] : poly.terms()) best = std::min(best, vp(p, c));
  return best;
}

// ---------------------------------------------------------------------------
// Cache

namespace {

std::string fnv1a(const std::string& key) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : key) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string digest(unsigned n, const BigInt& count, std::size_t lines) {
  return fnv1a(std::to_string(n) + "|" + count.get_str() + "|" + std::to_string(lines));
}

// Guards the term lines themselves, so an edited coefficient is caught too.
std::string body_digest(const std::vector<std::string>& lines) {
  std::string body;
  for (std::size_t i = 1; i < lines.size(); ++i) body += lines[i] + "\n";
  return fnv1a(body);
}

}  // namespace

std::filesystem::path cache_path(const std::filesystem::path& dir, unsigned n) {
  return dir / ("ubern_" + std::to_string(n) + ".jsonl");
}

std::string cache_serialize(unsigned n, const SparsePoly& poly) {
  const BigInt count = count_partitions(n);
  const std::size_t lines = poly.size() + 1;
  nlohmann::ordered_json header;
  header["n"] = n;
  header["partitions"] = count.get_str();
  header["lines"] = lines;
  header["digest"] = digest(n, count, lines);
  std::vector<std::string> body{""};
  for (const auto& [u, c] : poly.terms()) body.push_back("{\"u\":" + u.to_json() + ",\"c\":\"" + to_string(c) + "\"}");
  header["body_digest"] = body_digest(body);
  std::string out = header.dump() + "\n";
  for (std::size_t i = 1; i < body.size(); ++i) out += body[i] + "\n";
  return out;
}

SparsePoly cache_parse(unsigned n, const std::string& contents) {
  std::vector<std::string> lines;
  std::istringstream in(contents);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  if (lines.empty()) throw CacheError("cache for n=" + std::to_string(n) + " is empty");

  const BigInt count = count_partitions(n);
  try {
    auto header = nlohmann::json::parse(lines.front());
    if (header.at("n").get<unsigned>() != n) throw CacheError("header n mismatch");
    if (header.at("partitions").get<std::string>() != count.get_str()) throw CacheError("header p(n) mismatch");
    if (header.at("lines").get<std::size_t>() != lines.size()) throw CacheError("line count mismatch");
    if (header.at("digest").get<std::string>() != digest(n, count, lines.size())) throw CacheError("digest mismatch");
    if (header.at("body_digest").get<std::string>() != body_digest(lines)) throw CacheError("term digest mismatch");
    if (BigInt(static_cast<unsigned long>(lines.size() - 1)) != count) throw CacheError("term count is not p(n)");

    SparsePoly poly(n);
    const Partition* previous = nullptr;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      auto term = nlohmann::json::parse(lines[i]);
      std::vector<std::pair<std::uint32_t, std::uint32_t>> runs;
      std::uint32_t last_part = 0;
      for (const auto& pair : term.at("u")) {
        auto part = pair.at(0).get<std::uint32_t>();
        auto mult = pair.at(1).get<std::uint32_t>();
        if (pair.size() != 2 || part <= last_part || mult == 0) throw CacheError("malformed partition on line " + std::to_string(i + 1));
        last_part = part;
        runs.emplace_back(part, mult);
      }
      Partition u = Partition::from_multiplicities(runs);
      if (u.weight() != n) throw CacheError("wrong weight on line " + std::to_string(i + 1));
      Rational c = parse_rational(term.at("c").get<std::string>());
      if (c == 0) throw CacheError("zero coefficient on line " + std::to_string(i + 1));
      if (previous && !CanonicalOrder{}(*previous, u)) throw CacheError("terms out of order on line " + std::to_string(i + 1));
      poly.append_term(u, c);
      previous = &poly.terms().rbegin()->first;
    }
    return poly;
  } catch (const CacheError&) {
    throw;
  } catch (const std::exception& e) {
    throw CacheError("cache for n=" + std::to_string(n) + " is corrupt: " + e.what());
  }
}

std::optional<SparsePoly> cache_load(const std::filesystem::path& dir, unsigned n) {
  const auto path = cache_path(dir, n);
  if (!std::filesystem::exists(path)) return std::nullopt;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CacheError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return cache_parse(n, buf.str());
}

void cache_store(const std::filesystem::path& dir, unsigned n, const SparsePoly& poly) {
  std::filesystem::create_directories(dir);
  const auto path = cache_path(dir, n);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CacheError("cannot write " + tmp);
    out << cache_serialize(n, poly);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace ubern
