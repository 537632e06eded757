#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "ubern/errors.hpp"
#include "ubern/ubern.hpp"

using namespace ubern;

namespace {

Partition P(std::initializer_list<std::pair<std::uint32_t, std::uint32_t>> runs) {
  return Partition::from_multiplicities(runs);
}

// Truncated power series in t whose coefficients are polynomials in the c_i.
using Poly = std::map<Partition, Rational, CanonicalOrder>;
using Series = std::vector<Poly>;

Partition merge(const Partition& a, const Partition& b) {
  Partition r = a;
  for (const auto& run : b.runs()) r = r.with_added(run.part, run.count);
  return r;
}

void add_to(Poly& acc, const Partition& u, const Rational& c) {
  Rational& slot = acc[u];
  slot += c;
  if (slot == 0) acc.erase(u);
}

Series multiply(const Series& a, const Series& b, std::size_t order) {
  Series out(order + 1);
  for (std::size_t i = 0; i < a.size() && i <= order; ++i)
    for (std::size_t j = 0; j < b.size() && i + j <= order; ++j)
      for (const auto& [u, x] : a[i])
        for (const auto& [w, y] : b[j]) add_to(out[i + j], merge(u, w), x * y);
  return out;
}

// B^_n/n for n = 1..order by inverting F(t) = t + sum c_i t^{i+1}/(i+1) as a
// series and expanding t/G(t), with no closed form involved.
std::vector<Poly> divided_ubern_by_inversion(std::size_t order) {
  const std::size_t top = order + 1;
  Series g(top + 1);
  g[1][Partition{}] = 1;
  for (std::size_t round = 0; round <= top; ++round) {
    Series next(top + 1);
    next[1][Partition{}] = 1;
    Series power = g;
    for (std::uint32_t i = 1; i + 1 <= top; ++i) {
      power = multiply(power, g, top);  // G^{i+1}
      for (std::size_t d = 0; d <= top; ++d)
        for (const auto& [u, c] : power[d]) add_to(next[d], u.with_added(i, 1), -c / (i + 1));
    }
    g = next;
  }
  // G = t (1 + h), t / G = sum_k (-h)^k.
  Series minus_h(order + 1);
  for (std::size_t d = 1; d <= order; ++d)
    for (const auto& [u, c] : g[d + 1]) add_to(minus_h[d], u, -c);
  Series inv(order + 1), term(order + 1);
  inv[0][Partition{}] = 1;
  term[0][Partition{}] = 1;
  for (std::size_t k = 1; k <= order; ++k) {
    term = multiply(term, minus_h, order);
    for (std::size_t d = 0; d <= order; ++d)
      for (const auto& [u, c] : term[d]) add_to(inv[d], u, c);
  }
  std::vector<Poly> out(order + 1);
  for (std::size_t n = 1; n <= order; ++n)
    for (const auto& [u, c] : inv[n]) out[n][u] = c * factorial(n - 1);  // n!/n
  return out;
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("ubern_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("gamma and tau on small partitions") {
  CHECK(gamma(P({{1, 1}})) == 2);
  CHECK(gamma(P({{1, 2}})) == 8);
  CHECK(gamma(P({{2, 1}})) == 3);
  CHECK(tau(P({{1, 1}})) == make_rational(1, 2));
  CHECK(tau(P({{1, 2}})) == make_rational(-1, 4));
  CHECK(tau(P({{2, 1}})) == make_rational(1, 3));
  CHECK(tau(P({{2, 3}})) == make_rational(280, 9));
}

TEST_CASE("divided universal Bernoulli numbers") {
  const SparsePoly one = divided_ubern(1);
  CHECK(one.size() == 1);
  CHECK(one.coefficient(P({{1, 1}})) == make_rational(1, 2));

  const SparsePoly two = divided_ubern(2);
  CHECK(two.size() == 2);
  CHECK(two.coefficient(P({{1, 2}})) == make_rational(-1, 4));
  CHECK(two.coefficient(P({{2, 1}})) == make_rational(1, 3));
  CHECK(two.weight_tag() == 2u);

  CHECK_THROWS_AS(divided_ubern(0), PreconditionError);
  CHECK_THROWS_AS(divided_ubern(61), ResourceLimitError);
  CHECK(divided_ubern(8, ComputeLimits{8}).size() == 22);
  CHECK_THROWS_AS(divided_ubern(9, ComputeLimits{8}), ResourceLimitError);
}

TEST_CASE("closed form agrees with series inversion") {
  const std::size_t order = 9;
  const auto by_inversion = divided_ubern_by_inversion(order);
  for (unsigned n = 1; n <= order; ++n) {
    const SparsePoly closed = divided_ubern(n);
    REQUIRE(closed.size() == by_inversion[n].size());
    for (const auto& [u, c] : by_inversion[n]) CHECK(closed.coefficient(u) == c);
  }
}

TEST_CASE("term count equals p(n)") {
  for (unsigned n = 1; n <= 30; ++n) CHECK(BigInt(static_cast<unsigned long>(divided_ubern(n).size())) == count_partitions(n));
}

TEST_CASE("classical Bernoulli numbers") {
  CHECK(classical_bernoulli(0) == 1);
  CHECK(classical_bernoulli(1) == make_rational(-1, 2));
  CHECK(classical_bernoulli(2) == make_rational(1, 6));
  CHECK(classical_bernoulli(3) == 0);
  CHECK(classical_bernoulli(4) == make_rational(-1, 30));
  CHECK(classical_bernoulli(6) == make_rational(1, 42));
  CHECK(classical_bernoulli(12) == make_rational(-691, 2730));
  for (unsigned n = 3; n <= 41; n += 2) CHECK(classical_bernoulli(n) == 0);
}

TEST_CASE("specialization recovers the classical numbers") {
  CHECK(2 * specialize(divided_ubern(2), classical_values(2)) == make_rational(1, 6));
  CHECK(4 * specialize(divided_ubern(4), classical_values(4)) == make_rational(-1, 30));
  CHECK(6 * specialize(divided_ubern(6), classical_values(6)) == make_rational(1, 42));
  for (unsigned n = 1; n <= 30; ++n)
    CHECK(n * specialize(divided_ubern(n), classical_values(n)) == classical_bernoulli(n));

  std::map<std::uint32_t, Rational> zeros;
  for (std::uint32_t i = 1; i <= 5; ++i) zeros[i] = 0;
  CHECK(specialize(divided_ubern(5), zeros) == 0);
  CHECK_THROWS_AS(specialize(divided_ubern(5), classical_values(4)), PreconditionError);
}

TEST_CASE("sparse polynomial bookkeeping") {
  SparsePoly a(3);
  a.add_term(P({{3, 1}}), make_rational(1, 2));
  a.add_term(P({{1, 3}}), 2);
  a.add_term(P({{3, 1}}), make_rational(-1, 2));
  CHECK(a.size() == 1);
  CHECK_FALSE(a.contains(P({{3, 1}})));
  CHECK_THROWS_AS(a.add_term(P({{2, 1}}), 1), PreconditionError);

  SparsePoly b(3);
  b.add_term(P({{1, 3}}), 2);
  CHECK((a - b).is_zero());
  CHECK((a + b).coefficient(P({{1, 3}})) == 4);

  const SparsePoly shifted = divided_ubern(2).times_monomial(2, 3);
  CHECK(shifted.weight_tag() == 8u);
  CHECK(shifted.coefficient(P({{1, 2}, {2, 3}})) == make_rational(-1, 4));
  CHECK(shifted.coefficient(P({{2, 4}})) == make_rational(1, 3));
}

TEST_CASE("polynomial valuations and p-integrality away from p-1 | n") {
  CHECK(poly_vp(3, SparsePoly{}).is_infinite());
  CHECK(poly_vp(3, divided_ubern(2)) == -1);
  CHECK(poly_vp(5, divided_ubern(2)) == 0);
  for (std::uint64_t p : {3, 5, 7})
    for (unsigned n = 1; n <= 30; ++n)
      if (n % (p - 1) != 0) CHECK(poly_vp(p, divided_ubern(n)) >= 0);
}

TEST_CASE("p-adic tau matches the exact embedding") {
  CHECK(tau_padic(3, P({{2, 1}}), 2).valuation() == -1);
  CHECK(tau_padic(3, P({{2, 1}}), 2).unit() % 3 == 1);
  CHECK(tau_padic(2, P({{1, 1}}), 3).valuation() == -1);
  CHECK(tau_padic(2, P({{1, 1}}), 3).unit() == 1);
  CHECK(tau_padic(3, P({{2, 3}}), 2).valuation() == -2);
  for (std::uint64_t p : {2, 3, 5})
    for (unsigned n = 1; n <= 20; ++n)
      for (const auto& u : enumerate(n)) {
        const Rational t = tau(u);
        CHECK(tau_valuation(p, u) == vp(p, t).value());
        for (unsigned k = 1; k <= 5; ++k) REQUIRE(tau_padic(p, u, k) == PadicScalar::from_rational(t, p, k));
      }
}

TEST_CASE("coefficient cache round trip and integrity") {
  const auto dir = scratch_dir("cache");
  const SparsePoly poly = divided_ubern(12);
  CHECK_FALSE(cache_load(dir, 12).has_value());
  cache_store(dir, 12, poly);
  const auto path = cache_path(dir, 12);
  CHECK(path.filename() == "ubern_12.jsonl");
  const std::string bytes = slurp(path);
  CHECK(bytes == cache_serialize(12, poly));
  const auto loaded = cache_load(dir, 12);
  REQUIRE(loaded.has_value());
  CHECK(*loaded == poly);

  // One header line plus one line per term.
  CHECK(std::count(bytes.begin(), bytes.end(), '\n') == 78);
  CHECK(bytes.find("{\"u\":[[12,1]],\"c\":\"39916800/13\"}") != std::string::npos);

  std::string tampered = bytes;
  const auto pos = tampered.find("\"39916800/13\"");
  tampered.replace(pos, 13, "\"39916801/13\"");
  CHECK_THROWS_AS(cache_parse(12, tampered), CacheError);
  CHECK_THROWS_AS(cache_parse(13, bytes), CacheError);
  CHECK_THROWS_AS(cache_parse(12, bytes.substr(0, bytes.size() / 2)), CacheError);
  CHECK_THROWS_AS(cache_parse(12, "garbage\n"), CacheError);

  std::ofstream(path, std::ios::binary) << tampered;
  CHECK_THROWS_AS(cache_load(dir, 12), CacheError);
  std::filesystem::remove_all(dir);
}
