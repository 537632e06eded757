#include "ubern/congruences.hpp"

#include <algorithm>
#include <json.hpp>

#include "ubern/errors.hpp"
#include "ubern/padic.hpp"

namespace ubern {

namespace {

using Json = nlohmann::ordered_json;

long valuation_or(const Rational& q, std::uint64_t p, long fallback) {
  const Valuation v = vp(p, q);
  return v.is_infinite() ? fallback : v.value();
}

void record(CongruenceReport& report, const Partition& u, const Rational& lhs, const Rational& rhs) {
  const Valuation v = vp(report.prime, Rational(lhs - rhs));
  if (v.is_infinite() || v.value() >= report.modulus_exponent) return;
  report.failures.push_back({u, lhs, rhs, v.value(), std::nullopt});
}

void finish(CongruenceReport& report) {
  std::stable_sort(report.failures.begin(), report.failures.end(),
                   [](const CongruenceFailure& a, const CongruenceFailure& b) { return CanonicalOrder{}(a.u, b.u); });
  report.holds = report.failures.empty();
}

// c_1^{e1} c_2^{e2} ... from (part, exponent) pairs; nullopt if an exponent
// is negative.
std::optional<Partition> monomial(std::initializer_list<std::pair<std::uint32_t, long>> exps) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> runs;
  for (const auto& [part, e] : exps) {
    if (e < 0) return std::nullopt;
    runs.emplace_back(part, static_cast<std::uint32_t>(e));
  }
  return Partition::from_multiplicities(std::span<const std::pair<std::uint32_t, std::uint32_t>>(runs));
}

// Adds a term; a term with a negative exponent is skipped and noted.
void add_if_defined(KummerRhs& rhs, std::initializer_list<std::pair<std::uint32_t, long>> exps, const Rational& c,
                    const std::string& label) {
  if (auto u = monomial(exps)) {
    rhs.poly.add_term(*u, c);
    return;
  }
  rhs.context.notes.push_back("dropped " + label + " (negative exponent)");
}

Rational ratio(long num, long den) { return make_rational(num, den); }

void require_limit(unsigned n, const ComputeLimits& limits) {
  if (n > limits.n_ceiling)
    throw ResourceLimitError("weight n = " + std::to_string(n) + " exceeds the ceiling " +
                             std::to_string(limits.n_ceiling));
}

CongruenceReport run_verification(KummerRhs rhs, const VerifyOptions& options) {
  if (options.perturb_first_term && !rhs.poly.is_zero()) {
    const auto& [u, c] = *rhs.poly.terms().begin();
    const Partition first = u;
    const Rational bumped = c + 1;
    rhs.poly.add_term(first, bumped - rhs.poly.coefficient(first));
    rhs.context.notes.push_back("first term " + first.to_string() + " perturbed by +1");
  }
  CongruenceReport report =
      options.backend == Backend::exact
          ? poly_congruent(divided_ubern(rhs.n, options.limits), rhs.poly, rhs.prime, rhs.modulus_exponent)
          : ubern_congruent_padic(rhs.n, rhs.poly, rhs.prime, rhs.modulus_exponent, options.limits);
  report.context = std::move(rhs.context);
  report.context.notes.push_back(options.backend == Backend::exact ? "backend exact" : "backend padic");
  return report;
}

Json rational_json(const Rational& q) { return to_string(q); }

}  // namespace

std::string CongruenceReport::to_json(int indent) const {
  Json ctx = Json::object();
  ctx["statement"] = context.statement;
  for (const auto& [name, value] : context.params) ctx[name] = value;
  if (!context.case_label.empty()) ctx["case"] = context.case_label;
  ctx["notes"] = context.notes;

  Json fails = Json::array();
  for (const auto& f : failures) {
    Json item = Json::object();
    item["u"] = Json::parse(f.u.to_json());
    item["lhs"] = rational_json(f.lhs);
    item["rhs"] = rational_json(f.rhs);
    item["vp_diff"] = f.vp_diff;
    if (f.required) item["required"] = *f.required;
    fails.push_back(std::move(item));
  }

  Json doc = Json::object();
  doc["holds"] = holds;
  doc["prime"] = prime;
  doc["mod_exp"] = modulus_exponent;
  doc["context"] = std::move(ctx);
  doc["failures"] = std::move(fails);
  return doc.dump(indent);
}

CongruenceReport poly_congruent(const SparsePoly& a, const SparsePoly& b, std::uint64_t p, long k) {
  require_prime(p, "poly_congruent");
  CongruenceReport report;
  report.prime = p;
  report.modulus_exponent = k;
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  const CanonicalOrder before;
  const Rational zero = 0;
  auto ia = ta.begin();
  auto ib = tb.begin();
  while (ia != ta.end() || ib != tb.end()) {
    if (ib == tb.end() || (ia != ta.end() && before(ia->first, ib->first))) {
      record(report, ia->first, ia->second, zero);
      ++ia;
    } else if (ia == ta.end() || before(ib->first, ia->first)) {
      record(report, ib->first, zero, ib->second);
      ++ib;
    } else {
      record(report, ia->first, ia->second, ib->second);
      ++ia;
      ++ib;
    }
  }
  finish(report);
  return report;
}

CongruenceReport ubern_congruent_padic(unsigned n, const SparsePoly& rhs, std::uint64_t p, long k,
                                       const ComputeLimits& limits) {
  require_prime(p, "ubern_congruent_padic");
  if (n == 0) throw PreconditionError("ubern_congruent_padic: n must be positive");
  require_limit(n, limits);
  CongruenceReport report;
  report.prime = p;
  report.modulus_exponent = k;

  const Rational zero = 0;
  PartitionCursor cursor(n);
  while (const Partition* u = cursor.next()) {
    const Rational c = rhs.coefficient(*u);
    const PadicScalar diff = tau_padic_absolute(p, *u, k) - PadicScalar::from_rational_absolute(c, p, k);
    if (diff.is_zero()) continue;
    const Rational lhs = tau(*u);
    report.failures.push_back({*u, lhs, c, valuation_or(lhs - c, p, k), std::nullopt});
  }
  for (const auto& [u, c] : rhs.terms())
    if (u.weight() != n) record(report, u, zero, c);
  finish(report);
  return report;
}

Rational pure_tau(std::uint64_t p, unsigned w) {
  if (p < 2 || w == 0 || w % (p - 1) != 0)
    throw PreconditionError("pure partition needs a positive weight divisible by p - 1");
  return tau(Partition::from_multiplicities({{static_cast<std::uint32_t>(p - 1), w / static_cast<std::uint32_t>(p - 1)}}));
}

BigInt z_residue(std::uint64_t p, unsigned n, unsigned k) {
  require_prime(p, "z_residue");
  if (k == 0) throw PreconditionError("z_residue: k must be positive");
  const Rational t = pure_tau(p, n);
  const Rational z = t * pow(BigInt(static_cast<unsigned long>(p)), 1 + vp(p, std::uint64_t{n}));
  if (vp(p, z) < 0)
    throw PreconditionError("z_residue: p^{1+v_p(n)} tau is not p-integral for n = " + std::to_string(n));
  return residue_mod(z, p, k);
}

KummerRhs odd_prime_kummer_rhs(std::uint64_t p, unsigned s, unsigned l, RhsReading reading,
                               const ComputeLimits& limits) {
  if (p < 3 || !is_prime(p)) throw PreconditionError("p must be an odd prime, got " + std::to_string(p));
  if (s == 0 || l == 0) throw PreconditionError("s and l must be positive");
  const long N = vp(p, std::uint64_t{l});
  const long need = (N + 2 + long(p) - 3) / (long(p) - 2);
  if (long(s) < need)
    throw PreconditionError("s = " + std::to_string(s) + " < ceil((N+2)/(p-2)) = " + std::to_string(need) +
                            " with N = v_p(l) = " + std::to_string(N));
  const auto q = static_cast<std::uint32_t>(p - 1);
  const unsigned m = s * q;
  const unsigned n = m + l * q;
  require_limit(n, limits);

  KummerRhs rhs;
  rhs.n = n;
  rhs.prime = p;
  rhs.modulus_exponent = N + 1;
  rhs.context.statement = "odd-prime universal Kummer congruence";
  rhs.context.params = {{"p", long(p)}, {"s", s}, {"l", l}, {"N", N}, {"m", m}, {"n", n}};
  rhs.poly = divided_ubern(m, limits).times_monomial(q, l);
  rhs.poly.add_term(Partition::from_multiplicities({{q, l + s}}), pure_tau(p, n) - pure_tau(p, m));

  if (p != 3) {
    rhs.context.case_label = "p >= 5";
    return rhs;
  }
  // Psi by s mod 3. The printed statement has the two nonzero signs swapped;
  // the corrected signs are the ones the enumeration confirms.
  long psi = 0;
  if (s % 3 == 0) psi = long(l);
  if (s % 3 == 2) psi = -long(l);
  if (reading == RhsReading::as_printed) psi = -psi;
  rhs.context.case_label = "p = 3, s = " + std::to_string(s % 3) + " mod 3";
  rhs.context.params.emplace_back("psi", psi);
  if (reading == RhsReading::as_printed) rhs.context.notes.push_back("psi sign as printed");
  if (psi != 0) {
    if (l + s >= 4)
      rhs.poly.add_term(Partition::from_multiplicities({{2, l + s - 4}, {8, 1}}), psi);
    else
      rhs.context.notes.push_back("dropped psi c_2^{l+s-4} c_8 (negative exponent)");
  }
  return rhs;
}

CongruenceReport verify_odd_prime_kummer(std::uint64_t p, unsigned s, unsigned l, const VerifyOptions& options) {
  return run_verification(odd_prime_kummer_rhs(p, s, l, options.reading, options.limits), options);
}

KummerRhs two_adic_kummer_rhs(unsigned n, RhsReading reading) {
  if (n % 2 != 0) throw PreconditionError("n must be even, got " + std::to_string(n));
  if (n < 12) throw PreconditionError("n must be at least 12 so every listed exponent is nonnegative");
  const long ln = n;
  const unsigned v = vp(2, std::uint64_t{n});

  KummerRhs rhs;
  rhs.n = n;
  rhs.prime = 2;
  rhs.poly = SparsePoly(n);
  rhs.context.statement = "2-adic universal Kummer congruence";
  rhs.context.params = {{"n", ln}, {"v2_n", long(v)}};

  auto term = [&](std::initializer_list<std::pair<std::uint32_t, long>> exps, const Rational& c) {
    rhs.poly.add_term(*monomial(exps), c);
  };

  if (v == 1) {
    rhs.modulus_exponent = 2;
    rhs.context.case_label = "v_2(n) = 1, mod 4";
    term({{1, ln}}, ratio(-1, 2 * ln));
    term({{1, ln - 3}, {3, 1}}, ratio(ln - 2, 2));
    term({{1, ln - 6}, {3, 2}}, ratio(3 * (ln - 4), 4));
    term({{1, ln - 2}, {2, 1}}, -1);
    term({{1, ln - 5}, {2, 1}, {3, 1}}, 2);
    term({{1, ln - 4}, {4, 1}}, 2);
    return rhs;
  }

  rhs.modulus_exponent = 3;
  rhs.context.case_label = "v_2(n) >= 2, mod 8";
  // Printed: +2 c_1^{n-4} c_4 and 1/(2n) - 2 c_1^n for all v_2(n) >= 2. The
  // enumeration needs -2 for the former and +2 in the latter once 8 | n.
  const bool printed = reading == RhsReading::as_printed;
  const long c1n_shift = (printed || v == 2) ? -2 : 2;
  term({{1, ln}}, ratio(1, 2 * ln) + c1n_shift);
  term({{1, ln - 3}, {3, 1}}, ratio(-3 * (ln - 2), 2));
  term({{1, ln - 6}, {3, 2}}, ratio(ln - 4, 4));
  term({{1, ln - 12}, {3, 4}}, ratio(ln - 8, 4));
  term({{1, ln - 2}, {2, 1}}, -3);
  term({{1, ln - 4}, {4, 1}}, printed ? 2 : -2);
  term({{1, ln - 4}, {2, 2}}, 4);
  term({{1, ln - 8}, {2, 1}, {3, 2}}, ln - 4);
  term({{1, ln - 5}, {2, 1}, {3, 1}}, ln - 4);
  if (printed) rhs.context.notes.push_back("coefficients as printed");
  return rhs;
}

CongruenceReport verify_two_adic_kummer(unsigned n, const VerifyOptions& options) {
  KummerRhs rhs = two_adic_kummer_rhs(n, options.reading);
  require_limit(n, options.limits);
  return run_verification(std::move(rhs), options);
}

KummerRhs two_power_kummer_rhs(unsigned m, unsigned k, unsigned N, RhsReading reading,
                               const ComputeLimits& limits) {
  if (k % 2 == 0) throw PreconditionError("k must be odd, got " + std::to_string(k));
  if (N < 3) throw PreconditionError("N must be at least 3, got " + std::to_string(N));
  if (m < 2 * N + 1)
    throw PreconditionError("m = " + std::to_string(m) + " < 2N+1 = " + std::to_string(2 * N + 1));
  if (N > 20) throw ResourceLimitError("N = " + std::to_string(N) + " is out of range");
  const unsigned l = k << N;
  const unsigned n = m + l;
  require_limit(n, limits);
  const long ln = n;
  const long ll = l;

  KummerRhs rhs;
  rhs.n = n;
  rhs.prime = 2;
  rhs.modulus_exponent = N + 1;
  rhs.context.statement = "2-power universal Kummer congruence";
  rhs.context.params = {{"m", m}, {"k", k}, {"N", N}, {"l", ll}, {"n", ln}};
  rhs.poly = divided_ubern(m, limits).times_monomial(1, l);

  auto term = [&](std::initializer_list<std::pair<std::uint32_t, long>> exps, const Rational& c,
                  const std::string& label) { add_if_defined(rhs, exps, c, label); };

  if (m % 2 == 1) {
    rhs.context.case_label = "m odd";
    term({{1, ln - 12}, {3, 4}}, ll, "c_1^{n-12} c_3^4");
    term({{1, ln - 15}, {3, 5}}, ll, "c_1^{n-15} c_3^5");
    term({{1, ln - 5}, {2, 1}, {3, 1}}, ll, "c_1^{n-5} c_2 c_3");
    term({{1, ln - 8}, {2, 1}, {3, 2}}, ll, "c_1^{n-8} c_2 c_3^2");
    term({{1, ln - 7}, {7, 1}}, ll, "c_1^{n-7} c_7");
    const Rational sg = ratio(((m + 1) / 2) % 2 == 0 ? ll : -ll, 2);
    term({{1, ln}}, -sg, "c_1^n");
    term({{1, ln - 3}, {3, 1}}, sg, "c_1^{n-3} c_3");
    term({{1, ln - 6}, {3, 2}}, sg, "c_1^{n-6} c_3^2");
    term({{1, ln - 9}, {3, 3}}, sg, "c_1^{n-9} c_3^3");
  } else if (m % 4 == 2) {
    rhs.context.case_label = "m = 2 mod 4";
    term({{1, ln}}, ll + ratio(ll, 2 * long(m) * ln), "c_1^n");
    term({{1, ln - 9}, {3, 3}}, ll, "c_1^{n-9} c_3^3");
    term({{1, ln - 18}, {3, 6}}, ll, "c_1^{n-18} c_3^6");
    term({{1, ln - 5}, {2, 1}, {3, 1}}, ll, "c_1^{n-5} c_2 c_3");
    term({{1, ln - 8}, {2, 1}, {3, 2}}, ll, "c_1^{n-8} c_2 c_3^2");
    term({{1, ln - 3}, {3, 1}}, ratio(-ll, 2), "c_1^{n-3} c_3");
    term({{1, ln - 6}, {3, 2}}, ratio(3 * ll, 4), "c_1^{n-6} c_3^2");
    const Rational theta = ratio(N == 3 ? -ll : ll, 2);
    rhs.context.notes.push_back("theta = " + to_string(theta));
    term({{1, ln - 12}, {3, 4}}, theta, "c_1^{n-12} c_3^4");
  } else if (m % 8 == 4) {
    rhs.context.case_label = "m = 4 mod 8";
    term({{1, ln}}, ll - ratio(ll, 2 * long(m) * ln), "c_1^n");
    term({{1, ln - 3}, {3, 1}}, ratio(ll, 2), "c_1^{n-3} c_3");
    term({{1, ln - 6}, {3, 2}}, ratio(ll, 4), "c_1^{n-6} c_3^2");
    term({{1, ln - 12}, {3, 4}}, ratio(ll, 4), "c_1^{n-12} c_3^4");
    term({{1, ln - 8}, {2, 1}, {3, 2}}, ll, "c_1^{n-8} c_2 c_3^2");
    term({{1, ln - 5}, {2, 1}, {3, 1}}, ll, "c_1^{n-5} c_2 c_3");
  } else {
    rhs.context.case_label = "m = 0 mod 8";
    const Rational gn = Rational(double_factorial(2 * ln - 3)) / (2 * ln);
    const Rational gm = Rational(double_factorial(2 * long(m) - 3)) / (2 * long(m));
    term({{1, ln}}, -(gn - gm), "c_1^n");
    term({{1, ln - 3}, {3, 1}}, ratio(ll, 2), "c_1^{n-3} c_3");
    term({{1, ln - 12}, {3, 4}}, ratio(5 * ll, 4), "c_1^{n-12} c_3^4");
    term({{1, ln - 6}, {3, 2}}, ratio(ll, 4), "c_1^{n-6} c_3^2");
    // The printed statement carries l c_1^{n-24} c_3^8 unconditionally; the
    // enumeration only supports it once m >= 16.
    if (reading == RhsReading::as_printed || m >= 16)
      term({{1, ln - 24}, {3, 8}}, ll, "c_1^{n-24} c_3^8");
    else
      rhs.context.notes.push_back("omitted c_1^{n-24} c_3^8 (m < 16)");
    term({{1, ln - 5}, {2, 1}, {3, 1}}, ll, "c_1^{n-5} c_2 c_3");
    term({{1, ln - 8}, {2, 1}, {3, 2}}, ll, "c_1^{n-8} c_2 c_3^2");
  }
  return rhs;
}

CongruenceReport verify_two_power_kummer(unsigned m, unsigned k, unsigned N, const VerifyOptions& options) {
  return run_verification(two_power_kummer_rhs(m, k, N, options.reading, options.limits), options);
}

CongruenceReport verify_classical_kummer(std::uint64_t p, unsigned n, unsigned m) {
  require_prime(p, "verify_classical_kummer");
  if (n == 0 || m == 0) throw PreconditionError("n and m must be positive");
  if (n % (p - 1) == 0) throw PreconditionError("(p-1) divides n = " + std::to_string(n));
  if ((n % (p - 1)) != (m % (p - 1))) throw PreconditionError("n and m differ mod p-1");
  for (unsigned x : {n, m})
    if (x != 1 && x % 2 != 0) throw PreconditionError("n and m must each be even or 1");
  CongruenceReport report;
  report.prime = p;
  report.modulus_exponent = 1;
  report.context.statement = "classical Kummer congruence";
  report.context.params = {{"p", long(p)}, {"n", n}, {"m", m}};
  record(report, Partition{}, classical_bernoulli(n) / n, classical_bernoulli(m) / m);
  finish(report);
  return report;
}

CongruenceReport check_reduced_tau_bound(std::uint64_t p, unsigned s, unsigned i) {
  if (p < 3 || !is_prime(p)) throw PreconditionError("p must be an odd prime, got " + std::to_string(p));
  if (s == 0) throw PreconditionError("s must be positive");
  const unsigned m = s * unsigned(p - 1);
  const unsigned n = (m + i) * unsigned(p) - i;
  const long bound = long(s) * long(p - 2) - 1;
  CongruenceReport report;
  report.prime = p;
  report.modulus_exponent = bound;
  report.context.statement = "tau valuation bound for few parts";
  report.context.params = {{"p", long(p)}, {"s", s}, {"i", i}, {"m", m}, {"n", n}, {"max_degree", i + 1}};
  for_each_partition(n, i + 1, [&](const Partition& u) {
    const long v = tau_valuation(p, u);
    if (v < bound) report.failures.push_back({u, tau(u), 0, v, std::nullopt});
  });
  finish(report);
  return report;
}

namespace {

unsigned v2(std::uint64_t a) { return vp(2, a); }
bool power_of_two(std::uint64_t a) { return a != 0 && (a & (a - 1)) == 0; }

struct TwoAdicShape {
  long u1, u3, u7, d, n_dot, e, gamma_gap;
};

TwoAdicShape shape_of(const Partition& u) {
  TwoAdicShape sh{};
  sh.u1 = u.multiplicity(1);
  sh.u3 = u.multiplicity(3);
  sh.u7 = u.multiplicity(7);
  sh.d = long(u.degree());
  const long n = long(u.weight());
  sh.n_dot = n - sh.u1 - 3 * sh.u3;
  long vg = 0;
  for (const auto& r : u.runs()) vg += long(r.count) * v2(r.part + 1) + long(vp_factorial(2, r.count));
  sh.e = vg - long(vp_factorial(2, 2 * sh.u1)) - 2 * sh.u3 - long(vp_factorial(2, sh.u3));
  sh.gamma_gap = n + sh.d - 2 - 2 * (sh.u1 + 2 * sh.u3 + sh.e);
  return sh;
}

bool seven_exception(const TwoAdicShape& sh) { return sh.n_dot == 7 * sh.u7; }

}  // namespace

long two_adic_gamma(const Partition& u) { return shape_of(u).gamma_gap; }

CongruenceReport check_gamma_buckets(unsigned n_max) {
  if (n_max == 0) throw PreconditionError("n_max must be positive");
  CongruenceReport report;
  report.prime = 2;
  report.modulus_exponent = 1;
  report.context.statement = "decomposition n + d - 2 = 2(u_1 + 2u_3 + e) + Gamma";
  report.context.params = {{"n_max", n_max}};
  report.context.notes.push_back("lhs = Gamma, rhs = asserted value; generic bucket asserts Gamma >= 2");
  for (unsigned n = 1; n <= n_max; ++n) {
    PartitionCursor cursor(n);
    while (const Partition* u = cursor.next()) {
      const TwoAdicShape sh = shape_of(*u);
      long expected = 2;
      bool ok = false;
      if (sh.n_dot == 0) {
        expected = -2;
        ok = sh.gamma_gap == -2;
      } else if (seven_exception(sh) && power_of_two(std::uint64_t(sh.u7))) {
        expected = 0;
        ok = sh.gamma_gap == 0;
      } else if (sh.n_dot == 2) {
        expected = 1;
        ok = sh.gamma_gap == 1;
      } else {
        ok = sh.gamma_gap >= 2;
      }
      if (!ok) {
        const Rational diff = sh.gamma_gap - expected;
        report.failures.push_back(
            {*u, sh.gamma_gap, expected, valuation_or(diff, 2, 0), std::nullopt});
      }
    }
  }
  finish(report);
  return report;
}

CongruenceReport check_two_adic_tau_bound(unsigned n_max) {
  if (n_max == 0) throw PreconditionError("n_max must be positive");
  CongruenceReport report;
  report.prime = 2;
  report.modulus_exponent = 0;
  report.context.statement = "2-adic tau bound v(tau_u) >= u_3 + ceil(n'/2) - 1";
  report.context.params = {{"n_max", n_max}};
  report.context.notes.push_back("bound depends on u; each failure carries it as `required`");
  for (unsigned n = 1; n <= n_max; ++n) {
    PartitionCursor cursor(n);
    while (const Partition* u = cursor.next()) {
      const TwoAdicShape sh = shape_of(*u);
      if (sh.n_dot <= 0) continue;
      long bound = sh.u3 + (sh.n_dot + 1) / 2 - 1;
      if (seven_exception(sh)) bound -= 2;
      const long v = tau_valuation(2, *u);
      if (v < bound) report.failures.push_back({*u, tau(*u), 0, v, bound});
    }
  }
  finish(report);
  return report;
}

}  // namespace ubern
