#include "ubern/lemmas.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <json.hpp>
#include <random>
#include <sstream>

#include "ubern/congruences.hpp"
#include "ubern/errors.hpp"
#include "ubern/padic.hpp"
#include "ubern/partition.hpp"
#include "ubern/ubern.hpp"

namespace ubern {

namespace {

constexpr std::size_t kMaxExamples = 8;

class Sweep {
 public:
  Sweep(LemmaSummary& summary, std::string label) : summary_(summary) {
    summary_.parts.push_back({std::move(label), 0, 0, {}});
    index_ = summary_.parts.size() - 1;
  }

  // `describe` is only evaluated for failing instances.
  void check(bool ok, const std::function<std::string()>& describe) {
    LemmaPart& part = summary_.parts[index_];
    ++part.instances;
    if (ok) return;
    ++part.failures;
    if (part.examples.size() < kMaxExamples) part.examples.push_back(describe());
  }

 private:
  LemmaSummary& summary_;
  std::size_t index_;
};

std::string fmt(std::initializer_list<std::pair<const char*, long>> params) {
  std::string s;
  for (const auto& [name, value] : params) {
    if (!s.empty()) s += ' ';
    s += name;
    s += '=';
    s += std::to_string(value);
  }
  return s;
}

class FactorialTable {
 public:
  const BigInt& operator()(unsigned long n) {
    while (table_.size() <= n) table_.push_back(table_.empty() ? BigInt(1) : table_.back() * table_.size());
    return table_[n];
  }

 private:
  std::deque<BigInt> table_;  // stable references across growth
};

BigInt big_pow(std::uint64_t p, unsigned long e) { return pow(BigInt(static_cast<unsigned long>(p)), e); }

long sign(long e) { return e % 2 == 0 ? 1 : -1; }

// v_p(a!) summed directly as sum floor(a / p^i).
std::uint64_t legendre_direct(std::uint64_t p, std::uint64_t a) {
  std::uint64_t total = 0;
  for (std::uint64_t q = p; q <= a; q *= p) {
    total += a / q;
    if (q > a / p) break;
  }
  return total;
}

LemmaSummary standard_valuations(const LemmaRanges& r) {
  LemmaSummary out{"2.1", "standard factorial valuations", {}};
  const unsigned samples = r.samples.value_or(500);
  const unsigned l_max = r.l_max.value_or(2000);
  const unsigned a_max = r.a_max.value_or(5000);
  std::mt19937_64 rng(r.seed);
  std::uniform_int_distribution<std::uint64_t> pick(1, 2000);

  Sweep product(out, "v((ab)!) >= v(a!) + v(b!)");
  for (std::uint64_t p : {2, 3, 5})
    for (unsigned t = 0; t < samples; ++t) {
      const std::uint64_t a = pick(rng), b = pick(rng);
      product.check(vp_factorial(p, a * b) >= vp_factorial(p, a) + vp_factorial(p, b),
                    [&] { return fmt({{"p", long(p)}, {"a", long(a)}, {"b", long(b)}}); });
    }

  Sweep multiple(out, "v((lp)!) = l + v(l!)");
  for (std::uint64_t p : {2, 3, 5})
    for (std::uint64_t l = 1; l <= l_max; ++l)
      multiple.check(vp_factorial(p, l * p) == l + vp_factorial(p, l),
                     [&] { return fmt({{"p", long(p)}, {"l", long(l)}}); });

  Sweep power(out, "v((lp^t)!) = l(p^t - 1)/(p - 1) + v(l!)");
  for (std::uint64_t p : {2, 3, 5})
    for (unsigned t = 1; t <= 4; ++t)
      for (std::uint64_t l = 1; l <= 200; ++l) {
        const std::uint64_t pt = prime_power(p, t);
        power.check(vp_factorial(p, l * pt) == l * (pt - 1) / (p - 1) + vp_factorial(p, l),
                    [&] { return fmt({{"p", long(p)}, {"t", t}, {"l", long(l)}}); });
      }

  Sweep legendre(out, "v(a!) = v((floor(a/p) p)!) = (a - s(a))/(p - 1)");
  for (std::uint64_t p : {2, 3, 5, 7})
    for (std::uint64_t a = 0; a <= a_max; ++a) {
      const std::uint64_t direct = legendre_direct(p, a);
      legendre.check(direct == vp_factorial(p, a) && direct == legendre_direct(p, a / p * p),
                     [&] { return fmt({{"p", long(p)}, {"a", long(a)}}); });
    }

  Sweep upper(out, "v(a!) <= (a - 1)/(p - 1)");
  for (std::uint64_t p : {2, 3, 5, 7})
    for (std::uint64_t a = 1; a <= a_max; ++a)
      upper.check(legendre_direct(p, a) * (p - 1) <= a - 1, [&] { return fmt({{"p", long(p)}, {"a", long(a)}}); });
  return out;
}

LemmaSummary block_quotient(const LemmaRanges& r) {
  LemmaSummary out{"2.2", "(lp)!/(l! p^l) == (-1)^l mod p^{N+1}, N = v_p(l)", {}};
  const unsigned l_max = r.l_max.value_or(500);
  FactorialTable fact;
  Sweep sweep(out, "odd p in {3,5,7}");
  for (std::uint64_t p : {3, 5, 7})
    for (unsigned l = 1; l <= l_max; ++l) {
      const long N = vp(p, std::uint64_t{l});
      const Rational lhs = make_rational(fact(l * p), fact(l) * big_pow(p, l));
      sweep.check(congruent(lhs, sign(l), p, N + 1), [&] { return fmt({{"p", long(p)}, {"l", l}}); });
    }
  return out;
}

LemmaSummary shifted_factorial(const LemmaRanges& r) {
  LemmaSummary out{"2.4", "v(a!) >= v(a+k) for 0 < k <= p, except v(a!) = v(a+k) - 1 at a = p - k", {}};
  const unsigned a_max = r.a_max.value_or(200);
  Sweep general(out, "a != p - k");
  Sweep boundary(out, "a = p - k");
  for (std::uint64_t p : {3, 5, 7})
    for (std::uint64_t k = 1; k <= p; ++k)
      for (std::uint64_t a = 0; a <= a_max; ++a) {
        const long lhs = long(vp_factorial(p, a));
        const long rhs = long(vp(p, a + k));
        auto describe = [&] { return fmt({{"p", long(p)}, {"k", long(k)}, {"a", long(a)}}); };
        if (a + k == p)
          boundary.check(lhs == rhs - 1, describe);
        else
          general.check(lhs >= rhs, describe);
      }
  return out;
}

LemmaSummary digit_vectors(const LemmaRanges& r) {
  LemmaSummary out{"2.5", "v((sum h_j p^j)!) >= sum (j h_j + v(h_j!))", {}};
  const unsigned samples = r.samples.value_or(500);
  std::mt19937_64 rng(r.seed);
  Sweep sweep(out, "random digit vectors, p in {3,5}");
  for (std::uint64_t p : {3, 5}) {
    std::uniform_int_distribution<std::uint64_t> pick(0, 3 * p);
    std::uniform_int_distribution<unsigned> length(1, 5);
    for (unsigned t = 0; t < samples; ++t) {
      std::vector<std::uint64_t> h(length(rng));
      for (auto& x : h) x = pick(rng);
      std::uint64_t total = 0, bound = 0;
      for (std::size_t j = 0; j < h.size(); ++j) {
        total += h[j] * prime_power(p, unsigned(j));
        bound += j * h[j] + vp_factorial(p, h[j]);
      }
      sweep.check(vp_factorial(p, total) >= bound, [&] {
        std::string s = "p=" + std::to_string(p) + " h=";
        for (auto x : h) s += std::to_string(x) + ",";
        s.pop_back();
        return s;
      });
    }
  }
  return out;
}

LemmaSummary shifted_block_quotient(const LemmaRanges&) {
  LemmaSummary out{"2.6", "((l+q)p+a)!/((l+q)! p^{l+q}) == (-1)^l (qp+a)!/(q! p^q) mod p^{N+1}", {}};
  FactorialTable fact;
  Sweep part_i(out, "(i) a = 0");
  Sweep part_ii(out, "(ii) any a");
  Sweep part_iii(out, "(iii) a >= ep");
  Sweep part_iv(out, "(iv) a >= (e+1)p, both sides divided by p^e");
  for (std::uint64_t p : {3, 5})
    for (unsigned l : {unsigned(p), unsigned(2 * p), unsigned(p * p)}) {
      const long N = vp(p, std::uint64_t{l});
      for (unsigned q = 0; q <= 6; ++q)
        for (unsigned a = 0; a <= 3 * p; ++a) {
          const Rational lhs = make_rational(fact((l + q) * p + a), fact(l + q) * big_pow(p, l + q));
          const Rational rhs = sign(l) * make_rational(fact(q * p + a), fact(q) * big_pow(p, q));
          auto describe = [&] { return fmt({{"p", long(p)}, {"l", l}, {"q", q}, {"a", a}}); };
          if (a == 0) part_i.check(congruent(lhs, rhs, p, N + 1), describe);
          part_ii.check(congruent(lhs, rhs, p, N + 1), describe);
          for (unsigned e = 1; e <= 2; ++e) {
            if (a >= e * p) part_iii.check(congruent(lhs, rhs, p, N + 1), describe);
            if (a >= (e + 1) * p) {
              const BigInt pe = big_pow(p, e);
              part_iv.check(congruent(lhs / pe, rhs / pe, p, N + 1), describe);
            }
          }
        }
    }
  return out;
}

LemmaSummary reduction_property(const LemmaRanges& r) {
  LemmaSummary out{"3.2", "reduce keeps weight, degree <= i+1 and does not raise v(tau)", {}};
  const unsigned i_max = r.i_max.value_or(4);
  Sweep sweep(out, "p in {3,5}, s in {1,2,3}, n = (s(p-1)+i)p - i, d(u) <= i+1");
  for (std::uint32_t p : {3u, 5u})
    for (unsigned s = 1; s <= 3; ++s)
      for (unsigned i = 0; i <= i_max; ++i) {
        const unsigned n = (s * (p - 1) + i) * p - i;
        for_each_partition(n, i + 1, [&](const Partition& u) {
          const Partition red = reduce(p, u);
          const bool ok = red.weight() == n && red.degree() <= i + 1 && is_reduced(p, red) &&
                          tau_valuation(p, u) >= tau_valuation(p, red);
          sweep.check(ok, [&] { return "p=" + std::to_string(p) + " u=" + u.to_string() + " -> " + red.to_string(); });
        });
      }
  return out;
}

LemmaSummary few_parts_bound(const LemmaRanges& r) {
  LemmaSummary out{"3.4", "v(tau_u) >= s(p-2) - 1 for w(u) = (s(p-1)+i)p - i, d(u) <= i+1", {}};
  struct Grid {
    std::uint64_t p;
    unsigned s_max, i_max;
  };
  for (const Grid& g : {Grid{3, 4, r.i_max.value_or(4)}, Grid{5, 2, r.i_max.value_or(2)}}) {
    Sweep sweep(out, "p=" + std::to_string(g.p));
    for (unsigned s = 1; s <= g.s_max; ++s)
      for (unsigned i = 0; i <= g.i_max; ++i) {
        const CongruenceReport report = check_reduced_tau_bound(g.p, s, i);
        sweep.check(report.holds, [&] {
          return fmt({{"s", s}, {"i", i}, {"failures", long(report.failures.size())}});
        });
      }
  }
  return out;
}

LemmaSummary double_factorial_residues(const LemmaRanges& r) {
  LemmaSummary out{"4.1", "double factorials mod small powers of 2", {}};
  const unsigned k_max = r.k_max.value_or(399);
  const unsigned N_max = r.N_max.value_or(8);
  Sweep part_i(out, "(i) (2k-1)!! == (-1)^((k-1)/2) mod 4, k odd");
  for (unsigned k = 1; k <= k_max; k += 2)
    part_i.check(congruent(Rational(double_factorial(2 * long(k) - 1)), sign((k - 1) / 2), 2, 2),
                 [&] { return fmt({{"k", k}}); });
  Sweep part_ii(out, "(ii) (4k-3)!! == (-1)^(k-1) mod 16");
  for (unsigned k = 1; k <= (k_max + 1) / 2; ++k)
    part_ii.check(congruent(Rational(double_factorial(4 * long(k) - 3)), sign(k - 1), 2, 4),
                  [&] { return fmt({{"k", k}}); });
  Sweep part_iii(out, "(iii) (k 2^N - 3)!! == -1 mod 2^(N+1)");
  for (unsigned k = 1; k <= 9; ++k)
    for (unsigned N = 3; N <= N_max; ++N)
      part_iii.check(congruent(Rational(double_factorial((long(k) << N) - 3)), -1, 2, N + 1),
                     [&] { return fmt({{"k", k}, {"N", N}}); });
  return out;
}

LemmaSummary shifted_double_factorials(const LemmaRanges& r) {
  LemmaSummary out{"4.2", "(k 2^N + 2a - 3)!! against (2a - 3)!!", {}};
  const unsigned k_max = r.k_max.value_or(9);
  const unsigned a_max = r.a_max.value_or(30);
  const unsigned N_max = r.N_max.value_or(8);
  Sweep quotient_even(out, "(i) 2 | a: quotient by (k 2^N + 1)!!, mod 2^(N+1+min(v(a),N-1))");
  Sweep quotient_odd(out, "(i) 2 !| a: quotient by (k 2^N + 1)!!, mod 2^(N+1)");
  Sweep plain(out, "(ii) mod 2^(N+1)");
  Sweep corner(out, "(iii) (k 2^N - 3)!! mod 2^(N+3), k odd");
  Sweep corner_weak(out, "(iii) (k 2^N - 3)!! == -1 + 2^(N+1) mod 2^(N+2), k odd");
  for (unsigned k = 1; k <= k_max; ++k)
    for (unsigned N = 3; N <= N_max; ++N) {
      const long K = long(k) << N;
      const BigInt base = double_factorial(K + 1);
      for (unsigned a = 2; a <= a_max; ++a) {
        const BigInt top = double_factorial(K + 2 * long(a) - 3);
        const Rational small = Rational(double_factorial(2 * long(a) - 3));
        const Rational q = make_rational(top, base);
        auto describe = [&] { return fmt({{"k", k}, {"N", N}, {"a", a}}); };
        if (a % 2 == 0) {
          const long extra = std::min<long>(vp(2, std::uint64_t{a}), long(N) - 1);
          quotient_even.check(congruent(q, small, 2, long(N) + 1 + extra), describe);
          plain.check(congruent(Rational(top), small, 2, N + 1), describe);
        } else {
          quotient_odd.check(congruent(q, small + K, 2, N + 1), describe);
          plain.check(congruent(Rational(top), small + K, 2, N + 1), describe);
        }
      }
      if (k % 2 == 1) {
        const Rational lhs = Rational(double_factorial(K - 3));
        const long t = N == 3 ? sign((k - 1) / 2) : sign((k + 1) / 2);
        const Rational two_n1 = Rational(big_pow(2, N + 1));
        auto describe = [&] { return fmt({{"k", k}, {"N", N}}); };
        corner.check(congruent(lhs, -1 + t * two_n1, 2, N + 3), describe);
        corner_weak.check(congruent(lhs, -1 + two_n1, 2, N + 2), describe);
      }
    }
  return out;
}

LemmaSummary f_sum_bound(const LemmaRanges& r) {
  LemmaSummary out{"4.3", "v(sum_j f_a(i,j)) >= i-1 (i <= 3), i (i >= 4)", {}};
  const unsigned a_max = r.a_max.value_or(50);
  const unsigned i_max = r.i_max.value_or(10);
  Sweep bound(out, "sum bound");
  for (unsigned a = 0; a <= a_max; ++a)
    for (unsigned i = 1; i <= i_max; ++i) {
      const long need = i <= 3 ? long(i) - 1 : long(i);
      bound.check(vp(2, f_sum(a, i)) >= need, [&] { return fmt({{"a", a}, {"i", i}}); });
    }
  Sweep remark(out, "per-term v(f_a(i,j)) >= i+1 (i >= 6), i+3 (i >= 8)");
  for (unsigned a = 0; a <= a_max; ++a)
    for (unsigned i = 6; i <= std::max(i_max, 6u); ++i)
      for (unsigned j = 1; j <= 2 * i; ++j) {
        const long need = i >= 8 ? long(i) + 3 : long(i) + 1;
        remark.check(vp(2, f_term(a, i, j)) >= need, [&] { return fmt({{"a", a}, {"i", i}, {"j", j}}); });
      }
  return out;
}

LemmaSummary binomial_shifts(const LemmaRanges& r) {
  LemmaSummary out{"4.4", "factorial quotients shifted by l = k 2^N, delta_r = l for r in {1,2}", {}};
  const unsigned N_max = r.N_max.value_or(6);
  const unsigned a_max = r.a_max.value_or(16);
  FactorialTable fact;
  Sweep part_i(out, "(i) (l+q+2r)!/((l+q)! r!)");
  Sweep part_ii(out, "(ii) a in {0,1}");
  Sweep part_iii(out, "(iii) a >= 2e, mod 2^(N+e)");
  Sweep part_iv(out, "(iv) a >= 2(e+1), divided by 2^e");
  for (unsigned N = 3; N <= N_max; ++N)
    for (unsigned k : {1u, 3u}) {
      const unsigned l = k << N;
      for (unsigned q = 0; q <= 8; ++q)
        for (unsigned rr = 0; rr <= 8; ++rr) {
          const long delta = (rr == 1 || rr == 2) ? long(l) : 0;
          auto base = [&](unsigned a) { return fmt({{"N", N}, {"k", k}, {"q", q}, {"r", rr}, {"a", a}}); };
          const Rational lhs_i = make_rational(fact(l + q + 2 * rr), fact(l + q) * fact(rr));
          const Rational rhs_i = make_rational(fact(q + 2 * rr), fact(q) * fact(rr));
          part_i.check(congruent(lhs_i, rhs_i + delta, 2, N + 1), [&] { return base(0); });
          for (unsigned a = 0; a <= a_max; ++a) {
            const unsigned big = l + q + 2 * rr, small = q + 2 * rr;
            const Rational lhs = make_rational(fact(2 * big + a), big_pow(2, big) * fact(l + q) * fact(rr));
            const Rational rhs = make_rational(fact(2 * small + a), big_pow(2, small) * fact(q) * fact(rr));
            if (a <= 1) part_ii.check(congruent(lhs, rhs + delta, 2, N + 1), [&] { return base(a); });
            for (unsigned e = 1; e <= 4; ++e) {
              if (a >= 2 * e) part_iii.check(congruent(lhs, rhs, 2, N + e), [&] { return base(a) + " e=" + std::to_string(e); });
              if (a >= 2 * (e + 1)) {
                const BigInt pe = big_pow(2, e);
                part_iv.check(congruent(lhs / pe, rhs / pe, 2, N + 1),
                              [&] { return base(a) + " e=" + std::to_string(e); });
              }
            }
          }
        }
    }
  return out;
}

LemmaSummary g_shift(const LemmaRanges& r) {
  LemmaSummary out{"4.5", "g(n) against g(m), n = m + k 2^N, k odd", {}};
  const unsigned N_max = r.N_max.value_or(5);
  const unsigned k_max = r.k_max.value_or(5);
  const unsigned m_max = r.m_max.value_or(30);
  Sweep odd(out, "2 !| m: + (-1)^((m-1)/2) l/2");
  Sweep twice_odd(out, "m = 2 mod 4: + l + l/(2mn)");
  Sweep four_mod_eight(out, "m = 4 mod 8: + l - l/(2mn)");
  for (unsigned N = 3; N <= N_max; ++N)
    for (unsigned k = 1; k <= k_max; k += 2) {
      const long l = long(k) << N;
      for (unsigned m = 1; m <= m_max; ++m) {
        const long n = l + m;
        const Rational gn = g_func(n), gm = g_func(m);
        auto describe = [&] { return fmt({{"N", N}, {"k", k}, {"m", m}}); };
        if (m % 2 == 1)
          odd.check(congruent(gn, gm + sign((m - 1) / 2) * make_rational(l, 2), 2, N + 1), describe);
        else if (m % 4 == 2)
          twice_odd.check(congruent(gn, gm + l + make_rational(l, 2 * long(m) * n), 2, N + 1), describe);
        else if (m % 8 == 4)
          four_mod_eight.check(congruent(gn, gm + l - make_rational(l, 2 * long(m) * n), 2, N + 1), describe);
      }
    }
  return out;
}

LemmaSummary from_report(std::string id, std::string statement, const CongruenceReport& report, std::uint64_t count) {
  LemmaSummary out{std::move(id), std::move(statement), {}};
  LemmaPart part{"all partitions", count, report.failures.size(), {}};
  for (const auto& f : report.failures) {
    if (part.examples.size() >= kMaxExamples) break;
    part.examples.push_back("u=" + f.u.to_string() + " lhs=" + to_string(f.lhs) + " rhs=" + to_string(f.rhs));
  }
  out.parts.push_back(std::move(part));
  return out;
}

std::uint64_t partitions_up_to(unsigned n_max) {
  BigInt total = 0;
  for (unsigned n = 1; n <= n_max; ++n) total += count_partitions(n);
  return total.get_ui();
}

LemmaSummary gamma_buckets(const LemmaRanges& r) {
  const unsigned n_max = r.n_max.value_or(24);
  return from_report("4.6", "n + d - 2 = 2(u_1 + 2u_3 + e) + Gamma, Gamma by case", check_gamma_buckets(n_max),
                     partitions_up_to(n_max));
}

LemmaSummary two_adic_bound(const LemmaRanges& r) {
  const unsigned n_max = r.n_max.value_or(24);
  return from_report("4.7", "v(tau_u) >= u_3 + ceil(n'/2) - 1, two less when n' = 7u_7",
                     check_two_adic_tau_bound(n_max), partitions_up_to(n_max));
}

using Runner = LemmaSummary (*)(const LemmaRanges&);

const std::vector<std::pair<std::string, Runner>>& registry() {
  static const std::vector<std::pair<std::string, Runner>> table = {
      {"2.1", standard_valuations},      {"2.2", block_quotient},    {"2.4", shifted_factorial},
      {"2.5", digit_vectors},            {"2.6", shifted_block_quotient}, {"3.2", reduction_property},
      {"3.4", few_parts_bound},          {"4.1", double_factorial_residues}, {"4.2", shifted_double_factorials},
      {"4.3", f_sum_bound},              {"4.4", binomial_shifts},   {"4.5", g_shift},
      {"4.6", gamma_buckets},            {"4.7", two_adic_bound},
  };
  return table;
}

}  // namespace

bool LemmaSummary::holds() const {
  return std::all_of(parts.begin(), parts.end(), [](const LemmaPart& p) { return p.failures == 0; });
}

std::uint64_t LemmaSummary::instances() const {
  std::uint64_t total = 0;
  for (const auto& p : parts) total += p.instances;
  return total;
}

std::string LemmaSummary::to_text() const {
  std::ostringstream out;
  out << "lemma " << id << ": " << statement << '\n';
  for (const auto& p : parts) {
    out << "  " << (p.failures == 0 ? "ok  " : "FAIL") << "  " << p.label << ": " << p.instances << " instances";
    if (p.failures) out << ", " << p.failures << " failing";
    out << '\n';
    for (const auto& e : p.examples) out << "        " << e << '\n';
  }
  out << (holds() ? "holds" : "fails") << " (" << instances() << " instances)\n";
  return out.str();
}

std::string LemmaSummary::to_json(int indent) const {
  nlohmann::ordered_json doc;
  doc["lemma"] = id;
  doc["statement"] = statement;
  doc["holds"] = holds();
  doc["instances"] = instances();
  doc["parts"] = nlohmann::ordered_json::array();
  for (const auto& p : parts) {
    nlohmann::ordered_json item;
    item["label"] = p.label;
    item["instances"] = p.instances;
    item["failures"] = p.failures;
    item["examples"] = p.examples;
    doc["parts"].push_back(std::move(item));
  }
  return doc.dump(indent);
}

const std::vector<std::string>& lemma_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& [id, run] : registry()) v.push_back(id);
    return v;
  }();
  return ids;
}

LemmaSummary run_lemma(const std::string& id, const LemmaRanges& ranges) {
  for (const auto& [key, run] : registry())
    if (key == id) return run(ranges);
  std::string known;
  for (const auto& k : lemma_ids()) known += (known.empty() ? "" : ", ") + k;
  throw PreconditionError("unknown lemma '" + id + "' (known: " + known + ")");
}

}  // namespace ubern
