// Acceptance run: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "ubern/cli.hpp"
#include "ubern/congruences.hpp"
#include "ubern/lemmas.hpp"
#include "ubern/ubern.hpp"

using namespace ubern;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

struct OddCase {
  unsigned p, s, l;
};
struct TwoPowerCase {
  unsigned m, k, N;
};

const std::vector<OddCase> kOddGrid = {{5, 1, 5}, {5, 2, 5}, {5, 1, 10}, {7, 1, 7},
                                       {3, 3, 3}, {3, 4, 3}, {3, 5, 3}, {3, 4, 9}};

std::vector<unsigned> two_adic_grid() {
  std::vector<unsigned> v;
  for (unsigned n = 12; n <= 40; n += 2) v.push_back(n);
  return v;
}

std::vector<TwoPowerCase> two_power_grid() {
  std::vector<TwoPowerCase> v;
  for (unsigned k : {1u, 3u})
    for (unsigned m = 7; m <= 16; ++m) v.push_back({m, k, 3});
  for (unsigned m = 9; m <= 12; ++m) v.push_back({m, 1, 4});
  return v;
}

std::string params(const CongruenceReport& r) {
  std::string s;
  for (const auto& [k, v] : r.context.params) s += (s.empty() ? "" : " ") + k + "=" + std::to_string(v);
  return s;
}

bool same_verdict(const CongruenceReport& a, const CongruenceReport& b) {
  if (a.holds != b.holds || a.modulus_exponent != b.modulus_exponent || a.failures.size() != b.failures.size())
    return false;
  for (std::size_t i = 0; i < a.failures.size(); ++i) {
    const auto& x = a.failures[i];
    const auto& y = b.failures[i];
    if (!(x.u == y.u) || x.lhs != y.lhs || x.rhs != y.rhs || x.vp_diff != y.vp_diff) return false;
  }
  return true;
}

VerifyOptions backend(Backend b) {
  VerifyOptions o;
  o.backend = b;
  return o;
}

Outcome classical_oracle() {
  Outcome o;
  for (unsigned n = 1; n <= 30; ++n) {
    const Rational got = n * specialize(divided_ubern(n), classical_values(n));
    if (got != classical_bernoulli(n)) o.fail("mismatch at n=" + std::to_string(n));
  }
  if (classical_bernoulli(2) != make_rational(1, 6) || classical_bernoulli(4) != make_rational(-1, 30) ||
      classical_bernoulli(6) != make_rational(1, 42))
    o.fail("B_2, B_4, B_6 differ from 1/6, -1/30, 1/42");
  if (o.pass) o.detail = "n = 1..30 exact";
  return o;
}

Outcome odd_prime_grid() {
  Outcome o;
  for (const auto& c : kOddGrid) {
    const auto r = verify_odd_prime_kummer(c.p, c.s, c.l);
    if (!r.holds) o.fail("fails at " + params(r));
  }
  if (o.pass) o.detail = std::to_string(kOddGrid.size()) + " instances, all three Psi branches, N in {1,2}";
  return o;
}

Outcome two_adic() {
  Outcome o;
  unsigned mod4 = 0, mod8 = 0;
  for (unsigned n : two_adic_grid()) {
    const auto r = verify_two_adic_kummer(n);
    if (!r.holds) o.fail("fails at n=" + std::to_string(n));
    (r.modulus_exponent == 2 ? mod4 : mod8)++;
  }
  if (mod4 == 0 || mod8 == 0) o.fail("a case branch was not exercised");
  if (o.pass) o.detail = std::to_string(mod4) + " instances mod 4, " + std::to_string(mod8) + " mod 8";
  return o;
}

Outcome two_power() {
  Outcome o;
  std::vector<std::string> cases;
  for (const auto& c : two_power_grid()) {
    const auto r = verify_two_power_kummer(c.m, c.k, c.N);
    if (!r.holds) o.fail("fails at " + params(r));
    if (std::find(cases.begin(), cases.end(), r.context.case_label) == cases.end())
      cases.push_back(r.context.case_label);
  }
  if (cases.size() != 4) o.fail("only " + std::to_string(cases.size()) + " of 4 cases exercised");
  if (o.pass) o.detail = std::to_string(two_power_grid().size()) + " instances, 4 cases of m mod 8";
  return o;
}

Outcome few_parts() {
  Outcome o;
  unsigned count = 0;
  auto run = [&](unsigned p, unsigned s_max, unsigned i_max) {
    for (unsigned s = 1; s <= s_max; ++s)
      for (unsigned i = 0; i <= i_max; ++i) {
        const auto r = check_reduced_tau_bound(p, s, i);
        ++count;
        if (!r.holds) o.fail("fails at " + params(r));
      }
  };
  run(3, 4, 4);
  run(5, 2, 2);
  if (o.pass) o.detail = std::to_string(count) + " (p, s, i) instances";
  return o;
}

Outcome lemma_suites() {
  Outcome o;
  std::uint64_t instances = 0;
  for (const char* id : {"2.1", "2.2", "2.4", "2.5", "2.6", "4.1", "4.2", "4.3", "4.4", "4.5", "4.6", "4.7"}) {
    const LemmaSummary s = run_lemma(id);
    instances += s.instances();
    if (!s.holds()) o.fail(std::string("lemma ") + id + " fails");
  }
  if (o.pass) o.detail = std::to_string(instances) + " instances over 12 lemmas";
  return o;
}

Outcome backend_parity() {
  Outcome o;
  std::uint64_t checked = 0;
  for (std::uint64_t p : {2, 3, 5})
    for (unsigned n = 1; n <= 20; ++n)
      for (const auto& u : enumerate(n)) {
        const Rational t = tau(u);
        for (unsigned k = 1; k <= 5; ++k, ++checked)
          if (!(tau_padic(p, u, k) == PadicScalar::from_rational(t, p, k)))
            o.fail("tau_padic differs at p=" + std::to_string(p) + " u=" + u.to_string());
      }
  unsigned reports = 0;
  auto compare = [&](const std::function<CongruenceReport(const VerifyOptions&)>& verify) {
    const auto a = verify(backend(Backend::exact));
    const auto b = verify(backend(Backend::padic));
    ++reports;
    if (!same_verdict(a, b)) o.fail("backends disagree at " + params(a));
  };
  for (const auto& c : kOddGrid)
    if ((c.s + c.l) * (c.p - 1) <= 24)
      compare([&](const VerifyOptions& v) { return verify_odd_prime_kummer(c.p, c.s, c.l, v); });
  for (unsigned n : two_adic_grid())
    if (n <= 24) compare([&](const VerifyOptions& v) { return verify_two_adic_kummer(n, v); });
  for (const auto& c : two_power_grid())
    if (c.m + (c.k << c.N) <= 24)
      compare([&](const VerifyOptions& v) { return verify_two_power_kummer(c.m, c.k, c.N, v); });
  if (o.pass)
    o.detail = std::to_string(checked) + " tau embeddings, " + std::to_string(reports) + " verify reports identical";
  return o;
}

Outcome enumeration() {
  Outcome o;
  for (unsigned n = 0; n <= 40; ++n)
    if (BigInt(static_cast<unsigned long>(enumerate(n).size())) != count_partitions(n))
      o.fail("count differs at n=" + std::to_string(n));
  const auto start = std::chrono::steady_clock::now();
  const auto all = enumerate(40);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (all.size() != 37338) o.fail("p(40) != 37338");
  if (secs >= 5.0) o.fail("enumerate(40) took " + std::to_string(secs) + " s");
  if (o.pass) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "n <= 40, enumerate(40) in %.3f s", secs);
    o.detail = buf;
  }
  return o;
}

Outcome negative_control() {
  Outcome o;
  const std::vector<std::vector<std::string>> commands = {
      {"verify", "--theorem", "3.5", "--p", "5", "--s", "1", "--l", "5"},
      {"verify", "--theorem", "3.5", "--p", "3", "--s", "3", "--l", "3"},
      {"verify", "--theorem", "4.8", "--n", "14"},
      {"verify", "--theorem", "4.8", "--n", "16"},
      {"verify", "--theorem", "4.9", "--m", "7", "--k", "1", "--N", "3"},
      {"verify", "--theorem", "4.9", "--m", "12", "--k", "1", "--N", "3"},
  };
  for (auto args : commands) {
    std::ostringstream out, err;
    if (run_cli(args, out, err) != kExitOk) o.fail("unperturbed run did not pass: " + args[2]);
    args.push_back("--perturb");
    std::ostringstream pout, perr;
    const int code = run_cli(args, pout, perr);
    const auto doc = nlohmann::json::parse(pout.str());
    if (code != kExitCounterexample || doc["failures"].size() != 1)
      o.fail("perturbed " + args[2] + " did not yield exit 1 with one failure");
  }
  if (o.pass) o.detail = std::to_string(commands.size()) + " perturbed runs, each exit 1 with exactly one failure";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"classical oracle equivalence", classical_oracle},
      {"odd-prime Kummer grid", odd_prime_grid},
      {"2-adic Kummer, even n in [12, 40]", two_adic},
      {"2-power Kummer grid", two_power},
      {"tau bound for few parts", few_parts},
      {"lemma suites", lemma_suites},
      {"backend cross-check", backend_parity},
      {"enumeration", enumeration},
      {"negative control", negative_control},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %zu: %s  %s (%s; %.1f s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
