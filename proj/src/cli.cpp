#include "ubern/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <array>
#include <cstdlib>
#include <json.hpp>
#include <ostream>

#include "ubern/congruences.hpp"
#include "ubern/errors.hpp"
#include "ubern/lemmas.hpp"
#include "ubern/partition.hpp"
#include "ubern/ubern.hpp"

namespace ubern {

namespace {

constexpr std::size_t kTextTermLimit = 20;

struct Options {
  unsigned n_ceiling = 60;
  std::string format = "text";

  // compute
  unsigned n = 0;
  std::string cache_dir;

  // verify / sweep
  std::string theorem;
  std::optional<unsigned> p, s, l, m, k, N, i;
  std::optional<unsigned> n_param;
  std::string backend = "exact";
  std::string reading = "corrected";
  bool perturb = false;
  std::optional<unsigned> sweep_n_max;

  // lemma
  std::string lemma;
  LemmaRanges ranges;

  // classical
  unsigned n_max = 0;
};

std::string monomial_text(const Partition& u) {
  if (u.empty()) return "1";
  std::string s;
  auto runs = u.runs();
  for (auto it = runs.rbegin(); it != runs.rend(); ++it) {
    if (!s.empty()) s += ' ';
    s += "c" + std::to_string(it->part);
    if (it->count > 1) s += "^" + std::to_string(it->count);
  }
  return s;
}

std::string poly_json(unsigned n, const SparsePoly& poly) {
  nlohmann::ordered_json doc;
  doc["n"] = n;
  doc["terms"] = nlohmann::ordered_json::array();
  for (const auto& [u, c] : poly.terms()) {
    nlohmann::ordered_json t;
    t["u"] = nlohmann::ordered_json::parse(u.to_json());
    t["c"] = to_string(c);
    doc["terms"].push_back(std::move(t));
  }
  return doc.dump();
}

void print_poly_text(std::ostream& out, unsigned n, const SparsePoly& poly) {
  out << "B^_" << n << "/" << n << " (" << poly.size() << " terms)\n";
  std::size_t shown = 0;
  for (const auto& [u, c] : poly.terms()) {
    if (shown == kTextTermLimit) {
      out << "  ... " << poly.size() - shown << " more, " << poly.size() << " terms total\n";
      break;
    }
    out << "  " << to_string(c) << "  " << monomial_text(u) << '\n';
    ++shown;
  }
}

ComputeLimits limits_of(const Options& o) { return ComputeLimits{o.n_ceiling}; }

int cmd_compute(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.n == 0) throw PreconditionError("--n must be at least 1");
  const ComputeLimits limits = limits_of(o);
  if (o.n > limits.n_ceiling)
    throw ResourceLimitError("n = " + std::to_string(o.n) + " exceeds the ceiling " +
                             std::to_string(limits.n_ceiling));
  std::optional<SparsePoly> poly;
  if (!o.cache_dir.empty()) {
    poly = cache_load(o.cache_dir, o.n);
    if (poly) err << "cache hit: " << cache_path(o.cache_dir, o.n).string() << '\n';
  }
  if (!poly) {
    poly = divided_ubern(o.n, limits);
    if (!o.cache_dir.empty()) {
      cache_store(o.cache_dir, o.n, *poly);
      err << "cache write: " << cache_path(o.cache_dir, o.n).string() << '\n';
    }
  }
  if (o.format == "json")
    out << poly_json(o.n, *poly) << '\n';
  else
    print_poly_text(out, o.n, *poly);
  return kExitOk;
}

unsigned need(const std::optional<unsigned>& v, const char* flag, const std::string& theorem) {
  if (!v) throw PreconditionError(std::string("--theorem ") + theorem + " needs " + flag);
  return *v;
}

CongruenceReport verify_once(const Options& o, Backend backend) {
  VerifyOptions vo;
  vo.backend = backend;
  vo.reading = o.reading == "printed" ? RhsReading::as_printed : RhsReading::corrected;
  vo.perturb_first_term = o.perturb;
  vo.limits = limits_of(o);
  const std::string& t = o.theorem;
  if (t == "3.5")
    return verify_odd_prime_kummer(need(o.p, "--p", t), need(o.s, "--s", t), need(o.l, "--l", t), vo);
  if (t == "4.8") return verify_two_adic_kummer(need(o.n_param, "--n", t), vo);
  if (t == "4.9") return verify_two_power_kummer(need(o.m, "--m", t), need(o.k, "--k", t), need(o.N, "--N", t), vo);
  if (t == "kummer") {
    CongruenceReport report = verify_classical_kummer(need(o.p, "--p", t), need(o.n_param, "--n", t), need(o.m, "--m", t));
    return report;
  }
  if (t == "3.4") return check_reduced_tau_bound(need(o.p, "--p", t), need(o.s, "--s", t), need(o.i, "--i", t));
  throw PreconditionError("unknown theorem selector '" + t + "'");
}

bool same_verdict(const CongruenceReport& a, const CongruenceReport& b) {
  if (a.holds != b.holds || a.prime != b.prime || a.modulus_exponent != b.modulus_exponent) return false;
  if (a.failures.size() != b.failures.size()) return false;
  for (std::size_t j = 0; j < a.failures.size(); ++j) {
    const auto& x = a.failures[j];
    const auto& y = b.failures[j];
    if (!(x.u == y.u) || x.lhs != y.lhs || x.rhs != y.rhs || x.vp_diff != y.vp_diff) return false;
  }
  return true;
}

bool backend_selectable(const std::string& theorem) {
  return theorem == "3.5" || theorem == "4.8" || theorem == "4.9";
}

// Runs the requested backend(s). Sets `agree` to false when --backend both
// finds a disagreement.
CongruenceReport verify_with_backends(const Options& o, bool& agree) {
  agree = true;
  if (!backend_selectable(o.theorem) || o.backend == "exact") return verify_once(o, Backend::exact);
  if (o.backend == "padic") return verify_once(o, Backend::padic);
  CongruenceReport exact = verify_once(o, Backend::exact);
  const CongruenceReport padic = verify_once(o, Backend::padic);
  agree = same_verdict(exact, padic);
  exact.context.notes.back() = agree ? "backends exact and padic agree" : "backends exact and padic DISAGREE";
  return exact;
}

std::string params_text(const ReportContext& ctx) {
  std::string s;
  for (const auto& [name, value] : ctx.params) {
    if (!s.empty()) s += ' ';
    s += name + "=" + std::to_string(value);
  }
  return s;
}

void print_report_text(std::ostream& out, const CongruenceReport& r) {
  out << r.context.statement << " [" << params_text(r.context) << "]";
  if (!r.context.case_label.empty()) out << " case: " << r.context.case_label;
  out << "\n  mod " << r.prime << "^" << r.modulus_exponent << ": " << (r.holds ? "holds" : "FAILS");
  if (!r.holds) out << " (" << r.failures.size() << " failing monomials)";
  out << '\n';
  for (const auto& note : r.context.notes) out << "  note: " << note << '\n';
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  bool agree = true;
  const CongruenceReport report = verify_with_backends(o, agree);
  if (o.format == "json" || !report.holds)
    out << report.to_json() << '\n';
  else
    print_report_text(out, report);
  if (!agree) {
    err << "exact and p-adic backends disagree\n";
    return kExitCounterexample;
  }
  return report.holds ? kExitOk : kExitCounterexample;
}

struct SweepCase {
  std::optional<unsigned> p, s, l, n, m, k, N, i;
};

std::vector<SweepCase> sweep_grid(const std::string& theorem) {
  std::vector<SweepCase> grid;
  if (theorem == "3.5") {
    for (auto [p, s, l] : std::vector<std::array<unsigned, 3>>{
             {5, 1, 5}, {5, 2, 5}, {5, 1, 10}, {7, 1, 7}, {3, 3, 3}, {3, 4, 3}, {3, 5, 3}, {3, 4, 9}})
      {
        SweepCase c;
        c.p = p, c.s = s, c.l = l;
        grid.push_back(c);
      }
  } else if (theorem == "4.8") {
    for (unsigned n = 12; n <= 40; n += 2) {
      SweepCase c;
      c.n = n;
      grid.push_back(c);
    }
  } else if (theorem == "4.9") {
    auto add = [&](unsigned m, unsigned k, unsigned N) {
      SweepCase c;
      c.m = m, c.k = k, c.N = N;
      grid.push_back(c);
    };
    for (unsigned k : {1u, 3u})
      for (unsigned m = 7; m <= 16; ++m) add(m, k, 3);
    for (unsigned m = 9; m <= 12; ++m) add(m, 1, 4);
  } else if (theorem == "3.4") {
    auto add = [&](unsigned p, unsigned s, unsigned i) {
      SweepCase c;
      c.p = p, c.s = s, c.i = i;
      grid.push_back(c);
    };
    for (unsigned s = 1; s <= 4; ++s)
      for (unsigned i = 0; i <= 4; ++i) add(3, s, i);
    for (unsigned s = 1; s <= 2; ++s)
      for (unsigned i = 0; i <= 2; ++i) add(5, s, i);
  } else {
    throw PreconditionError("sweep: unknown theorem selector '" + theorem + "'");
  }
  return grid;
}

unsigned weight_of(const std::string& theorem, const SweepCase& c) {
  if (theorem == "3.5") return (*c.s + *c.l) * (*c.p - 1);
  if (theorem == "4.8") return *c.n;
  if (theorem == "4.9") return *c.m + (*c.k << *c.N);
  return (*c.s * (*c.p - 1) + *c.i) * *c.p - *c.i;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  std::size_t run = 0, failed = 0, skipped = 0;
  nlohmann::ordered_json reports = nlohmann::ordered_json::array();
  bool agree_all = true;
  for (const SweepCase& c : sweep_grid(o.theorem)) {
    if (o.sweep_n_max && weight_of(o.theorem, c) > *o.sweep_n_max) {
      ++skipped;
      continue;
    }
    Options one = o;
    one.p = c.p, one.s = c.s, one.l = c.l, one.n_param = c.n, one.m = c.m, one.k = c.k, one.N = c.N, one.i = c.i;
    bool agree = true;
    const CongruenceReport report = verify_with_backends(one, agree);
    ++run;
    if (!report.holds || !agree) ++failed;
    agree_all = agree_all && agree;
    if (o.format == "json")
      reports.push_back(nlohmann::ordered_json::parse(report.to_json()));
    else
      out << (report.holds && agree ? "ok    " : "FAIL  ") << params_text(report.context) << "  mod " << report.prime
          << "^" << report.modulus_exponent << '\n';
  }
  if (o.format == "json")
    out << reports.dump() << '\n';
  else
    out << run << " instances, " << failed << " failing" << (skipped ? ", " + std::to_string(skipped) + " skipped" : "")
        << '\n';
  if (!agree_all) err << "exact and p-adic backends disagree\n";
  return failed == 0 ? kExitOk : kExitCounterexample;
}

int cmd_lemma(const Options& o, std::ostream& out) {
  const LemmaSummary summary = run_lemma(o.lemma, o.ranges);
  if (o.format == "json")
    out << summary.to_json() << '\n';
  else
    out << summary.to_text();
  return summary.holds() ? kExitOk : kExitCounterexample;
}

int cmd_classical(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.n_max == 0) throw PreconditionError("--n-max must be at least 1");
  const ComputeLimits limits = limits_of(o);
  if (o.n_max > limits.n_ceiling)
    throw ResourceLimitError("n_max = " + std::to_string(o.n_max) + " exceeds the ceiling " +
                             std::to_string(limits.n_ceiling));
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (unsigned n = 1; n <= o.n_max; ++n) {
    const Rational universal = n * specialize(divided_ubern(n, limits), classical_values(n));
    const Rational classical = classical_bernoulli(n);
    if (universal != classical) {
      err << "mismatch at n = " << n << ": specialization gives " << to_string(universal) << ", recurrence gives "
          << to_string(classical) << '\n';
      return kExitCounterexample;
    }
    if (o.format == "json") {
      nlohmann::ordered_json row;
      row["n"] = n;
      row["B_n"] = to_string(classical);
      rows.push_back(std::move(row));
    } else {
      out << "n=" << n << "  B_n=" << to_string(classical) << '\n';
    }
  }
  if (o.format == "json") out << rows.dump() << '\n';
  return kExitOk;
}

unsigned parse_ceiling(const std::string& text) {
  try {
    std::size_t used = 0;
    const long v = std::stol(text, &used);
    if (used == text.size() && v > 0 && v <= 1000) return unsigned(v);
  } catch (const std::exception&) {
  }
  throw PreconditionError("UBERN_N_CEILING must be a positive integer, got '" + text + "'");
}

}  // namespace

CliEnvironment CliEnvironment::from_process() {
  CliEnvironment env;
  if (const char* v = std::getenv("UBERN_CACHE_DIR"); v && *v) env.cache_dir = v;
  if (const char* v = std::getenv("UBERN_N_CEILING"); v && *v) env.n_ceiling = v;
  return env;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const CliEnvironment& env) {
  Options o;
  CLI::App app{"Divided universal Bernoulli numbers and their Kummer congruences", "ubern"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.add_option("--n-ceiling", o.n_ceiling, "largest weight n to compute (default 60)")
      ->check(CLI::Range(1u, 1000u));
  const auto formats = CLI::IsMember({"text", "json"});

  CLI::App* compute = app.add_subcommand("compute", "print B^_n/n as a sparse polynomial");
  compute->add_option("--n", o.n, "weight n >= 1")->required();
  compute->add_option("--format", o.format)->check(formats);
  compute->add_option("--cache-dir", o.cache_dir, "directory for ubern_<n>.jsonl cache files");

  auto add_params = [&](CLI::App* sub) {
    sub->add_option("--p", o.p);
    sub->add_option("--s", o.s);
    sub->add_option("--l", o.l);
    sub->add_option("--n", o.n_param);
    sub->add_option("--m", o.m);
    sub->add_option("--k", o.k);
    sub->add_option("--N", o.N);
    sub->add_option("--i", o.i);
    sub->add_option("--backend", o.backend)->check(CLI::IsMember({"exact", "padic", "both"}));
    sub->add_option("--reading", o.reading, "right-hand side reading: corrected or printed")
        ->check(CLI::IsMember({"corrected", "printed"}));
    sub->add_option("--format", o.format)->check(formats);
  };
  CLI::App* verify = app.add_subcommand("verify", "check one congruence instance");
  verify->add_option("--theorem", o.theorem, "3.5, 4.8, 4.9, kummer or 3.4")->required();
  verify->add_flag("--perturb", o.perturb, "add +1 to the first right-hand-side coefficient");
  add_params(verify);

  CLI::App* sweep = app.add_subcommand("sweep", "check a theorem over its standard grid");
  sweep->add_option("--theorem", o.theorem, "3.5, 4.8, 4.9 or 3.4")->required();
  sweep->add_option("--n-max", o.sweep_n_max, "skip instances of weight above this");
  sweep->add_option("--backend", o.backend)->check(CLI::IsMember({"exact", "padic", "both"}));
  sweep->add_option("--reading", o.reading)->check(CLI::IsMember({"corrected", "printed"}));
  sweep->add_option("--format", o.format)->check(formats);

  CLI::App* lemma = app.add_subcommand("lemma", "sweep a supporting lemma over its grid");
  lemma->add_option("--name", o.lemma, "lemma id")->required();
  lemma->add_option("--k-max", o.ranges.k_max);
  lemma->add_option("--a-max", o.ranges.a_max);
  lemma->add_option("--i-max", o.ranges.i_max);
  lemma->add_option("--l-max", o.ranges.l_max);
  lemma->add_option("--m-max", o.ranges.m_max);
  lemma->add_option("--n-max", o.ranges.n_max);
  lemma->add_option("--N-max", o.ranges.N_max);
  lemma->add_option("--samples", o.ranges.samples);
  lemma->add_option("--seed", o.ranges.seed);
  lemma->add_option("--format", o.format)->check(formats);

  CLI::App* classical = app.add_subcommand("classical", "compare the specialization with classical B_n");
  classical->add_option("--n-max", o.n_max)->required();
  classical->add_option("--format", o.format)->check(formats);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (app.count("--n-ceiling") == 0 && env.n_ceiling) o.n_ceiling = parse_ceiling(*env.n_ceiling);
    if (o.cache_dir.empty() && env.cache_dir) o.cache_dir = *env.cache_dir;
    if (compute->parsed()) return cmd_compute(o, out, err);
    if (verify->parsed()) return cmd_verify(o, out, err);
    if (sweep->parsed()) return cmd_sweep(o, out, err);
    if (lemma->parsed()) return cmd_lemma(o, out);
    if (classical->parsed()) return cmd_classical(o, out, err);
  } catch (const CacheError& e) {
    err << "cache error: " << e.what() << '\n';
    return kExitCache;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ResourceLimitError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace ubern
