#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ubern/partition.hpp"
#include "ubern/rational.hpp"
#include "ubern/ubern.hpp"

namespace ubern {

/// Theorem parameters attached to a verdict. Parameters keep insertion order
/// so the serialized form is stable.
struct ReportContext {
  std::string statement;
  std::vector<std::pair<std::string, long>> params;
  std::string case_label;
  std::vector<std::string> notes;
};

struct CongruenceFailure {
  Partition u;
  Rational lhs;
  Rational rhs;
  long vp_diff = 0;  ///< v_p(lhs - rhs); negative when the difference is not p-integral
  /// Per-partition required exponent, for checks whose modulus varies with u.
  std::optional<long> required;
};

/// Verdict of A == B (mod p^k) coefficient-wise. holds == failures.empty().
struct CongruenceReport {
  bool holds = true;
  std::uint64_t prime = 2;
  long modulus_exponent = 1;
  std::vector<CongruenceFailure> failures;  ///< canonical partition order
  ReportContext context;

  /// {"holds", "prime", "mod_exp", "context", "failures"} with fixed key order.
  std::string to_json(int indent = -1) const;
};

enum class Backend { exact, padic };

/// How to read the displayed right-hand sides where the printed statement
/// and the enumeration disagree. `as_printed` reproduces the statements
/// literally and is kept so the discrepancy stays testable.
enum class RhsReading { corrected, as_printed };

struct VerifyOptions {
  Backend backend = Backend::exact;
  RhsReading reading = RhsReading::corrected;
  /// Adds +1 to the first right-hand-side coefficient (canonical order):
  /// a mutation check of the congruence checker itself.
  bool perturb_first_term = false;
  ComputeLimits limits;
};

/// Coefficient-wise comparison over the union of monomials.
CongruenceReport poly_congruent(const SparsePoly& a, const SparsePoly& b, std::uint64_t p, long k);

/// Same verdict as poly_congruent(divided_ubern(n), rhs, p, k), with the
/// left side evaluated in Z_p / p^k through tau_padic. Exact coefficients
/// are only materialized for the failures listed in the report.
CongruenceReport ubern_congruent_padic(unsigned n, const SparsePoly& rhs, std::uint64_t p, long k,
                                       const ComputeLimits& limits = {});

/// z(p, n) = p^{1+v_p(n)} tau_u mod p^k, u the partition with n/(p-1)
/// copies of part p-1. The defining rational is checked to be p-integral.
BigInt z_residue(std::uint64_t p, unsigned n, unsigned k);

/// tau of the pure partition {(p-1): w/(p-1)}.
Rational pure_tau(std::uint64_t p, unsigned w);

/// A right-hand side with its modulus and the parameters it was built from.
struct KummerRhs {
  SparsePoly poly;
  unsigned n = 0;
  std::uint64_t prime = 2;
  long modulus_exponent = 1;
  ReportContext context;
};

/// Odd p, n = m + l(p-1), m = s(p-1), N = v_p(l), s >= ceil((N+2)/(p-2)):
///   c_{p-1}^l B^_m/m + (tau_pure(n) - tau_pure(m)) c_{p-1}^{l+s}
///   [+ Psi c_2^{l+s-4} c_8 when p = 3]                         mod p^{N+1}.
KummerRhs odd_prime_kummer_rhs(std::uint64_t p, unsigned s, unsigned l, RhsReading reading = RhsReading::corrected,
                               const ComputeLimits& limits = {});
CongruenceReport verify_odd_prime_kummer(std::uint64_t p, unsigned s, unsigned l, const VerifyOptions& options = {});

/// p = 2, even n >= 12: the closed-form residue of B^_n/n mod 4 (v_2(n) = 1)
/// or mod 8 (v_2(n) >= 2).
KummerRhs two_adic_kummer_rhs(unsigned n, RhsReading reading = RhsReading::corrected);
CongruenceReport verify_two_adic_kummer(unsigned n, const VerifyOptions& options = {});

/// p = 2, n = m + l, l = k 2^N with k odd, N >= 3, m >= 2N+1:
/// c_1^l B^_m/m plus the correction terms selected by m mod 8, mod 2^{N+1}.
KummerRhs two_power_kummer_rhs(unsigned m, unsigned k, unsigned N, RhsReading reading = RhsReading::corrected,
                               const ComputeLimits& limits = {});
CongruenceReport verify_two_power_kummer(unsigned m, unsigned k, unsigned N, const VerifyOptions& options = {});

/// B_n/n == B_m/m (mod p) for (p-1) !| n, n == m (mod p-1).
CongruenceReport verify_classical_kummer(std::uint64_t p, unsigned n, unsigned m);

/// With m = s(p-1) and n = (m+i)p - i: every u of weight n with at most i+1
/// parts has v_p(tau_u) >= s(p-2) - 1, i.e. tau_u == 0 mod p^{s(p-2)-1}.
CongruenceReport check_reduced_tau_bound(std::uint64_t p, unsigned s, unsigned i);

/// Gamma in n + d - 2 = 2(u_1 + 2u_3 + e) + Gamma (see check_gamma_buckets).
long two_adic_gamma(const Partition& u);

/// Writes n + d - 2 = 2(u_1 + 2u_3 + e) + Gamma, e = v_2(gamma_u) - v_2((2u_1)!)
/// - 2u_3 - v_2(u_3!), and checks Gamma against n' = n - u_1 - 3u_3:
/// Gamma = -2 if n' = 0, 0 if n' = 7u_7 with u_7 a power of 2, 1 if n' = 2,
/// Gamma >= 2 otherwise; for every partition of weight 1..n_max. A failure
/// records lhs = Gamma and rhs = the asserted value (or lower bound).
CongruenceReport check_gamma_buckets(unsigned n_max);

/// v_2(tau_u) >= u_3 + ceil(n'/2) - 1 (two less when n' = 7u_7) for every
/// partition of weight 1..n_max with n' > 0. Failures carry the bound in
/// `required`.
CongruenceReport check_two_adic_tau_bound(unsigned n_max);

}  // namespace ubern
