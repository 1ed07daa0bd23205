#pragma once

#include <optional>
#include <string>
#include <vector>

#include "narreq/solver.hpp"

namespace narreq {

// One failed certification condition. `kind` is one of:
//   support-shape           carried mass off the admissible support form
//   step6-inequality        a linear inequality row is violated
//   step6-binding           positive mass without the required equality
//   payoff-dominance        some platform beats the equilibrium payoff level
//   support-payoff          a supported platform misses the payoff level
//   essential-policy-cause  a false narrative without a strict payoff gain
//   essential-simplicity    a narrative component without a strict payoff gain
struct Violation {
  std::string kind;
  std::optional<Platform> platform;
  std::optional<Narrative> narrative;
  Rat lhs;
  Rat rhs;
  std::string detail;
};

// One row of the linear system: alpha * excess / F(h, C_h) on the left,
// candidate mass on weak supersets of s on the right. Equality is mandatory
// exactly when the candidate puts mass on s itself.
struct BindingRow {
  GroupSet s = 0;
  Rat lhs;
  Rat rhs;
  Rat mass;
  bool required_binding = false;
};

// The certification verdict uses exact limit beliefs (tremble weight -> 0).
// The sensitivity probe re-evaluates supported payoffs under finite-weight
// mixtures with the uniform distribution and reports the worst relative
// deviation from the payoff level; it never changes the verdict.
struct SensitivityReport {
  Rat eps;
  Rat max_rel_dev_at_eps;
  Rat max_rel_dev_at_eps_tenth;
  bool pass_at_eps = false;  // deviation within 10^4 * eps
  bool pass_at_eps_tenth = false;
};

struct CertReport {
  bool passed = false;
  std::vector<Violation> violations;
  std::vector<BindingRow> rows;
  SensitivityReport sensitivity;
};

struct VerifyOptions {
  Rat eps = Rat(1, 1000000000);
};

CertReport verify_equilibrium(const PlatformTable& table, const PlatformDistribution& candidate,
                              const VerifyOptions& opts = VerifyOptions{});

// Independent equilibrium finder: enumerate every subset of eligible sets as
// the binding support, solve the exact linear equality system, keep solutions
// with strictly positive support masses and all slack inequalities satisfied,
// and require exactly one survivor.
EquilibriumResult oracle_solve(const Society& soc, const NarrativeDomain& domain, int bound = 12);

// Exact Gaussian elimination on a square system; nullopt when singular.
std::optional<std::vector<Rat>> solve_linear_system(std::vector<std::vector<Rat>> a,
                                                    std::vector<Rat> b);

}  // namespace narreq
