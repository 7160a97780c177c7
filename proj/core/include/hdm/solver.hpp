#pragma once

// First-order conic solver for the split-PSD relaxation
//
//   minimize    <Wp, G+> + <Wm, G->
//   subject to  G = G+ - G-,  G+, G- >= 0 (PSD)
//               diag(G) = -1
//               G_ij <= cap            (off-diagonal; cap = -cosh(min dist))
//               |W o (cosh[Dt] + G)|_F^2 <= eps1
//               L_k(G) + slack_k >= eps2,  slack >= 0,  sum slack <= zeta
//
// and for the PSD-constrained least-squares baseline
//
//   minimize |dsq - K(G)|_F^2  over  G >= 0, G 1 = 0,
//   K(G) = -2G + diag(G) 1^T + 1 diag(G)^T.
//
// The split program is solved by consensus ADMM: one copy variable per
// constraint family, each with a closed-form projection (full
// eigendecomposition for the PSD cones), and a sparse normal-equations
// solve for the coupling step whose factorization is independent of the
// penalty parameter. The method produces no infeasibility certificates;
// persistently large residuals signal likely infeasibility.

#include <optional>
#include <utility>
#include <vector>

#include "hdm/gramian.hpp"
#include "hdm/types.hpp"

namespace hdm {

/// Ordinal datum: d(x_{i1}, x_{i2}) <= d(x_{i3}, x_{i4}).
/// Requires i1 < i2, i3 < i4 and (i1,i2) != (i3,i4).
struct OrdinalConstraint {
  int i1 = 0;
  int i2 = 0;
  int i3 = 0;
  int i4 = 0;
};

/// Throws unless every constraint satisfies the index invariants for a
/// problem on n points.
void validate_ordinal(const std::vector<OrdinalConstraint>& ordinal, int n);

/// Assembled conic program. `target_cosh` holds cosh of the measured
/// distances wherever the mask is 1 (other entries are ignored).
struct SplitSdpProblem {
  int n = 0;
  Mat weight_plus;   // objective weight on G+ (identity for trace)
  Mat weight_minus;  // objective weight on G-
  ObservationMask mask{Eigen::MatrixXi()};
  Mat target_cosh;
  double epsilon1 = 0.0;  // fidelity budget, > 0 when mask nonempty
  std::vector<OrdinalConstraint> ordinal;
  double epsilon2 = 1e-2;  // ordinal margin
  std::optional<double> min_distance;   // lower bound on all pairwise dists
  std::optional<double> slack_budget;   // zeta_p >= 0 enables slacks

  /// Convenience builder with trace objective and empty data.
  static SplitSdpProblem trace_objective(int n);

  /// Throws on violated invariants (sizes, signs, mask/target consistency).
  void validate() const;
};

struct SolverConfig {
  int max_iters = 20000;
  double rho = 1.0;          // initial penalty; self-adapted by x2 / /2
  double tol_primal = 1e-6;  // relative
  double tol_dual = 1e-6;    // relative
  int logdet_rounds = 0;     // 0 = trace objective
  double logdet_delta0 = 1e-2;  // delta_k = delta0 * 2^{-k}
};

struct SolverReport {
  int iterations = 0;
  double primal_residual = 0.0;  // absolute |Ax - z|_2 at exit
  double dual_residual = 0.0;    // absolute rho |A^T (z - z_prev)|_2 at exit
  double objective = 0.0;
  bool converged = false;
  Vec slacks;  // per-ordinal-constraint slack (zeros when disabled)
  /// Surrogate objective sum_i log det(G_i + delta_k I) per reweighting
  /// round (empty unless logdet_rounds > 0).
  std::vector<double> logdet_values;
};

/// Constraint-wise violations of a candidate split, measured exactly as the
/// solver's contract states them. Usable both as a post-solve audit and to
/// check a hand-constructed feasible point.
struct ConstraintAudit {
  double diag_violation = 0.0;      // max_i |G_ii + 1|
  double cap_violation = 0.0;       // max_{i<j} max(0, G_ij - cap)
  double fidelity = 0.0;            // |W o (cosh Dt + G)|_F^2
  double min_ordinal_margin = 0.0;  // min_k (L_k(G) + slack_k); +inf if none
  double slack_sum = 0.0;
  double psd_floor_plus = 0.0;      // max(0, -lambda_min(G+))
  double psd_floor_minus = 0.0;
};

ConstraintAudit audit_split(const SplitSdpProblem& problem,
                            const HGramianSplit& split, const Vec& slacks);

/// Solves the split program. Non-convergence within max_iters returns the
/// best iterate with converged = false. With logdet_rounds > 0 the solve is
/// repeated with weights reset to (G+ + delta_k I)^{-1}, (G- + delta_k I)^{-1}
/// each round, warm-started from the previous round.
std::pair<HGramianSplit, SolverReport> solve_split_sdp(
    const SplitSdpProblem& problem, const SolverConfig& config);

/// Minimum achievable fidelity |W o (cosh Dt + G)|_F^2 over the remaining
/// constraints (epsilon1 is ignored). Zero whenever the measured entries are
/// mutually realizable; positive only when they conflict with the ordinal
/// margins or the minimum-distance cap, which quantifies the tension between
/// the two measurement kinds.
double min_fidelity_estimate(const SplitSdpProblem& problem,
                             const SolverConfig& config);

/// Frobenius-nearest PSD matrix: eigendecompose, clip negatives at zero.
Mat psd_project(const Mat& m);

/// Reweighting step of the log-det heuristic:
/// (Wp, Wm) = ((G+ + delta I)^{-1}, (G- + delta I)^{-1}).
std::pair<Mat, Mat> logdet_reweight(const HGramianSplit& split, double delta);

/// Projected-gradient solve of the PSD least-squares baseline above.
/// dsq must be symmetric, hollow and nonnegative (squared distances).
std::pair<Mat, SolverReport> solve_psd_least_squares(const Mat& dsq,
                                                     const SolverConfig& config);

/// Forward map K(G) = -2G + diag(G) 1^T + 1 diag(G)^T.
Mat edm_from_gram(const Mat& g);

}  // namespace hdm
