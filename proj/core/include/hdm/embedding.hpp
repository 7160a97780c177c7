#pragma once

// End-to-end pipeline: complete/denoise the distance matrix through the
// semidefinite relaxation, reduce the solved Gramian to rank d+1, factor it
// spectrally, and project every column back onto the sheet.

#include <optional>
#include <utility>
#include <vector>

#include "hdm/gramian.hpp"
#include "hdm/solver.hpp"
#include "hdm/types.hpp"

namespace hdm {

enum class Objective { kTrace, kLogDet };

struct EmbedOptions {
  Objective objective = Objective::kTrace;
  int logdet_rounds = 4;  // used when objective == kLogDet
  /// Fidelity budget: absolute eps1 wins over eps1_rel, which scales the
  /// squared norm of the masked cosh targets. Unset means the default
  /// relative budget of 1e-4.
  std::optional<double> eps1;
  std::optional<double> eps1_rel;
  double eps2 = 1e-2;
  std::optional<double> min_distance;
  std::optional<double> max_violations_pct;  // p: zeta = (p/100) |O| eps2
  SolverConfig solver;
};

struct EmbeddingResult {
  std::vector<LoidPoint> loid_points;
  std::vector<PoincarePoint> poincare_points;
  Mat gramian;  // solved G = G+ - G-, before rank reduction
  SolverReport report;
  Hdm recon_hdm;  // pairwise distances of loid_points
  /// Number of positive-eigenvalue slots that had to be zero-padded because
  /// the Gramian had fewer than d positive eigenvalues (points collapse into
  /// a lower-dimensional sub-hyperboloid).
  int padded_dims = 0;
};

/// Stage 1: assemble and solve the relaxation. Requires at least one
/// measured entry or one ordinal constraint. Returns the solved Gramian
/// G = G+ - G- and the solver report.
std::pair<Mat, SolverReport> sdr_complete(
    const Hdm& dtilde, const ObservationMask& mask,
    const std::vector<OrdinalConstraint>& ordinal, int d,
    const EmbedOptions& options);

/// Best rank-(d+1) Lorentz Gramian approximation: keep the smallest
/// eigenvalue (must be negative) and the top d of the rest clipped at zero.
Mat low_rank_lorentz_approx(const Mat& g, int d);

/// Spectral factor X in R^{(d+1) x N} with X^T H X = g. Row 0 carries the
/// negative-eigenvalue direction; the H-unitary gauge is fixed to identity.
/// Throws when g has no negative eigenvalue or more than one.
Mat spectral_factor(const Mat& g, int d);

/// Projection of z in R^{d+1} onto the sheet, with the multiplier of the
/// stationarity system (I + lambda H) x = z and the degenerate-axis flag.
struct LoidProjection {
  LoidPoint point;
  double lambda = 0.0;
  bool degenerate = false;  // z = (z0, 0) with z0 > 2: sphere of minimizers
};

/// Euclidean-nearest point of L^d. Always succeeds; the axis-degenerate
/// case z = (z0, 0), z0 > 2 returns the deterministic representative along
/// the first spatial axis.
LoidProjection project_to_loid_detailed(const Vec& z);
LoidPoint project_to_loid(const Vec& z);

struct EmbedPointsResult {
  std::vector<LoidPoint> points;
  int padded_dims = 0;
};

/// Stage 2: rank reduction, factorization, upper-sheet flip, per-column
/// projection.
EmbedPointsResult embed_points_detailed(const Mat& g, int d);
std::vector<LoidPoint> embed_points(const Mat& g, int d);

/// Full pipeline; Poincare coordinates via stereographic projection.
EmbeddingResult hdgp(const Hdm& dtilde, const ObservationMask& mask,
                     const std::vector<OrdinalConstraint>& ordinal, int d,
                     const EmbedOptions& options);

/// Pairwise distance matrix of a point list.
Mat distance_matrix(const std::vector<LoidPoint>& points);

}  // namespace hdm
