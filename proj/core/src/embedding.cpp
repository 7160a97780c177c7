#include "hdm/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace hdm {

namespace {

constexpr double kEigTol = 1e-8;  // relative eigenvalue threshold

double masked_cosh_norm2(const Hdm& dtilde, const ObservationMask& mask) {
  double norm2 = 0.0;
  for (const auto& [i, j] : mask.measured_pairs()) {
    const double c = std::cosh(dtilde(i, j));
    norm2 += 2.0 * c * c;
  }
  return norm2;
}

}  // namespace

std::pair<Mat, SolverReport> sdr_complete(
    const Hdm& dtilde, const ObservationMask& mask,
    const std::vector<OrdinalConstraint>& ordinal, int d,
    const EmbedOptions& options) {
  const int n = dtilde.n();
  if (mask.n() != n) {
    throw std::invalid_argument("sdr_complete: mask size mismatch");
  }
  if (d < 1) throw std::invalid_argument("sdr_complete: d must be >= 1");
  if (mask.measured_count() == 0 && ordinal.empty()) {
    throw std::invalid_argument(
        "sdr_complete: no data (empty mask and no ordinal constraints)");
  }
  validate_ordinal(ordinal, n);

  SplitSdpProblem problem = SplitSdpProblem::trace_objective(n);
  problem.mask = mask;
  problem.target_cosh = dtilde.values().array().cosh().matrix();
  problem.ordinal = ordinal;
  problem.epsilon2 = options.eps2;
  problem.min_distance = options.min_distance;
  if (options.max_violations_pct && !ordinal.empty()) {
    problem.slack_budget = (*options.max_violations_pct / 100.0) *
                           static_cast<double>(ordinal.size()) * options.eps2;
  }

  SolverConfig config = options.solver;
  config.logdet_rounds =
      options.objective == Objective::kLogDet ? options.logdet_rounds : 0;

  if (options.eps1) {
    problem.epsilon1 = *options.eps1;
  } else if (mask.measured_count() == 0) {
    problem.epsilon1 = 1.0;  // unused without measured entries
  } else {
    const double rel = options.eps1_rel.value_or(1e-4);
    problem.epsilon1 =
        std::max(rel * masked_cosh_norm2(dtilde, mask), 1e-12);
  }

  auto [split, report] = solve_split_sdp(problem, config);
  return {split.combined(), std::move(report)};
}

Mat low_rank_lorentz_approx(const Mat& g, int d) {
  if (g.rows() != g.cols() || g.rows() < 1) {
    throw std::invalid_argument("low_rank_lorentz_approx: matrix must be square");
  }
  if (d < 1) {
    throw std::invalid_argument("low_rank_lorentz_approx: d must be >= 1");
  }
  const int n = static_cast<int>(g.rows());
  Eigen::SelfAdjointEigenSolver<Mat> es((g + g.transpose()) / 2.0);
  const Vec& lam = es.eigenvalues();  // ascending
  if (lam(0) >= 0.0) {
    throw std::domain_error(
        "low_rank_lorentz_approx: no negative eigenvalue (input is not "
        "Lorentz-like)");
  }
  // Keep the most negative eigenvalue and the top d of the rest, clipped at
  // zero; everything else is dropped.
  Mat out = lam(0) * es.eigenvectors().col(0) * es.eigenvectors().col(0).transpose();
  const int keep = std::min(d, n - 1);
  for (int k = 0; k < keep; ++k) {
    const int idx = n - 1 - k;
    const double v = std::max(lam(idx), 0.0);
    if (v > 0.0) {
      out += v * es.eigenvectors().col(idx) * es.eigenvectors().col(idx).transpose();
    }
  }
  return (out + out.transpose()) / 2.0;
}

Mat spectral_factor(const Mat& g, int d) {
  if (g.rows() != g.cols() || g.rows() < 1) {
    throw std::invalid_argument("spectral_factor: matrix must be square");
  }
  if (d < 1) throw std::invalid_argument("spectral_factor: d must be >= 1");
  const int n = static_cast<int>(g.rows());
  Eigen::SelfAdjointEigenSolver<Mat> es((g + g.transpose()) / 2.0);
  const Vec& lam = es.eigenvalues();
  const double scale = std::max(lam.cwiseAbs().maxCoeff(), 1e-300);
  if (lam(0) >= 0.0) {
    throw std::domain_error("spectral_factor: no negative eigenvalue");
  }
  if (n > 1 && lam(1) < -kEigTol * scale) {
    throw std::domain_error(
        "spectral_factor: more than one negative eigenvalue; input is not a "
        "Lorentz Gramian");
  }
  Mat x = Mat::Zero(d + 1, n);
  // Fix the arbitrary eigenvector sign so row 0 leans positive; the gauge
  // freedom beyond that (any H-unitary R) stays at identity.
  Vec u0 = es.eigenvectors().col(0);
  if (u0.mean() < 0.0) u0 = -u0;
  x.row(0) = std::sqrt(-lam(0)) * u0.transpose();
  const int keep = std::min(d, n - 1);
  for (int k = 0; k < keep; ++k) {
    const int idx = n - 1 - k;
    const double v = std::max(lam(idx), 0.0);
    if (v > 0.0) {
      x.row(1 + k) = std::sqrt(v) * es.eigenvectors().col(idx).transpose();
    }
  }
  return x;
}

LoidProjection project_to_loid_detailed(const Vec& z) {
  const auto m = z.size();
  if (m < 2) {
    throw std::invalid_argument("project_to_loid: need length >= 2");
  }
  const double z0 = z(0);
  const Vec zbar = z.tail(m - 1);
  const double zbar_norm2 = zbar.squaredNorm();

  if (zbar_norm2 == 0.0) {
    if (z0 <= 2.0) {
      Vec apex = Vec::Zero(m);
      apex(0) = 1.0;
      return {LoidPoint(std::move(apex)), 1.0 - z0, false};
    }
    // Minimizers form a sphere of radius sqrt(z0^2/4 - 1); pick the
    // representative along the first spatial axis.
    Vec rep = Vec::Zero(m);
    rep(0) = z0 / 2.0;
    rep(1) = std::sqrt(z0 * z0 / 4.0 - 1.0);
    return {LoidPoint(std::move(rep)), -1.0, true};
  }

  // Root of (1 - lambda) sqrt(1 + |zbar|^2 / (1 + lambda)^2) = z0, which is
  // the stationarity system (I + lambda H) xhat = z restricted to the sheet.
  // Strictly decreasing from +inf (lambda -> -1) through 0 (lambda = 1) to
  // -inf, so each half-space gets a unique root: lambda in (-1, 1) for
  // z0 > 0, lambda in [1, inf) for z0 <= 0.
  auto g_of = [&](double lam) {
    const double s = 1.0 + lam;
    return (1.0 - lam) * std::sqrt(1.0 + zbar_norm2 / (s * s)) - z0;
  };
  double lo, hi;
  if (z0 > 0.0) {
    hi = 1.0;
    double w = 0.5;
    lo = -1.0 + w;
    while (g_of(lo) < 0.0 && w > 1e-300) {
      w /= 2.0;
      lo = -1.0 + w;
    }
  } else {
    lo = 1.0;
    hi = 2.0;
    while (g_of(hi) > 0.0 && hi < 1e300) hi *= 2.0;
  }

  double lam = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double val = g_of(lam);
    if (std::abs(val) <= 1e-12 * std::max(1.0, std::abs(z0)) ||
        hi - lo <= 1e-12 * std::max(1.0, std::abs(lam))) {
      break;
    }
    if (val > 0.0) {
      lo = lam;
    } else {
      hi = lam;
    }
    // Newton step, kept only when it stays inside the bracket.
    const double s = 1.0 + lam;
    const double h = std::sqrt(1.0 + zbar_norm2 / (s * s));
    const double dh = -zbar_norm2 / (s * s * s * h);
    const double dg = -h + (1.0 - lam) * dh;
    double next = lam - val / dg;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    lam = next;
  }

  Vec spatial = zbar / (1.0 + lam);
  return {LoidPoint::lift(spatial), lam, false};
}

LoidPoint project_to_loid(const Vec& z) {
  return project_to_loid_detailed(z).point;
}

EmbedPointsResult embed_points_detailed(const Mat& g, int d) {
  const Mat reduced = low_rank_lorentz_approx(g, d);
  Mat x = spectral_factor(reduced, d);
  // The factor is unique up to H-unitary motions and can land on the lower
  // sheet; flip globally before the per-point projection snaps everything
  // to the upper sheet.
  if (x.row(0).mean() < 0.0) x = -x;

  EmbedPointsResult result;
  const int n = static_cast<int>(g.rows());
  Eigen::SelfAdjointEigenSolver<Mat> es(reduced, Eigen::EigenvaluesOnly);
  const double scale = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
  int positive = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) > kEigTol * scale) ++positive;
  }
  result.padded_dims = std::max(0, d - positive);
  result.points.reserve(n);
  for (int j = 0; j < n; ++j) {
    result.points.push_back(project_to_loid(x.col(j)));
  }
  return result;
}

std::vector<LoidPoint> embed_points(const Mat& g, int d) {
  return embed_points_detailed(g, d).points;
}

Mat distance_matrix(const std::vector<LoidPoint>& points) {
  const int n = static_cast<int>(points.size());
  Mat d = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      d(i, j) = d(j, i) = loid_distance(points[i], points[j]);
    }
  }
  return d;
}

EmbeddingResult hdgp(const Hdm& dtilde, const ObservationMask& mask,
                     const std::vector<OrdinalConstraint>& ordinal, int d,
                     const EmbedOptions& options) {
  auto [g, report] = sdr_complete(dtilde, mask, ordinal, d, options);
  EmbedPointsResult embedded = embed_points_detailed(g, d);

  EmbeddingResult result{std::move(embedded.points),
                         {},
                         std::move(g),
                         std::move(report),
                         Hdm(Mat::Zero(1, 1)),
                         embedded.padded_dims};
  result.poincare_points.reserve(result.loid_points.size());
  for (const auto& p : result.loid_points) {
    result.poincare_points.push_back(to_poincare(p));
  }
  result.recon_hdm = Hdm(distance_matrix(result.loid_points));
  return result;
}

}  // namespace hdm
