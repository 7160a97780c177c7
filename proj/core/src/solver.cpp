#include "hdm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>

namespace hdm {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

int svec_size(int n) { return n * (n + 1) / 2; }

// Column-major upper-triangle index of (i, j) with i <= j.
int svec_index(int i, int j) { return j * (j + 1) / 2 + i; }

// Isometric vectorization: off-diagonal entries scaled by sqrt(2) so that
// <svec(A), svec(B)> equals the Frobenius inner product.
Vec svec(const Mat& m) {
  const int n = static_cast<int>(m.rows());
  Vec v(svec_size(n));
  int k = 0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i <= j; ++i) {
      v(k++) = (i == j) ? m(i, j) : kSqrt2 * m(i, j);
    }
  }
  return v;
}

Mat smat(const Vec& v, int n) {
  Mat m(n, n);
  int k = 0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i <= j; ++i) {
      const double val = (i == j) ? v(k) : v(k) / kSqrt2;
      m(i, j) = val;
      m(j, i) = val;
      ++k;
    }
  }
  return m;
}

// Projection onto { e >= 0, sum e <= zeta }.
Vec project_budget_simplex(const Vec& v, double zeta) {
  Vec e = v.cwiseMax(0.0);
  if (e.sum() <= zeta) return e;
  std::vector<double> sorted(v.data(), v.data() + v.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double prefix = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    prefix += sorted[k];
    const double cand = (prefix - zeta) / static_cast<double>(k + 1);
    if (k + 1 == sorted.size() || sorted[k + 1] - cand <= 0.0) {
      theta = cand;
      break;
    }
  }
  return (v.array() - theta).cwiseMax(0.0);
}

double offdiag_cap(const SplitSdpProblem& p) {
  const double l = p.min_distance.value_or(0.0);
  return -std::cosh(std::max(0.0, l));
}

struct Workspace {
  const SplitSdpProblem* problem = nullptr;
  int n = 0;
  int E = 0;          // svec length
  int K = 0;          // ordinal constraints
  int nF = 0;         // masked pairs
  bool slack = false;
  int nvars = 0;
  int nrows = 0;
  int rP = 0, rQ = 0, rD = 0, rF = 0, rO = 0, rE = 0;
  SpMat A, At;
  Eigen::SimplicialLDLT<SpMat> ldlt;
  std::vector<char> is_diag;  // per svec index
  double cap = -1.0;
  Vec fid_center;     // svec-scaled -sqrt(2) cosh targets
  double fid_radius = 0.0;
  double eps2 = 1e-2;
  double zeta = 0.0;
  std::vector<std::pair<int, int>> masked;
};

void build_workspace(const SplitSdpProblem& p, Workspace& ws) {
  ws.problem = &p;
  ws.n = p.n;
  ws.E = svec_size(p.n);
  ws.K = static_cast<int>(p.ordinal.size());
  ws.masked = p.mask.measured_pairs();
  ws.nF = static_cast<int>(ws.masked.size());
  ws.slack = p.slack_budget.has_value() && *p.slack_budget > 0.0 && ws.K > 0;
  ws.zeta = ws.slack ? *p.slack_budget : 0.0;
  ws.eps2 = p.epsilon2;
  ws.cap = offdiag_cap(p);
  ws.fid_radius = std::sqrt(p.epsilon1);

  ws.nvars = 2 * ws.E + (ws.slack ? ws.K : 0);
  ws.rP = 0;
  ws.rQ = ws.E;
  ws.rD = 2 * ws.E;
  ws.rF = 3 * ws.E;
  ws.rO = ws.rF + ws.nF;
  ws.rE = ws.rO + ws.K;
  ws.nrows = ws.rE + (ws.slack ? ws.K : 0);

  ws.is_diag.assign(ws.E, 0);
  for (int i = 0; i < ws.n; ++i) ws.is_diag[svec_index(i, i)] = 1;

  std::vector<Triplet> trip;
  trip.reserve(6 * ws.E + 5 * ws.K + 2 * ws.nF);
  for (int e = 0; e < ws.E; ++e) {
    trip.emplace_back(ws.rP + e, e, 1.0);
    trip.emplace_back(ws.rQ + e, ws.E + e, 1.0);
    trip.emplace_back(ws.rD + e, e, 1.0);
    trip.emplace_back(ws.rD + e, ws.E + e, -1.0);
  }
  ws.fid_center.resize(ws.nF);
  for (int t = 0; t < ws.nF; ++t) {
    const auto [i, j] = ws.masked[t];
    const int e = svec_index(i, j);
    trip.emplace_back(ws.rF + t, e, 1.0);
    trip.emplace_back(ws.rF + t, ws.E + e, -1.0);
    ws.fid_center(t) = -kSqrt2 * p.target_cosh(i, j);
  }
  for (int k = 0; k < ws.K; ++k) {
    const auto& oc = p.ordinal[k];
    const int ea = svec_index(oc.i1, oc.i2);
    const int eb = svec_index(oc.i3, oc.i4);
    trip.emplace_back(ws.rO + k, ea, 1.0 / kSqrt2);
    trip.emplace_back(ws.rO + k, ws.E + ea, -1.0 / kSqrt2);
    trip.emplace_back(ws.rO + k, eb, -1.0 / kSqrt2);
    trip.emplace_back(ws.rO + k, ws.E + eb, 1.0 / kSqrt2);
    if (ws.slack) trip.emplace_back(ws.rO + k, 2 * ws.E + k, 1.0);
  }
  if (ws.slack) {
    for (int k = 0; k < ws.K; ++k) {
      trip.emplace_back(ws.rE + k, 2 * ws.E + k, 1.0);
    }
  }

  ws.A.resize(ws.nrows, ws.nvars);
  ws.A.setFromTriplets(trip.begin(), trip.end());
  ws.A.makeCompressed();
  ws.At = ws.A.transpose();
  ws.At.makeCompressed();

  SpMat ata = ws.At * ws.A;
  ata.makeCompressed();
  ws.ldlt.compute(ata);
  if (ws.ldlt.info() != Eigen::Success) {
    throw std::runtime_error("solve_split_sdp: normal-equations factorization failed");
  }
}

Vec objective_vector(const Workspace& ws, const Mat& wp, const Mat& wm) {
  Vec c = Vec::Zero(ws.nvars);
  c.segment(0, ws.E) = svec((wp + wp.transpose()) / 2.0);
  c.segment(ws.E, ws.E) = svec((wm + wm.transpose()) / 2.0);
  return c;
}

struct AdmmState {
  Vec x, z, u;
  double rho = 1.0;
};

void project_blocks(const Workspace& ws, const Vec& v, Vec& z,
                    bool fidelity_min, double rho) {
  // PSD cones: unpack, eigendecompose, clip.
  z.segment(ws.rP, ws.E) = svec(psd_project(smat(v.segment(ws.rP, ws.E), ws.n)));
  z.segment(ws.rQ, ws.E) = svec(psd_project(smat(v.segment(ws.rQ, ws.E), ws.n)));
  // Diagonal pin and off-diagonal cap, elementwise in svec coordinates.
  const double svec_cap = kSqrt2 * ws.cap;
  for (int e = 0; e < ws.E; ++e) {
    const double val = v(ws.rD + e);
    z(ws.rD + e) = ws.is_diag[e] ? -1.0 : std::min(val, svec_cap);
  }
  // Fidelity: ball of radius sqrt(eps1) around the cosh targets, or the
  // proximal step of |y - center|^2 when minimizing fidelity itself.
  if (ws.nF > 0) {
    auto y = v.segment(ws.rF, ws.nF);
    if (fidelity_min) {
      z.segment(ws.rF, ws.nF) = (rho * y + 2.0 * ws.fid_center) / (rho + 2.0);
    } else {
      Vec diff = y - ws.fid_center;
      const double norm = diff.norm();
      if (norm <= ws.fid_radius) {
        z.segment(ws.rF, ws.nF) = y;
      } else {
        z.segment(ws.rF, ws.nF) = ws.fid_center + (ws.fid_radius / norm) * diff;
      }
    }
  }
  // Ordinal margins.
  for (int k = 0; k < ws.K; ++k) {
    z(ws.rO + k) = std::max(v(ws.rO + k), ws.eps2);
  }
  // Slack budget.
  if (ws.slack) {
    z.segment(ws.rE, ws.K) =
        project_budget_simplex(v.segment(ws.rE, ws.K), ws.zeta);
  }
}

AdmmState cold_state(const Workspace& ws, double rho) {
  AdmmState st;
  st.x = Vec::Zero(ws.nvars);
  st.z = Vec::Zero(ws.nrows);
  st.u = Vec::Zero(ws.nrows);
  project_blocks(ws, st.z, st.z, false, rho);
  st.rho = rho;
  return st;
}

SolverReport admm_solve(const Workspace& ws, const Vec& c,
                        const SolverConfig& config, bool fidelity_min,
                        AdmmState& st) {
  SolverReport report;
  const double sqrt_m = std::sqrt(static_cast<double>(ws.nrows));
  const double sqrt_n = std::sqrt(static_cast<double>(ws.nvars));
  constexpr double kRelax = 1.6;      // over-relaxation
  constexpr int kRhoCadence = 50;     // iterations between penalty updates
  Vec ax = ws.A * st.x;
  for (int iter = 1; iter <= config.max_iters; ++iter) {
    Vec rhs = ws.At * (st.z - st.u) - c / st.rho;
    st.x = ws.ldlt.solve(rhs);
    ax.noalias() = ws.A * st.x;
    Vec relaxed = kRelax * ax + (1.0 - kRelax) * st.z;
    Vec v = relaxed + st.u;
    Vec z_prev = st.z;
    project_blocks(ws, v, st.z, fidelity_min, st.rho);
    st.u += relaxed - st.z;

    const double r = (ax - st.z).norm();
    const double s = st.rho * (ws.At * (st.z - z_prev)).norm();
    const double eps_pri =
        1e-12 * sqrt_m + config.tol_primal * std::max(ax.norm(), st.z.norm());
    const double eps_dual =
        1e-12 * sqrt_n + config.tol_dual * st.rho * (ws.At * st.u).norm();

    report.iterations = iter;
    report.primal_residual = r;
    report.dual_residual = s;
#ifdef HDM_SOLVER_TRACE
    if (iter % 2000 == 0 || iter == 1) {
      std::fprintf(stderr, "iter %6d rho %.3e r %.3e (eps %.3e) s %.3e (eps %.3e)\n",
                   iter, st.rho, r, eps_pri, s, eps_dual);
    }
#endif
    if (r <= eps_pri && s <= eps_dual) {
      report.converged = true;
      break;
    }
    // Residual balancing keeps the penalty useful on ill-scaled cosh
    // targets whose entries grow exponentially with distance. Updated on a
    // cadence, comparing tolerance-normalized residuals, so the transients
    // each change excites can settle before the next one.
    if (iter % kRhoCadence == 0) {
      const double pri_ratio = r / std::max(eps_pri, 1e-300);
      const double dual_ratio = s / std::max(eps_dual, 1e-300);
      if (pri_ratio > 10.0 * dual_ratio && st.rho < 1e8) {
        st.rho *= 2.0;
        st.u /= 2.0;
      } else if (dual_ratio > 10.0 * pri_ratio && st.rho > 1e-8) {
        st.rho /= 2.0;
        st.u *= 2.0;
      }
    }
  }
  report.objective = c.dot(st.x);
  return report;
}

HGramianSplit split_from_state(const Workspace& ws, const AdmmState& st) {
  return HGramianSplit{smat(st.z.segment(ws.rP, ws.E), ws.n),
                       smat(st.z.segment(ws.rQ, ws.E), ws.n)};
}

Vec slacks_from_state(const Workspace& ws, const AdmmState& st) {
  if (ws.slack) return st.z.segment(ws.rE, ws.K);
  return Vec::Zero(ws.K);
}

double logdet_surrogate(const HGramianSplit& split, double delta) {
  double total = 0.0;
  for (const Mat* m : {&split.g_plus, &split.g_minus}) {
    Eigen::SelfAdjointEigenSolver<Mat> es(*m, Eigen::EigenvaluesOnly);
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
      total += std::log(std::max(es.eigenvalues()(i), 0.0) + delta);
    }
  }
  return total;
}

void check_config(const SolverConfig& config) {
  if (config.max_iters < 1) {
    throw std::invalid_argument("SolverConfig: max_iters must be >= 1");
  }
  if (!(config.tol_primal > 0.0) || !(config.tol_dual > 0.0)) {
    throw std::invalid_argument("SolverConfig: tolerances must be positive");
  }
  if (!(config.rho > 0.0)) {
    throw std::invalid_argument("SolverConfig: rho must be positive");
  }
  if (config.logdet_rounds < 0 || !(config.logdet_delta0 > 0.0)) {
    throw std::invalid_argument("SolverConfig: bad log-det schedule");
  }
}

}  // namespace

void validate_ordinal(const std::vector<OrdinalConstraint>& ordinal, int n) {
  for (const auto& oc : ordinal) {
    const bool in_range = oc.i1 >= 0 && oc.i2 < n && oc.i3 >= 0 && oc.i4 < n;
    if (!in_range || oc.i1 >= oc.i2 || oc.i3 >= oc.i4 ||
        (oc.i1 == oc.i3 && oc.i2 == oc.i4)) {
      std::ostringstream msg;
      msg << "OrdinalConstraint (" << oc.i1 << "," << oc.i2 << "," << oc.i3
          << "," << oc.i4 << ") violates index invariants for n = " << n;
      throw std::invalid_argument(msg.str());
    }
  }
}

SplitSdpProblem SplitSdpProblem::trace_objective(int n) {
  SplitSdpProblem p;
  p.n = n;
  p.weight_plus = Mat::Identity(n, n);
  p.weight_minus = Mat::Identity(n, n);
  p.mask = ObservationMask::none(n);
  p.target_cosh = Mat::Zero(n, n);
  p.epsilon1 = 1.0;
  return p;
}

void SplitSdpProblem::validate() const {
  if (n < 1) throw std::invalid_argument("SplitSdpProblem: n must be >= 1");
  if (mask.n() != n) {
    throw std::invalid_argument("SplitSdpProblem: mask size mismatch");
  }
  if (weight_plus.rows() != n || weight_plus.cols() != n ||
      weight_minus.rows() != n || weight_minus.cols() != n) {
    throw std::invalid_argument("SplitSdpProblem: weight size mismatch");
  }
  if (!(epsilon1 > 0.0) || !(epsilon2 > 0.0)) {
    throw std::invalid_argument("SplitSdpProblem: epsilon1, epsilon2 must be > 0");
  }
  if (min_distance && !(*min_distance >= 0.0)) {
    throw std::invalid_argument("SplitSdpProblem: min_distance must be >= 0");
  }
  if (slack_budget && !(*slack_budget >= 0.0)) {
    throw std::invalid_argument("SplitSdpProblem: slack_budget must be >= 0");
  }
  if (mask.measured_count() > 0) {
    if (target_cosh.rows() != n || target_cosh.cols() != n) {
      throw std::invalid_argument("SplitSdpProblem: target size mismatch");
    }
    for (const auto& [i, j] : mask.measured_pairs()) {
      const double t = target_cosh(i, j);
      if (!std::isfinite(t) || t < 1.0 - 1e-12) {
        throw std::invalid_argument(
            "SplitSdpProblem: masked targets must be finite cosh values >= 1");
      }
    }
  }
  validate_ordinal(ordinal, n);
}

ConstraintAudit audit_split(const SplitSdpProblem& problem,
                            const HGramianSplit& split, const Vec& slacks) {
  ConstraintAudit audit;
  const Mat g = split.combined();
  const int n = problem.n;
  const double cap = offdiag_cap(problem);
  for (int i = 0; i < n; ++i) {
    audit.diag_violation = std::max(audit.diag_violation, std::abs(g(i, i) + 1.0));
    for (int j = i + 1; j < n; ++j) {
      audit.cap_violation = std::max(audit.cap_violation, g(i, j) - cap);
    }
  }
  audit.cap_violation = std::max(audit.cap_violation, 0.0);
  double fid = 0.0;
  for (const auto& [i, j] : problem.mask.measured_pairs()) {
    const double r = problem.target_cosh(i, j) + g(i, j);
    fid += 2.0 * r * r;
  }
  audit.fidelity = fid;
  audit.min_ordinal_margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < problem.ordinal.size(); ++k) {
    const auto& oc = problem.ordinal[k];
    const double margin = g(oc.i1, oc.i2) - g(oc.i3, oc.i4) +
                          (slacks.size() > static_cast<Eigen::Index>(k)
                               ? slacks(static_cast<Eigen::Index>(k))
                               : 0.0);
    audit.min_ordinal_margin = std::min(audit.min_ordinal_margin, margin);
  }
  audit.slack_sum = slacks.size() > 0 ? slacks.sum() : 0.0;
  for (const Mat* m : {&split.g_plus, &split.g_minus}) {
    Eigen::SelfAdjointEigenSolver<Mat> es(*m, Eigen::EigenvaluesOnly);
    const double floor = std::max(0.0, -es.eigenvalues().minCoeff());
    if (m == &split.g_plus) {
      audit.psd_floor_plus = floor;
    } else {
      audit.psd_floor_minus = floor;
    }
  }
  return audit;
}

std::pair<HGramianSplit, SolverReport> solve_split_sdp(
    const SplitSdpProblem& problem, const SolverConfig& config) {
  problem.validate();
  check_config(config);
  Workspace ws;
  build_workspace(problem, ws);
  AdmmState state = cold_state(ws, config.rho);

  Vec c = objective_vector(ws, problem.weight_plus, problem.weight_minus);
  SolverReport report = admm_solve(ws, c, config, false, state);
  HGramianSplit split = split_from_state(ws, state);

  if (config.logdet_rounds > 0) {
    int total_iters = report.iterations;
    std::vector<double> values;
    values.push_back(logdet_surrogate(split, config.logdet_delta0));
    for (int k = 0; k < config.logdet_rounds; ++k) {
      const double delta = config.logdet_delta0 * std::pow(2.0, -k);
      auto [wp, wm] = logdet_reweight(split, delta);
      c = objective_vector(ws, wp, wm);
      report = admm_solve(ws, c, config, false, state);
      total_iters += report.iterations;
      split = split_from_state(ws, state);
      values.push_back(logdet_surrogate(split, delta));
    }
    report.iterations = total_iters;
    report.logdet_values = std::move(values);
  }

  report.slacks = slacks_from_state(ws, state);
  report.objective = (problem.weight_plus.cwiseProduct(split.g_plus)).sum() +
                     (problem.weight_minus.cwiseProduct(split.g_minus)).sum();
  // The returned split mixes consensus copies, so its constraint violations
  // can exceed |Ax - z| by a small factor; report the measured value so the
  // residual is a true feasibility bound for what the caller receives.
  const ConstraintAudit audit = audit_split(problem, split, report.slacks);
  double violation = std::max(audit.diag_violation, audit.cap_violation);
  if (ws.nF > 0) {
    violation = std::max(
        violation, std::sqrt(std::max(audit.fidelity, 0.0)) -
                       std::sqrt(problem.epsilon1));
  }
  if (ws.K > 0) {
    violation =
        std::max(violation, problem.epsilon2 - audit.min_ordinal_margin);
  }
  report.primal_residual = std::max(report.primal_residual, violation);
  return {std::move(split), std::move(report)};
}

double min_fidelity_estimate(const SplitSdpProblem& problem,
                             const SolverConfig& config) {
  problem.validate();
  check_config(config);
  if (problem.mask.measured_count() == 0) return 0.0;
  Workspace ws;
  build_workspace(problem, ws);
  AdmmState state = cold_state(ws, config.rho);
  // Vanishing trace term keeps the flat directions of the split bounded.
  Vec c = objective_vector(ws, 1e-8 * Mat::Identity(problem.n, problem.n),
                           1e-8 * Mat::Identity(problem.n, problem.n));
  admm_solve(ws, c, config, true, state);
  const HGramianSplit split = split_from_state(ws, state);
  return audit_split(problem, split, Vec::Zero(ws.K)).fidelity;
}

Mat psd_project(const Mat& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("psd_project: matrix must be square");
  }
  Eigen::SelfAdjointEigenSolver<Mat> es((m + m.transpose()) / 2.0);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("psd_project: eigendecomposition failed");
  }
  const Vec lam = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
}

std::pair<Mat, Mat> logdet_reweight(const HGramianSplit& split, double delta) {
  if (!(delta > 0.0)) {
    throw std::invalid_argument("logdet_reweight: delta must be positive");
  }
  auto inv = [delta](const Mat& g) {
    const int n = static_cast<int>(g.rows());
    Mat shifted = (g + g.transpose()) / 2.0;
    shifted.diagonal().array() += delta;
    Eigen::LLT<Mat> llt(shifted);
    if (llt.info() != Eigen::Success) {
      throw std::runtime_error("logdet_reweight: matrix not positive definite");
    }
    Mat w = llt.solve(Mat::Identity(n, n));
    return ((w + w.transpose()) / 2.0).eval();
  };
  return {inv(split.g_plus), inv(split.g_minus)};
}

Mat edm_from_gram(const Mat& g) {
  const Vec d = g.diagonal();
  const int n = static_cast<int>(g.rows());
  return -2.0 * g + d * Mat::Ones(1, n) + Mat::Ones(n, 1) * d.transpose();
}

namespace {

// Adjoint of edm_from_gram under the Frobenius inner product.
Mat edm_adjoint(const Mat& y) {
  const int n = static_cast<int>(y.rows());
  Mat out = -2.0 * y;
  Vec rows = y * Vec::Ones(n);
  Vec cols = y.transpose() * Vec::Ones(n);
  out.diagonal() += rows + cols;
  return out;
}

// Projection onto { G >= 0, G 1 = 0 }: center, then clip eigenvalues. The
// all-ones direction stays in the kernel, so the row-sum constraint
// survives the clip.
Mat project_centered_psd(const Mat& m) {
  const int n = static_cast<int>(m.rows());
  const Mat j = Mat::Identity(n, n) - Mat::Ones(n, n) / static_cast<double>(n);
  return psd_project(j * ((m + m.transpose()) / 2.0) * j);
}

}  // namespace

std::pair<Mat, SolverReport> solve_psd_least_squares(const Mat& dsq,
                                                     const SolverConfig& config) {
  check_config(config);
  if (dsq.rows() != dsq.cols() || dsq.rows() < 1) {
    throw std::invalid_argument("solve_psd_least_squares: matrix must be square");
  }
  const int n = static_cast<int>(dsq.rows());
  const double scale = std::max(1.0, dsq.cwiseAbs().maxCoeff());
  if ((dsq - dsq.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale ||
      dsq.diagonal().cwiseAbs().maxCoeff() > 1e-12 * scale ||
      dsq.minCoeff() < -1e-12 * scale) {
    throw std::invalid_argument(
        "solve_psd_least_squares: need symmetric, hollow, nonnegative input");
  }

  // Lipschitz estimate of the gradient via power iteration on K* K.
  Mat probe = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i <= j; ++i) {
      probe(i, j) = probe(j, i) = std::sin(1.0 + 3.7 * i + 1.3 * j);
    }
  }
  double op_norm = 1.0;
  for (int it = 0; it < 60; ++it) {
    Mat next = edm_adjoint(edm_from_gram(probe));
    op_norm = next.norm() / std::max(probe.norm(), 1e-300);
    probe = next / std::max(next.norm(), 1e-300);
  }
  const double lip = 2.0 * op_norm * 1.05;

  SolverReport report;
  Mat g = project_centered_psd(-0.5 * dsq);
  Mat g_prev = g;
  double t_prev = 1.0;
  const double ref = std::max(1.0, dsq.norm());
  for (int iter = 1; iter <= config.max_iters; ++iter) {
    // FISTA extrapolation with restart on non-monotone steps.
    const double t = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_prev * t_prev));
    Mat y = g + ((t_prev - 1.0) / t) * (g - g_prev);
    Mat grad = 2.0 * edm_adjoint(edm_from_gram(y) - dsq);
    Mat g_next = project_centered_psd(y - grad / lip);
    if ((edm_from_gram(g_next) - dsq).squaredNorm() >
        (edm_from_gram(g) - dsq).squaredNorm()) {
      grad = 2.0 * edm_adjoint(edm_from_gram(g) - dsq);
      g_next = project_centered_psd(g - grad / lip);
      t_prev = 1.0;
    } else {
      t_prev = t;
    }
    g_prev = g;
    g = g_next;

    Mat grad_at_g = 2.0 * edm_adjoint(edm_from_gram(g) - dsq);
    const double stationarity =
        lip * (g - project_centered_psd(g - grad_at_g / lip)).norm() / ref;
    report.iterations = iter;
    report.dual_residual = stationarity;
    if (stationarity <= config.tol_dual) {
      report.converged = true;
      break;
    }
  }
  report.primal_residual = (g * Vec::Ones(n)).norm();
  report.objective = (edm_from_gram(g) - dsq).squaredNorm();
  return {std::move(g), std::move(report)};
}

}  // namespace hdm
