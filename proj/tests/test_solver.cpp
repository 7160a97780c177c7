#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "hdm/embedding.hpp"
#include "hdm/gramian.hpp"
#include "hdm/solver.hpp"

using namespace hdm;

namespace {

Mat random_symmetric(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::normal_distribution<double> gauss(0.0, scale);
  Mat m(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i <= j; ++i) {
      m(i, j) = m(j, i) = gauss(rng);
    }
  }
  return m;
}

SplitSdpProblem complete_problem(const Mat& d_true, double eps1) {
  const int n = static_cast<int>(d_true.rows());
  SplitSdpProblem p = SplitSdpProblem::trace_objective(n);
  p.mask = ObservationMask::complete(n);
  p.target_cosh = d_true.array().cosh().matrix();
  p.epsilon1 = eps1;
  return p;
}

}  // namespace

TEST_CASE("psd_project basics") {
  std::mt19937_64 rng(2);
  const Mat psd = [&] {
    const Mat a = random_symmetric(rng, 5);
    return (a * a.transpose()).eval();
  }();
  CHECK((psd_project(psd) - psd).norm() <= 1e-10 * psd.norm());

  Mat d = Mat::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = -2.0;
  const Mat pd = psd_project(d);
  CHECK(pd(0, 0) == doctest::Approx(3.0));
  CHECK(pd(1, 1) == doctest::Approx(0.0));
}

TEST_CASE("psd_project beats every eigenvalue clip pattern") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    const Mat m = random_symmetric(rng, 4);
    const Mat p = psd_project(m);
    const double best = (p - m).squaredNorm();
    Eigen::SelfAdjointEigenSolver<Mat> es(m);
    // Candidates: every subset of eigenvalues kept (clipped at zero), the
    // rest zeroed; the optimum must be at least as close.
    for (int pattern = 0; pattern < 16; ++pattern) {
      Mat cand = Mat::Zero(4, 4);
      for (int i = 0; i < 4; ++i) {
        if (pattern & (1 << i)) {
          const double lam = std::max(es.eigenvalues()(i), 0.0);
          cand += lam * es.eigenvectors().col(i) *
                  es.eigenvectors().col(i).transpose();
        }
      }
      CHECK(best <= (cand - m).squaredNorm() + 1e-9);
    }
  }
}

TEST_CASE("psd_project is idempotent and nonexpansive") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const Mat a = random_symmetric(rng, 6);
    const Mat b = random_symmetric(rng, 6);
    const Mat pa = psd_project(a);
    CHECK((psd_project(pa) - pa).norm() <= 1e-10 * std::max(1.0, pa.norm()));
    CHECK((pa - psd_project(b)).norm() <= (a - b).norm() + 1e-9);
  }
}

TEST_CASE("logdet_reweight closed forms and residual") {
  HGramianSplit zero{Mat::Zero(3, 3), Mat::Zero(3, 3)};
  auto [wp0, wm0] = logdet_reweight(zero, 0.1);
  CHECK((wp0 - 10.0 * Mat::Identity(3, 3)).norm() <= 1e-10);

  HGramianSplit eye{Mat::Identity(3, 3), Mat::Zero(3, 3)};
  auto [wp1, wm1] = logdet_reweight(eye, 1.0);
  CHECK((wp1 - 0.5 * Mat::Identity(3, 3)).norm() <= 1e-10);

  std::mt19937_64 rng(7);
  const Mat a = random_symmetric(rng, 5);
  HGramianSplit split{(a * a.transpose()).eval(), Mat::Zero(5, 5)};
  const double delta = 0.3;
  auto [wp, wm] = logdet_reweight(split, delta);
  Mat shifted = split.g_plus;
  shifted.diagonal().array() += delta;
  CHECK((wp * shifted - Mat::Identity(5, 5)).norm() <= 1e-8);

  CHECK_THROWS_AS(logdet_reweight(zero, 0.0), std::invalid_argument);
}

TEST_CASE("solve_split_sdp: one-point problem has the unique feasible point") {
  SplitSdpProblem p = SplitSdpProblem::trace_objective(1);
  SolverConfig cfg;
  auto [split, report] = solve_split_sdp(p, cfg);
  CHECK(report.converged);
  CHECK(split.g_plus(0, 0) == doctest::Approx(0.0).epsilon(1e-5));
  CHECK(split.g_minus(0, 0) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(split.combined()(0, 0) == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("solve_split_sdp recovers a complete noise-free instance") {
  const auto pts = random_loid_points(10, 2, 424, 1.0);
  const Mat d_true = distance_matrix(pts);
  SplitSdpProblem p = complete_problem(d_true, 1e-8);
  SolverConfig cfg;
  auto [split, report] = solve_split_sdp(p, cfg);
  REQUIRE(report.converged);
  const Mat g = split.combined();
  double num = 0.0;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      if (i == j) continue;
      const double dist = std::acosh(std::max(1.0, -g(i, j)));
      num += std::pow(dist - d_true(i, j), 2);
    }
  }
  CHECK(std::sqrt(num) / d_true.norm() <= 1e-2);
  CHECK(split_is_psd(split));
}

TEST_CASE("solver audit holds on a converged masked solve") {
  const auto pts = random_loid_points(12, 2, 99, 0.8);
  const Mat d_true = distance_matrix(pts);
  SplitSdpProblem p = complete_problem(d_true, 1e-6);
  // Withhold a third of the entries.
  Eigen::MatrixXi m = p.mask.entries();
  int removed = 0;
  for (int i = 0; i < 12 && removed < 22; ++i) {
    for (int j = i + 1; j < 12 && removed < 22; j += 2) {
      m(i, j) = m(j, i) = 0;
      ++removed;
    }
  }
  p.mask = ObservationMask(m);
  SolverConfig cfg;
  cfg.tol_primal = 1e-8;
  cfg.tol_dual = 1e-8;
  cfg.max_iters = 200000;
  auto [split, report] = solve_split_sdp(p, cfg);
  REQUIRE(report.converged);
  const ConstraintAudit audit = audit_split(p, split, report.slacks);
  CHECK(audit.diag_violation <= 1e-5);
  CHECK(audit.cap_violation <= 1e-5);
  CHECK(audit.fidelity <= p.epsilon1 * (1.0 + 1e-3));
  CHECK(audit.psd_floor_plus <= 1e-9);
  CHECK(audit.psd_floor_minus <= 1e-9);
  // Residual bound is assertable from the report.
  CHECK(audit.diag_violation <= report.primal_residual + 1e-9);
}

TEST_CASE("ordinal-only solve satisfies every margin") {
  const auto pts = random_loid_points(8, 2, 31, 1.2);
  const Mat d_true = distance_matrix(pts);
  // 40 consistent comparisons.
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> pick(0, 7);
  std::vector<OrdinalConstraint> ordinal;
  while (ordinal.size() < 40) {
    int a = pick(rng), b = pick(rng), c = pick(rng), d = pick(rng);
    if (a == b || c == d) continue;
    if (a > b) std::swap(a, b);
    if (c > d) std::swap(c, d);
    if (a == c && b == d) continue;
    if (d_true(a, b) <= d_true(c, d)) {
      ordinal.push_back({a, b, c, d});
    } else {
      ordinal.push_back({c, d, a, b});
    }
  }
  SplitSdpProblem p = SplitSdpProblem::trace_objective(8);
  p.ordinal = ordinal;
  p.epsilon2 = 1e-2;
  SolverConfig cfg;
  cfg.tol_primal = 1e-8;
  cfg.tol_dual = 1e-8;
  cfg.max_iters = 100000;
  auto [split, report] = solve_split_sdp(p, cfg);
  REQUIRE(report.converged);
  const ConstraintAudit audit = audit_split(p, split, report.slacks);
  CHECK(audit.min_ordinal_margin >= p.epsilon2 - 1e-6);
}

TEST_CASE("slack budget is respected and absorbs mild corruption") {
  const auto pts = random_loid_points(8, 2, 77, 1.2);
  const Mat d_true = distance_matrix(pts);
  const Mat g_true = h_gramian(pts);
  std::vector<OrdinalConstraint> ordinal;
  for (int a = 0; a < 8; ++a) {
    for (int b = a + 1; b < 8; ++b) {
      for (int c = 0; c < 8; ++c) {
        for (int d = c + 1; d < 8; ++d) {
          if (a == c && b == d) continue;
          if (d_true(a, b) <= d_true(c, d)) ordinal.push_back({a, b, c, d});
        }
      }
    }
  }
  ordinal.resize(60);
  // Flip the two comparisons with the smallest margin; the budget below is
  // sized so the ground truth plus slacks stays feasible.
  auto margin_at_truth = [&](const OrdinalConstraint& oc) {
    return g_true(oc.i1, oc.i2) - g_true(oc.i3, oc.i4);
  };
  std::sort(ordinal.begin(), ordinal.end(),
            [&](const auto& a, const auto& b) {
              return margin_at_truth(a) < margin_at_truth(b);
            });
  for (int k = 0; k < 2; ++k) {
    std::swap(ordinal[k].i1, ordinal[k].i3);
    std::swap(ordinal[k].i2, ordinal[k].i4);
  }

  SplitSdpProblem p = SplitSdpProblem::trace_objective(8);
  p.ordinal = ordinal;
  p.epsilon2 = 1e-2;
  double needed = 0.0;
  for (const auto& oc : ordinal) {
    needed += std::max(0.0, p.epsilon2 - margin_at_truth(oc));
  }
  p.slack_budget = 2.0 * needed + p.epsilon2;
  SolverConfig cfg;
  cfg.tol_primal = 1e-8;
  cfg.tol_dual = 1e-8;
  cfg.max_iters = 200000;
  auto [split, report] = solve_split_sdp(p, cfg);
  REQUIRE(report.converged);
  const ConstraintAudit audit = audit_split(p, split, report.slacks);
  CHECK(audit.slack_sum <= *p.slack_budget + 1e-8);
  CHECK(audit.min_ordinal_margin >= p.epsilon2 - 1e-5);
}

TEST_CASE("feasible start: the ground truth split passes the audit at once") {
  const auto pts = random_loid_points(9, 2, 55, 1.0);
  const Mat g = h_gramian(pts);
  const Mat d_true = distance_matrix(pts);
  SplitSdpProblem p = complete_problem(d_true, 1e-6);

  Eigen::SelfAdjointEigenSolver<Mat> es(g);
  Mat g_plus = Mat::Zero(9, 9);
  Mat g_minus = Mat::Zero(9, 9);
  for (int i = 0; i < 9; ++i) {
    const double lam = es.eigenvalues()(i);
    const Mat outer =
        es.eigenvectors().col(i) * es.eigenvectors().col(i).transpose();
    if (lam >= 0.0) {
      g_plus += lam * outer;
    } else {
      g_minus += -lam * outer;
    }
  }
  const HGramianSplit truth{g_plus, g_minus};
  const ConstraintAudit audit = audit_split(p, truth, Vec());
  CHECK(audit.diag_violation <= 1e-9);
  CHECK(audit.cap_violation <= 1e-9);
  CHECK(audit.fidelity <= 1e-12);
  CHECK(audit.psd_floor_plus <= 1e-12);
  CHECK(audit.psd_floor_minus <= 1e-12);
}

TEST_CASE("log-det rounds drive the surrogate objective down") {
  const auto pts = random_loid_points(8, 2, 456, 0.9);
  const Mat d_true = distance_matrix(pts);
  SplitSdpProblem p = complete_problem(d_true, 1e-6);
  SolverConfig cfg;
  cfg.logdet_rounds = 3;
  auto [split, report] = solve_split_sdp(p, cfg);
  REQUIRE(report.converged);
  REQUIRE(report.logdet_values.size() == 4);
  for (std::size_t k = 1; k < report.logdet_values.size(); ++k) {
    CHECK(report.logdet_values[k] <= report.logdet_values[k - 1] + 1e-6);
  }
}

TEST_CASE("solves are bitwise deterministic") {
  const auto pts = random_loid_points(7, 2, 11, 1.0);
  const Mat d_true = distance_matrix(pts);
  SplitSdpProblem p = complete_problem(d_true, 1e-8);
  SolverConfig cfg;
  auto [s1, r1] = solve_split_sdp(p, cfg);
  auto [s2, r2] = solve_split_sdp(p, cfg);
  CHECK(r1.iterations == r2.iterations);
  CHECK((s1.combined() - s2.combined()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("problem validation rejects bad inputs") {
  SplitSdpProblem p = SplitSdpProblem::trace_objective(3);
  p.epsilon1 = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = SplitSdpProblem::trace_objective(3);
  p.ordinal.push_back({0, 0, 0, 1});
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.ordinal.clear();
  p.ordinal.push_back({0, 1, 0, 1});
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("psd least squares: two points at distance one") {
  Mat dsq(2, 2);
  dsq << 0, 1, 1, 0;
  SolverConfig cfg;
  auto [g, report] = solve_psd_least_squares(dsq, cfg);
  CHECK(report.converged);
  CHECK(g(0, 0) == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(g(0, 1) == doctest::Approx(-0.25).epsilon(1e-6));
  CHECK((edm_from_gram(g) - dsq).norm() <= 1e-8);
}

TEST_CASE("psd least squares: planar points are recovered") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> gauss;
  const int n = 8;
  Mat coords(n, 2);
  for (int i = 0; i < n; ++i) {
    coords(i, 0) = gauss(rng);
    coords(i, 1) = gauss(rng);
  }
  Mat dsq(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      dsq(i, j) = (coords.row(i) - coords.row(j)).squaredNorm();
    }
  }
  SolverConfig cfg;
  auto [g, report] = solve_psd_least_squares(dsq, cfg);
  CHECK(report.converged);
  CHECK((edm_from_gram(g) - dsq).norm() <= 1e-6 * dsq.norm());
  CHECK((g * Vec::Ones(n)).norm() <= 1e-8);
}

TEST_CASE("psd least squares: zero input gives zero") {
  SolverConfig cfg;
  auto [g, report] = solve_psd_least_squares(Mat::Zero(4, 4), cfg);
  CHECK(report.converged);
  CHECK(g.norm() <= 1e-12);
}
