#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "hdm/gramian.hpp"

using namespace hdm;

TEST_CASE("h_gramian of apex points") {
  Vec apex(3);
  apex << 1, 0, 0;
  const LoidPoint p(apex);
  const Mat g1 = h_gramian({p});
  CHECK(g1.rows() == 1);
  CHECK(g1(0, 0) == doctest::Approx(-1.0));

  const Mat g2 = h_gramian({p, p});
  CHECK(g2(0, 1) == doctest::Approx(-1.0));
  CHECK(g2(1, 0) == doctest::Approx(-1.0));
}

TEST_CASE("h_gramian equals pairwise inner products") {
  const auto pts = random_loid_points(12, 2, 3, 1.0);
  const Mat g = h_gramian(pts);
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < 12; ++j) {
      CHECK(g(i, j) ==
            doctest::Approx(lorentz_inner(pts[i].coords(), pts[j].coords())));
    }
  }
  // Diagonal -1, off-diagonals <= -1 for points on the sheet.
  for (int i = 0; i < 12; ++i) {
    CHECK(std::abs(g(i, i) + 1.0) <= 1e-9);
    for (int j = 0; j < 12; ++j) {
      if (i != j) CHECK(g(i, j) <= -1.0 + 1e-9);
    }
  }
}

TEST_CASE("h_gramian rejects mixed dimensions") {
  Vec a(3), b(4);
  a << 1, 0, 0;
  b << 1, 0, 0, 0;
  CHECK_THROWS_AS(h_gramian({LoidPoint(a), LoidPoint(b)}), std::invalid_argument);
  CHECK_THROWS_AS(h_gramian({}), std::invalid_argument);
}

TEST_CASE("hdm_from_gramian basics") {
  Mat g(2, 2);
  g << -1, -1, -1, -1;
  const Hdm d = hdm_from_gramian(g);
  CHECK(d(0, 1) == doctest::Approx(0.0));

  Mat g2(2, 2);
  g2 << -1, -std::cosh(2.0), -std::cosh(2.0), -1;
  CHECK(hdm_from_gramian(g2)(0, 1) == doctest::Approx(2.0).epsilon(1e-12));

  Mat bad(2, 2);
  bad << -1, -0.5, -0.5, -1;
  CHECK_THROWS_AS(hdm_from_gramian(bad), std::domain_error);
}

TEST_CASE("hdm_from_gramian matches pairwise distances") {
  const auto pts = random_loid_points(10, 2, 51, 1.0);
  const Hdm d = hdm_from_gramian(h_gramian(pts));
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      if (i == j) continue;
      CHECK(d(i, j) ==
            doctest::Approx(loid_distance(pts[i], pts[j])).epsilon(1e-9));
    }
  }
}

TEST_CASE("gramian_from_hdm values and round-trip") {
  const Hdm zero(Mat::Zero(2, 2));
  const Mat g = gramian_from_hdm(zero);
  CHECK(g(0, 0) == doctest::Approx(-1.0));
  CHECK(g(0, 1) == doctest::Approx(-1.0));

  Mat d(2, 2);
  d << 0, 2, 2, 0;
  CHECK(gramian_from_hdm(Hdm(d))(0, 1) ==
        doctest::Approx(-3.7621956910836314).epsilon(1e-12));

  const auto pts = random_loid_points(8, 3, 77, 0.9);
  const Mat g0 = h_gramian(pts);
  const Mat back = gramian_from_hdm(hdm_from_gramian(g0));
  CHECK((back - g0).cwiseAbs().maxCoeff() <= 1e-9 * g0.cwiseAbs().maxCoeff());

  const Hdm d0 = hdm_from_gramian(g0);
  const Hdm d1 = hdm_from_gramian(gramian_from_hdm(d0));
  CHECK((d1.values() - d0.values()).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("certificate accepts true H-Gramians") {
  const auto pts = random_loid_points(10, 2, 41, 1.0);
  const Mat g = h_gramian(pts);
  const GramCertificate cert = certify_h_gramian(g, 2, 1e-7);
  CHECK(cert.valid);
  CHECK(cert.neg_eigs == 1);
  CHECK(cert.pos_eigs <= 2);
  CHECK(cert.diag_violation <= 1e-7);
  CHECK(cert.offdiag_violation <= 1e-7);
}

TEST_CASE("certificate rejects the identity and accepts a single point") {
  const GramCertificate id = certify_h_gramian(Mat::Identity(4, 4), 2, 1e-7);
  CHECK_FALSE(id.valid);
  CHECK(id.neg_eigs == 0);

  Mat one(1, 1);
  one << -1.0;
  CHECK(certify_h_gramian(one, 1, 1e-9).valid);

  Mat asym(2, 2);
  asym << -1, 0.5, -0.5, -1;
  CHECK_THROWS_AS(certify_h_gramian(asym, 1, 1e-9), std::invalid_argument);
}

TEST_CASE("eigenvalue structure of full-rank H-Gramians") {
  // Exactly one negative eigenvalue and d positive ones, and the eigenvalue
  // sum equals the trace -N.
  for (int d : {2, 5}) {
    const auto pts = random_loid_points(20, d, 1000 + d, 1.0);
    const Mat g = h_gramian(pts);
    Eigen::SelfAdjointEigenSolver<Mat> es(g, Eigen::EigenvaluesOnly);
    const double thr = 1e-9 * es.eigenvalues().cwiseAbs().maxCoeff();
    int neg = 0, pos = 0;
    for (int i = 0; i < 20; ++i) {
      if (es.eigenvalues()(i) < -thr) ++neg;
      if (es.eigenvalues()(i) > thr) ++pos;
    }
    CHECK(neg == 1);
    CHECK(pos == d);
    CHECK(es.eigenvalues().sum() == doctest::Approx(-20.0).epsilon(1e-9));
  }
}

TEST_CASE("split PSD check") {
  HGramianSplit ok{Mat::Identity(3, 3), Mat::Zero(3, 3)};
  CHECK(split_is_psd(ok));
  Mat neg = Mat::Identity(3, 3);
  neg(2, 2) = -1.0;
  CHECK_FALSE(split_is_psd(HGramianSplit{neg, Mat::Zero(3, 3)}));
}

TEST_CASE("Hdm validation") {
  CHECK_THROWS_AS(Hdm{Mat::Ones(2, 3)}, std::invalid_argument);
  Mat negd(2, 2);
  negd << 0, -0.5, -0.5, 0;
  CHECK_THROWS_AS(Hdm{negd}, std::invalid_argument);
  Mat diag(2, 2);
  diag << 1, 0, 0, 1;
  CHECK_THROWS_AS(Hdm{diag}, std::invalid_argument);
}

TEST_CASE("ObservationMask validation and helpers") {
  CHECK(ObservationMask::complete(5).measured_count() == 10);
  CHECK(ObservationMask::none(5).measured_count() == 0);
  Eigen::MatrixXi bad = Eigen::MatrixXi::Zero(2, 2);
  bad(0, 1) = 2;
  bad(1, 0) = 2;
  CHECK_THROWS_AS(ObservationMask{bad}, std::invalid_argument);
}
