#include "hdm/gramian.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace hdm {

Hdm::Hdm(Mat values, double tol) : values_(std::move(values)) {
  if (values_.rows() != values_.cols() || values_.rows() < 1) {
    throw std::invalid_argument("Hdm: matrix must be square and nonempty");
  }
  const int n = static_cast<int>(values_.rows());
  if (!values_.allFinite()) {
    throw std::invalid_argument("Hdm: entries must be finite");
  }
  const double scale = std::max(1.0, values_.cwiseAbs().maxCoeff());
  if ((values_ - values_.transpose()).cwiseAbs().maxCoeff() > tol * scale) {
    throw std::invalid_argument("Hdm: matrix is not symmetric");
  }
  for (int i = 0; i < n; ++i) {
    if (std::abs(values_(i, i)) > tol) {
      throw std::invalid_argument("Hdm: diagonal must be zero");
    }
    for (int j = 0; j < n; ++j) {
      if (values_(i, j) < -tol) {
        throw std::invalid_argument("Hdm: entries must be nonnegative");
      }
    }
  }
  // Snap away roundoff so downstream code sees an exact Hdm.
  values_ = ((values_ + values_.transpose()) / 2.0).cwiseMax(0.0).eval();
  values_.diagonal().setZero();
}

ObservationMask::ObservationMask(Eigen::MatrixXi entries)
    : entries_(std::move(entries)) {
  if (entries_.size() == 0) return;  // empty placeholder
  if (entries_.rows() != entries_.cols()) {
    throw std::invalid_argument("ObservationMask: matrix must be square");
  }
  const int n = static_cast<int>(entries_.rows());
  for (int i = 0; i < n; ++i) {
    if (entries_(i, i) != 0) {
      throw std::invalid_argument("ObservationMask: diagonal must be zero");
    }
    for (int j = 0; j < n; ++j) {
      if (entries_(i, j) != 0 && entries_(i, j) != 1) {
        throw std::invalid_argument("ObservationMask: entries must be 0/1");
      }
      if (entries_(i, j) != entries_(j, i)) {
        throw std::invalid_argument("ObservationMask: must be symmetric");
      }
    }
  }
}

ObservationMask ObservationMask::none(int n) {
  return ObservationMask(Eigen::MatrixXi::Zero(n, n));
}

ObservationMask ObservationMask::complete(int n) {
  Eigen::MatrixXi m = Eigen::MatrixXi::Ones(n, n);
  m.diagonal().setZero();
  return ObservationMask(std::move(m));
}

std::vector<std::pair<int, int>> ObservationMask::measured_pairs() const {
  std::vector<std::pair<int, int>> pairs;
  const int n = this->n();
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      if (entries_(i, j) != 0) pairs.emplace_back(i, j);
    }
  }
  return pairs;
}

int ObservationMask::measured_count() const {
  return static_cast<int>(measured_pairs().size());
}

bool split_is_psd(const HGramianSplit& split, double tol) {
  for (const Mat* m : {&split.g_plus, &split.g_minus}) {
    Eigen::SelfAdjointEigenSolver<Mat> es(*m, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().cwiseAbs().maxCoeff();
    if (lo < -tol * std::max(1.0, hi)) return false;
  }
  return true;
}

Mat h_gramian(const std::vector<LoidPoint>& points) {
  if (points.empty()) {
    throw std::invalid_argument("h_gramian: empty point list");
  }
  const int n = static_cast<int>(points.size());
  const int dim = points[0].dim();
  for (const auto& p : points) {
    if (p.dim() != dim) {
      throw std::invalid_argument("h_gramian: mixed point dimensions");
    }
  }
  Mat g(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i <= j; ++i) {
      const double v = lorentz_inner(points[i].coords(), points[j].coords());
      g(i, j) = v;
      g(j, i) = v;
    }
  }
  return g;
}

Hdm hdm_from_gramian(const Mat& g, double tol) {
  if (g.rows() != g.cols() || g.rows() < 1) {
    throw std::invalid_argument("hdm_from_gramian: matrix must be square");
  }
  const int n = static_cast<int>(g.rows());
  for (int i = 0; i < n; ++i) {
    if (std::abs(g(i, i) + 1.0) > tol) {
      std::ostringstream msg;
      msg << "hdm_from_gramian: diagonal entry " << g(i, i)
          << " deviates from -1 beyond " << tol;
      throw std::domain_error(msg.str());
    }
  }
  Mat d(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (i == j) {
        d(i, j) = 0.0;
        continue;
      }
      double arg = -g(i, j);
      if (arg < 1.0 - tol) {
        std::ostringstream msg;
        msg << "hdm_from_gramian: entry (" << i << "," << j << ") has -g = "
            << arg << " < 1";
        throw std::domain_error(msg.str());
      }
      if (arg < 1.0) arg = 1.0;
      d(i, j) = std::acosh(arg);
    }
  }
  return Hdm((d + d.transpose()) / 2.0);
}

Mat gramian_from_hdm(const Hdm& d) {
  Mat g = (-d.values().array().cosh()).matrix();
  g.diagonal().setConstant(-1.0);
  return g;
}

GramCertificate certify_h_gramian(const Mat& g, int d, double tol) {
  if (g.rows() != g.cols() || g.rows() < 1) {
    throw std::invalid_argument("certify_h_gramian: matrix must be square");
  }
  const int n = static_cast<int>(g.rows());
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > tol * scale) {
    throw std::invalid_argument("certify_h_gramian: matrix is not symmetric");
  }

  GramCertificate cert;
  Eigen::SelfAdjointEigenSolver<Mat> es((g + g.transpose()) / 2.0,
                                        Eigen::EigenvaluesOnly);
  const Vec& ev = es.eigenvalues();
  const double thr = tol * std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  for (int i = 0; i < n; ++i) {
    if (ev(i) < -thr) ++cert.neg_eigs;
    if (ev(i) > thr) ++cert.pos_eigs;
  }
  for (int i = 0; i < n; ++i) {
    cert.diag_violation = std::max(cert.diag_violation, std::abs(g(i, i) + 1.0));
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      cert.offdiag_violation =
          std::max(cert.offdiag_violation, std::max(0.0, g(i, j) + 1.0));
    }
  }
  cert.valid = cert.neg_eigs == 1 && cert.pos_eigs <= d &&
               cert.diag_violation <= tol && cert.offdiag_violation <= tol;
  return cert;
}

}  // namespace hdm
