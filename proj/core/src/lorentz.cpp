#include "hdm/lorentz.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace hdm {

namespace {

void check_same_size(const Vec& x, const Vec& y, const char* what) {
  if (x.size() != y.size()) {
    std::ostringstream msg;
    msg << what << ": dimension mismatch (" << x.size() << " vs " << y.size()
        << ")";
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

LoidPoint::LoidPoint(Vec coords, double tol_norm) : coords_(std::move(coords)) {
  if (coords_.size() < 2) {
    throw std::invalid_argument("LoidPoint: need at least 2 coordinates");
  }
  const double h_norm = lorentz_inner(coords_, coords_);
  if (std::abs(h_norm + 1.0) > tol_norm) {
    std::ostringstream msg;
    msg << "LoidPoint: <x,x>_H = " << h_norm << " deviates from -1 beyond "
        << tol_norm;
    throw std::invalid_argument(msg.str());
  }
  if (coords_(0) < 1.0 - tol_norm) {
    throw std::invalid_argument("LoidPoint: x_0 < 1 (not on the upper sheet)");
  }
}

LoidPoint LoidPoint::lift(const Vec& spatial) {
  Vec coords(spatial.size() + 1);
  coords(0) = std::sqrt(1.0 + spatial.squaredNorm());
  coords.tail(spatial.size()) = spatial;
  return LoidPoint(std::move(coords));
}

PoincarePoint::PoincarePoint(Vec coords) : coords_(std::move(coords)) {
  if (coords_.size() < 1) {
    throw std::invalid_argument("PoincarePoint: empty coordinates");
  }
  if (coords_.norm() >= 1.0) {
    throw std::invalid_argument("PoincarePoint: norm must be < 1");
  }
}

Vec MinkowskiForm::apply(const Vec& x) const {
  if (x.size() != dim) {
    throw std::invalid_argument("MinkowskiForm: dimension mismatch");
  }
  Vec y = x;
  y(0) = -y(0);
  return y;
}

Mat MinkowskiForm::dense() const {
  Mat h = Mat::Identity(dim, dim);
  h(0, 0) = -1.0;
  return h;
}

double lorentz_inner(const Vec& x, const Vec& y) {
  check_same_size(x, y, "lorentz_inner");
  if (x.size() < 2) {
    throw std::invalid_argument("lorentz_inner: need length >= 2");
  }
  const auto n = x.size();
  return -x(0) * y(0) + x.tail(n - 1).dot(y.tail(n - 1));
}

double loid_distance(const LoidPoint& x, const LoidPoint& y) {
  const double arg = -lorentz_inner(x.coords(), y.coords());
  if (arg < 1.0 - kTolClamp) {
    std::ostringstream msg;
    msg << "loid_distance: -[x,y] = " << arg
        << " < 1; inputs are off the manifold";
    throw std::domain_error(msg.str());
  }
  // acosh(-[x,y]) evaluated through the chord: on the sheet
  // |x - y|_H^2 = 2(-[x,y] - 1) = 4 sinh^2(d/2), and the difference form
  // stays accurate where acosh near 1 loses half the digits.
  const Vec diff = x.coords() - y.coords();
  const double chord2 = std::max(0.0, lorentz_inner(diff, diff));
  return 2.0 * std::asinh(0.5 * std::sqrt(chord2));
}

double poincare_distance(const PoincarePoint& u, const PoincarePoint& v) {
  check_same_size(u.coords(), v.coords(), "poincare_distance");
  const double nu = u.coords().squaredNorm();
  const double nv = v.coords().squaredNorm();
  if (nu > 1.0 - 1e-12 || nv > 1.0 - 1e-12) {
    throw std::domain_error("poincare_distance: norm too close to 1");
  }
  const double t =
      (u.coords() - v.coords()).squaredNorm() / ((1.0 - nu) * (1.0 - nv));
  // acosh(1 + 2t) = 2 asinh(sqrt(t)), stable for nearby points.
  return 2.0 * std::asinh(std::sqrt(t));
}

PoincarePoint to_poincare(const LoidPoint& x) {
  const Vec& c = x.coords();
  Vec y = c.tail(c.size() - 1) / (c(0) + 1.0);
  return PoincarePoint(std::move(y));
}

LoidPoint from_poincare(const PoincarePoint& y) {
  const double n2 = y.coords().squaredNorm();
  if (n2 >= 1.0) {
    throw std::invalid_argument("from_poincare: |y| >= 1");
  }
  const double scale = 1.0 / (1.0 - n2);
  Vec x(y.coords().size() + 1);
  x(0) = (1.0 + n2) * scale;
  x.tail(y.coords().size()) = 2.0 * scale * y.coords();
  return LoidPoint(std::move(x));
}

Mat h_adjoint(const Mat& r) {
  if (r.rows() != r.cols()) {
    throw std::invalid_argument("h_adjoint: matrix must be square");
  }
  // H^{-1} R^T H with H = diag(-1, 1, ..., 1): flip row 0 and column 0 of
  // R^T, which flips the sign of the off-diagonal first row/column blocks.
  Mat a = r.transpose();
  a.row(0).tail(a.cols() - 1) *= -1.0;
  a.col(0).tail(a.rows() - 1) *= -1.0;
  return a;
}

bool is_h_unitary(const Mat& r, double tol) {
  if (r.rows() != r.cols()) return false;
  const auto n = r.rows();
  Mat hr = r;
  hr.row(0) *= -1.0;  // H R
  Mat rthr = r.transpose() * hr;
  rthr(0, 0) += 1.0;
  rthr.diagonal().tail(n - 1).array() -= 1.0;
  return rthr.norm() <= tol;
}

std::vector<LoidPoint> random_loid_points(int n, int d, std::uint64_t seed,
                                          double spread) {
  if (n < 1 || d < 1) {
    throw std::invalid_argument("random_loid_points: need n >= 1, d >= 1");
  }
  if (!(spread > 0.0)) {
    throw std::invalid_argument("random_loid_points: spread must be positive");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, spread);
  std::vector<LoidPoint> points;
  points.reserve(n);
  for (int k = 0; k < n; ++k) {
    Vec spatial(d);
    for (int i = 0; i < d; ++i) spatial(i) = gauss(rng);
    points.push_back(LoidPoint::lift(spatial));
  }
  return points;
}

}  // namespace hdm
