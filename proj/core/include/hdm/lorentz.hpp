#pragma once

// Lorentzian (indefinite) linear algebra and the two hyperbolic models used
// throughout: the hyperboloid ('Loid) sheet L^d embedded in R^{d+1} and the
// Poincare unit ball I^d. The indefinite form H = diag(-1, 1, ..., 1) is
// applied implicitly (component-0 sign flip); it is never stored densely in
// hot paths.

#include <cstdint>
#include <vector>

#include "hdm/types.hpp"

namespace hdm {

/// A point on the upper hyperboloid sheet
///   L^d = { x in R^{d+1} : <x,x>_H = -1, x_0 > 0 }.
/// The constructor validates sheet membership; x_0 = sqrt(1 + |spatial|^2)
/// always lands exactly on the sheet, so prefer LoidPoint::lift when
/// constructing from spatial coordinates.
class LoidPoint {
 public:
  explicit LoidPoint(Vec coords, double tol_norm = kTolNorm);

  /// Lifts a spatial vector to the sheet via x_0 = sqrt(1 + |spatial|^2).
  static LoidPoint lift(const Vec& spatial);

  const Vec& coords() const { return coords_; }
  /// Manifold dimension d (ambient dimension minus one).
  int dim() const { return static_cast<int>(coords_.size()) - 1; }
  double time_component() const { return coords_(0); }
  /// Spatial part x_bar (components 1..d).
  Vec spatial() const { return coords_.tail(coords_.size() - 1); }

 private:
  Vec coords_;
};

/// A point in the open unit ball model I^d; |coords| < 1 enforced.
class PoincarePoint {
 public:
  explicit PoincarePoint(Vec coords);

  const Vec& coords() const { return coords_; }
  int dim() const { return static_cast<int>(coords_.size()); }

 private:
  Vec coords_;
};

/// The indefinite form H = diag(-1, 1, ..., 1) on R^dim.
struct MinkowskiForm {
  int dim = 0;

  /// H x: flips the sign of component 0.
  Vec apply(const Vec& x) const;
  /// Dense materialization, for callers that inspect the matrix.
  Mat dense() const;
};

/// Lorentzian inner product [x, y] = -x_0 y_0 + sum_{k>=1} x_k y_k.
double lorentz_inner(const Vec& x, const Vec& y);

/// Geodesic distance on the sheet, d(x,y) = acosh(-[x,y]). The acosh
/// argument is clamped up to 1 inside [1 - kTolClamp, 1); anything lower
/// signals off-manifold input and throws.
double loid_distance(const LoidPoint& x, const LoidPoint& y);

/// Poincare-ball distance acosh(1 + 2|u-v|^2 / ((1-|u|^2)(1-|v|^2))).
double poincare_distance(const PoincarePoint& u, const PoincarePoint& v);

/// Stereographic projection L^d -> I^d, y_i = x_{i+1} / (x_0 + 1).
PoincarePoint to_poincare(const LoidPoint& x);

/// Inverse stereographic projection I^d -> L^d.
LoidPoint from_poincare(const PoincarePoint& y);

/// H-adjoint R^[*] = H^{-1} R^T H (H is its own inverse).
Mat h_adjoint(const Mat& r);

/// True iff |R^T H R - H|_F <= tol, i.e. R is an isometry of the sheet.
bool is_h_unitary(const Mat& r, double tol);

/// Deterministic point cloud on L^d: spatial parts i.i.d. N(0, spread^2),
/// lifted to the sheet. Same seed, same output.
std::vector<LoidPoint> random_loid_points(int n, int d, std::uint64_t seed,
                                          double spread);

}  // namespace hdm
