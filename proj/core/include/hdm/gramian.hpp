#pragma once

// Hyperbolic distance matrices and H-Gramians. An H-Gramian G = X^T H X of
// points on L^d decomposes as G = G+ - G- with both parts PSD, rank G+ <= d,
// rank G- <= 1, diag G = -1 and off-diagonal entries <= -1. The certificate
// below checks exactly those conditions numerically.

#include <vector>

#include "hdm/lorentz.hpp"
#include "hdm/types.hpp"

namespace hdm {

/// Symmetric matrix of pairwise hyperbolic distances: zero diagonal,
/// nonnegative finite entries. Construction symmetrizes away roundoff and
/// rejects anything beyond tolerance.
class Hdm {
 public:
  explicit Hdm(Mat values, double tol = 1e-9);

  int n() const { return static_cast<int>(values_.rows()); }
  const Mat& values() const { return values_; }
  double operator()(int i, int j) const { return values_(i, j); }

 private:
  Mat values_;
};

/// Symmetric 0/1 mask of measured entries, zero diagonal.
class ObservationMask {
 public:
  explicit ObservationMask(Eigen::MatrixXi entries);

  /// All-zero mask (nothing measured).
  static ObservationMask none(int n);
  /// All-ones off-diagonal mask (everything measured).
  static ObservationMask complete(int n);

  int n() const { return static_cast<int>(entries_.rows()); }
  bool measured(int i, int j) const { return entries_(i, j) != 0; }
  const Eigen::MatrixXi& entries() const { return entries_; }
  /// Measured unordered pairs (i < j).
  std::vector<std::pair<int, int>> measured_pairs() const;
  int measured_count() const;

 private:
  Eigen::MatrixXi entries_;
};

/// The split G = g_plus - g_minus with both parts PSD.
struct HGramianSplit {
  Mat g_plus;
  Mat g_minus;

  Mat combined() const { return g_plus - g_minus; }
};

/// Tolerance for the PSD invariant of HGramianSplit: smallest eigenvalue
/// >= -kTolPsd * |.|_2.
inline constexpr double kTolPsd = 1e-8;

/// Returns true when both parts of the split are PSD within kTolPsd.
bool split_is_psd(const HGramianSplit& split, double tol = kTolPsd);

/// Outcome of the H-Gramian membership check.
struct GramCertificate {
  bool valid = false;
  int neg_eigs = 0;              // eigenvalues < -tol * |g|_2
  int pos_eigs = 0;              // eigenvalues >  tol * |g|_2
  double diag_violation = 0.0;   // max_i |g_ii + 1|
  double offdiag_violation = 0.0;  // max_{i != j} max(0, g_ij + 1)
};

/// H-Gramian of a point list, G = X^T H X. Exactly symmetric by
/// construction. Throws on mixed dimensions or an empty list.
Mat h_gramian(const std::vector<LoidPoint>& points);

/// D = acosh[-G] elementwise. Entries of -G inside [1 - tol, 1) are clamped
/// to 1; anything lower throws. The same tol bounds the allowed diagonal
/// deviation from -1.
Hdm hdm_from_gramian(const Mat& g, double tol = kTolClamp);

/// Inverse map of the above: -cosh[D] elementwise (diagonal -1).
Mat gramian_from_hdm(const Hdm& d);

/// Checks the four membership conditions of an H-Gramian for embedding
/// dimension d: exactly one negative eigenvalue, at most d positive ones
/// (counted against the relative threshold tol * |g|_2), diag = -1 and
/// off-diagonals <= -1 within tol. Throws if g is asymmetric beyond tol.
GramCertificate certify_h_gramian(const Mat& g, int d, double tol);

}  // namespace hdm
