#pragma once

// Desk-scale studies: completion success rate under missing measurements,
// weighted-tree embedding in hyperbolic versus Euclidean geometry, and
// ordinal-only embedding quality with a violation budget. All outputs are
// deterministic functions of (grid, seed).

#include <cstdint>
#include <string>
#include <vector>

#include "hdm/embedding.hpp"
#include "hdm/gramian.hpp"
#include "hdm/solver.hpp"
#include "hdm/types.hpp"

namespace hdm {

/// Connected acyclic graph with edge weights in (0,1) and max degree 3.
struct WeightedTree {
  struct Edge {
    int u = 0;
    int v = 0;
    double w = 0.0;
  };
  int n = 0;
  std::vector<Edge> edges;
};

/// One aggregated grid point of an experiment. `params` keeps the grid
/// coordinates in emission order (e.g. {"n", "d", "s"}).
struct TrialSummary {
  std::vector<std::pair<std::string, double>> params;
  int trials = 0;
  int successes = 0;
  int failures = 0;  // solver non-convergence, reported separately
  double mean = 0.0;
  double stddev = 0.0;
  std::uint64_t seed = 0;
};

/// Mask with exactly round((1 - s) * n(n-1)/2) measured pairs, uniform
/// without replacement; s is the fraction withheld.
ObservationMask sample_metric_mask(int n, double s, std::uint64_t seed);

/// Uniform sample of 2 * k_per_pair * C(n,2) distinct comparisons (capped at
/// the complete set), each oriented consistently with `distances`.
std::vector<OrdinalConstraint> sample_ordinal_set(const Mat& distances,
                                                  int k_per_pair,
                                                  std::uint64_t seed);
std::vector<OrdinalConstraint> sample_ordinal_set(const std::vector<LoidPoint>& points,
                                                  int k_per_pair,
                                                  std::uint64_t seed);

/// Success-probability curve over metric sampling densities: noise-free
/// instances are solved and scored by the relative Frobenius error between
/// the true distance matrix and acosh[-G]; success means error <= delta.
std::vector<TrialSummary> sparsity_success_curve(int n, int d,
                                                 const std::vector<double>& s_grid,
                                                 int m_trials, double delta,
                                                 std::uint64_t seed,
                                                 double spread = 1.0);

/// Random tree by uniform attachment among nodes of degree < 3, edge
/// weights i.i.d. unif(0,1). Deterministic per seed.
WeightedTree random_weighted_tree(int n, std::uint64_t seed);

/// Path-weight distance matrix of a tree.
Mat tree_distance_matrix(const WeightedTree& t);

/// Smallest d with |D_{N-1} - D_d|_F / |D_{N-1} - D_{d+1}|_F >= 1 - delta.
/// `d_by_dim[k]` is the distance matrix reconstructed in dimension k+1.
/// A plateau where both norms vanish (< 1e-12) counts as satisfied.
int optimal_embedding_dimension(const std::vector<Mat>& d_by_dim, double delta);

struct TreeBenchmark {
  std::vector<TrialSummary> hyperbolic_err;
  std::vector<TrialSummary> euclidean_err;
  std::vector<TrialSummary> hyperbolic_dim;
  std::vector<TrialSummary> euclidean_dim;
};

/// Paired tree-embedding benchmark. Each trial embeds the identical tree in
/// both geometries (log-det objective on the hyperbolic side, the PSD
/// least-squares baseline on the Euclidean side), picks the optimal
/// dimension per side and records the relative error there. Trials where a
/// solver fails are excluded from both sides to keep the pairing.
TreeBenchmark tree_benchmark(const std::vector<int>& n_grid, int m_trials,
                             std::uint64_t seed);

/// Fraction of all ground-truth comparisons (over pairs of distinct index
/// pairs) reproduced by the embedded distances. Ties in embedded distances
/// count as incorrect.
double ordinal_accuracy(const Mat& embedded_dist, const Mat& true_dist);

/// Ordinal-only protocol: sample comparisons at density k_per_pair, solve
/// with margin eps2, minimum distance 1, and slack budget
/// zeta = (p/100) |O| eps2 per grid entry; embed at each d in d_grid and
/// score ordinal accuracy on the complete comparison set. One row per
/// (d, zeta_pct), params {"n", "d", "zeta_pct", "k"}. corrupt_pct flips that
/// percentage of the sampled comparisons (the closest calls first, the way
/// measurement noise corrupts near-ties).
std::vector<TrialSummary> ordinal_benchmark(int n,
                                            const std::vector<int>& d_grid,
                                            int k_per_pair,
                                            const std::vector<double>& zeta_pct_grid,
                                            std::uint64_t seed,
                                            double corrupt_pct = 0.0);

/// Pearson correlation matrix between rows of a concentration table
/// (items x samples). Utility for user-supplied data.
Mat correlation_matrix(const Mat& concentrations);

/// Deterministic points on L^d with all pairwise distances >= min_dist
/// (rejection sampling on top of the Gaussian lift).
std::vector<LoidPoint> random_separated_points(int n, int d, std::uint64_t seed,
                                               double spread, double min_dist);

}  // namespace hdm
