#include "hdm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <unordered_set>

#include <Eigen/Eigenvalues>

namespace hdm {

namespace {

// splitmix64 finalizer; derives independent per-trial seeds so trials are
// reproducible regardless of evaluation order.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = base + 0x9e3779b97f4a7c15ULL * (a + 1) +
                    0xbf58476d1ce4e5b9ULL * (b + 1);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

std::vector<std::pair<int, int>> all_pairs(int n) {
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  return pairs;
}

// Relative Frobenius error between a distance matrix and acosh[-g], with a
// scoring clamp at 1 so near-feasible iterates remain scorable.
double relative_hdm_error(const Mat& d_true, const Mat& g) {
  const int n = static_cast<int>(d_true.rows());
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double dist = std::acosh(std::max(1.0, -g(i, j)));
      num += (d_true(i, j) - dist) * (d_true(i, j) - dist);
      den += d_true(i, j) * d_true(i, j);
    }
  }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

struct RunningStats {
  std::vector<double> values;
  void add(double v) { values.push_back(v); }
  double mean() const {
    if (values.empty()) return 0.0;
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
  }
  double stddev() const {
    if (values.size() < 2) return 0.0;
    const double m = mean();
    double s = 0.0;
    for (double v : values) s += (v - m) * (v - m);
    return std::sqrt(s / static_cast<double>(values.size() - 1));
  }
};

Mat edm_distances(const Mat& gram) {
  Mat sq = edm_from_gram(gram).cwiseMax(0.0);
  Mat d = sq.array().sqrt().matrix();
  d.diagonal().setZero();
  return ((d + d.transpose()) / 2.0).eval();
}

}  // namespace

ObservationMask sample_metric_mask(int n, double s, std::uint64_t seed) {
  if (n < 1 || s < 0.0 || s > 1.0) {
    throw std::invalid_argument("sample_metric_mask: bad arguments");
  }
  auto pairs = all_pairs(n);
  const int want = static_cast<int>(
      std::llround((1.0 - s) * static_cast<double>(pairs.size())));
  std::mt19937_64 rng(seed);
  std::shuffle(pairs.begin(), pairs.end(), rng);
  Eigen::MatrixXi m = Eigen::MatrixXi::Zero(n, n);
  for (int t = 0; t < want; ++t) {
    m(pairs[t].first, pairs[t].second) = 1;
    m(pairs[t].second, pairs[t].first) = 1;
  }
  return ObservationMask(std::move(m));
}

std::vector<OrdinalConstraint> sample_ordinal_set(const Mat& distances,
                                                  int k_per_pair,
                                                  std::uint64_t seed) {
  if (distances.rows() != distances.cols() || distances.rows() < 2) {
    throw std::invalid_argument("sample_ordinal_set: bad distances");
  }
  if (k_per_pair < 0) {
    throw std::invalid_argument("sample_ordinal_set: k_per_pair must be >= 0");
  }
  const int n = static_cast<int>(distances.rows());
  const auto pairs = all_pairs(n);
  const std::int64_t p = static_cast<std::int64_t>(pairs.size());
  const std::int64_t total = p * (p - 1) / 2;
  std::int64_t want = 2LL * k_per_pair * p;
  if (want > total) want = total;
  if (want == 0) return {};

  auto orient = [&](int a, int b) {
    const auto& [i1, i2] = pairs[a];
    const auto& [i3, i4] = pairs[b];
    if (distances(i1, i2) <= distances(i3, i4)) {
      return OrdinalConstraint{i1, i2, i3, i4};
    }
    return OrdinalConstraint{i3, i4, i1, i2};
  };

  std::mt19937_64 rng(seed);
  std::vector<OrdinalConstraint> out;
  out.reserve(static_cast<std::size_t>(want));
  if (want * 2 >= total) {
    // Dense request: enumerate, shuffle, take a prefix.
    std::vector<std::pair<int, int>> combos;
    combos.reserve(static_cast<std::size_t>(total));
    for (int a = 0; a < p; ++a) {
      for (int b = a + 1; b < p; ++b) combos.emplace_back(a, b);
    }
    std::shuffle(combos.begin(), combos.end(), rng);
    for (std::int64_t t = 0; t < want; ++t) {
      out.push_back(orient(combos[t].first, combos[t].second));
    }
  } else {
    std::uniform_int_distribution<int> pick(0, static_cast<int>(p) - 1);
    std::unordered_set<std::int64_t> seen;
    seen.reserve(static_cast<std::size_t>(want) * 2);
    while (static_cast<std::int64_t>(out.size()) < want) {
      int a = pick(rng);
      int b = pick(rng);
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      const std::int64_t key = static_cast<std::int64_t>(a) * p + b;
      if (!seen.insert(key).second) continue;
      out.push_back(orient(a, b));
    }
  }
  return out;
}

std::vector<OrdinalConstraint> sample_ordinal_set(const std::vector<LoidPoint>& points,
                                                  int k_per_pair,
                                                  std::uint64_t seed) {
  return sample_ordinal_set(distance_matrix(points), k_per_pair, seed);
}

std::vector<TrialSummary> sparsity_success_curve(int n, int d,
                                                 const std::vector<double>& s_grid,
                                                 int m_trials, double delta,
                                                 std::uint64_t seed,
                                                 double spread) {
  if (n < 2 || n > 30) {
    throw std::invalid_argument("sparsity_success_curve: need 2 <= n <= 30");
  }
  if (m_trials < 1) {
    throw std::invalid_argument("sparsity_success_curve: m_trials must be >= 1");
  }
  std::vector<TrialSummary> rows;
  rows.reserve(s_grid.size());
  for (std::size_t si = 0; si < s_grid.size(); ++si) {
    const double s = s_grid[si];
    TrialSummary row;
    row.params = {{"n", static_cast<double>(n)},
                  {"d", static_cast<double>(d)},
                  {"s", s},
                  {"spread", spread}};
    row.trials = m_trials;
    row.seed = seed;
    RunningStats stats;
    for (int m = 0; m < m_trials; ++m) {
      const std::uint64_t ts = mix_seed(seed, si, m);
      const auto points = random_loid_points(n, d, ts, spread);
      const Mat d_true = distance_matrix(points);
      const ObservationMask mask = sample_metric_mask(n, s, mix_seed(seed, si, m + 1000003));
      if (mask.measured_count() == 0) {
        ++row.failures;
        stats.add(1.0);
        continue;
      }
      EmbedOptions options;
      double norm2 = 0.0;
      for (const auto& [i, j] : mask.measured_pairs()) {
        const double c = std::cosh(d_true(i, j));
        norm2 += 2.0 * c * c;
      }
      options.eps1 = std::max(1e-8 * norm2, 1e-12);
      // Rank-minimizing reweighting recovers completions the plain trace
      // objective misses at moderate sampling densities.
      options.objective = Objective::kLogDet;
      options.logdet_rounds = 6;
      options.solver.logdet_delta0 = 1.0;
      try {
        auto [g, report] = sdr_complete(Hdm(d_true), mask, {}, d, options);
        const double e_rel = relative_hdm_error(d_true, g);
        stats.add(e_rel);
        if (report.converged && e_rel <= delta) {
          ++row.successes;
        } else if (!report.converged) {
          ++row.failures;
        }
      } catch (const std::exception&) {
        ++row.failures;
        stats.add(1.0);
      }
    }
    row.mean = stats.mean();
    row.stddev = stats.stddev();
    rows.push_back(std::move(row));
  }
  return rows;
}

WeightedTree random_weighted_tree(int n, std::uint64_t seed) {
  if (n < 2) {
    throw std::invalid_argument("random_weighted_tree: n must be >= 2");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  WeightedTree t;
  t.n = n;
  std::vector<int> degree(n, 0);
  for (int v = 1; v < n; ++v) {
    std::vector<int> candidates;
    candidates.reserve(v);
    for (int u = 0; u < v; ++u) {
      if (degree[u] < 3) candidates.push_back(u);
    }
    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    const int u = candidates[pick(rng)];
    double w = unif(rng);
    while (w <= 0.0) w = unif(rng);  // open interval (0,1)
    t.edges.push_back({u, v, w});
    ++degree[u];
    ++degree[v];
  }
  return t;
}

Mat tree_distance_matrix(const WeightedTree& t) {
  if (t.n < 1 || static_cast<int>(t.edges.size()) != t.n - 1) {
    throw std::invalid_argument("tree_distance_matrix: not a tree");
  }
  std::vector<std::vector<std::pair<int, double>>> adj(t.n);
  for (const auto& e : t.edges) {
    if (e.u < 0 || e.u >= t.n || e.v < 0 || e.v >= t.n || e.u == e.v) {
      throw std::invalid_argument("tree_distance_matrix: bad edge");
    }
    adj[e.u].emplace_back(e.v, e.w);
    adj[e.v].emplace_back(e.u, e.w);
  }
  Mat d = Mat::Zero(t.n, t.n);
  std::vector<int> stack;
  std::vector<char> visited(t.n);
  for (int root = 0; root < t.n; ++root) {
    std::fill(visited.begin(), visited.end(), 0);
    visited[root] = 1;
    stack.assign(1, root);
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (const auto& [v, w] : adj[u]) {
        if (visited[v]) continue;
        visited[v] = 1;
        d(root, v) = d(root, u) + w;
        stack.push_back(v);
      }
    }
  }
  for (int i = 0; i < t.n; ++i) {
    if (!visited[i]) {
      throw std::invalid_argument("tree_distance_matrix: graph is disconnected");
    }
  }
  return ((d + d.transpose()) / 2.0).eval();
}

int optimal_embedding_dimension(const std::vector<Mat>& d_by_dim, double delta) {
  if (d_by_dim.empty()) {
    throw std::invalid_argument("optimal_embedding_dimension: empty sequence");
  }
  const Mat& full = d_by_dim.back();
  const int levels = static_cast<int>(d_by_dim.size());
  // Smallest d whose error against the full-dimensional reconstruction is no
  // longer materially improved by dimension d+1. Errors below the vanish
  // floor count as an exact plateau (the ratio is 0/0 there).
  const double vanish = std::max(1e-12, 1e-8 * full.norm());
  for (int idx = 0; idx + 1 < levels; ++idx) {
    const double err_d = (full - d_by_dim[idx]).norm();
    const double err_next = (full - d_by_dim[idx + 1]).norm();
    if (err_d <= vanish) return idx + 1;
    if (err_next / err_d >= 1.0 - delta) return idx + 1;
  }
  return levels;
}

TreeBenchmark tree_benchmark(const std::vector<int>& n_grid, int m_trials,
                             std::uint64_t seed) {
  if (m_trials < 1) {
    throw std::invalid_argument("tree_benchmark: m_trials must be >= 1");
  }
  TreeBenchmark bench;
  for (std::size_t ni = 0; ni < n_grid.size(); ++ni) {
    const int n = n_grid[ni];
    if (n < 2 || n > 25) {
      throw std::invalid_argument("tree_benchmark: need 2 <= n <= 25");
    }
    RunningStats err_h, err_e, dim_h, dim_e;
    int failures = 0;
    for (int m = 0; m < m_trials; ++m) {
      const std::uint64_t ts = mix_seed(seed, ni, m);
      const WeightedTree tree = random_weighted_tree(n, ts);
      const Mat d_tree = tree_distance_matrix(tree);

      // Stage one pins the Gramian to the tree metric and measures the
      // cosh-space misfit its best truncation already makes; that misfit
      // then becomes the fidelity budget of the reweighted solve, so the
      // relaxation may redistribute exactly the distortion the rank
      // reduction costs anyway. Exactly representable inputs keep a
      // near-zero budget and come back unchanged.
      bool ok = true;
      Mat g_h;
      try {
        EmbedOptions pinned;
        pinned.eps1_rel = 1e-12;
        auto [g_a, report_a] = sdr_complete(
            Hdm(d_tree), ObservationMask::complete(n), {}, n - 1, pinned);
        ok = report_a.converged;
        if (ok) {
          std::vector<Mat> dists_a;
          dists_a.reserve(n - 1);
          for (int dd = 1; dd <= n - 1; ++dd) {
            dists_a.push_back(distance_matrix(embed_points(g_a, dd)));
          }
          const int d0_a = optimal_embedding_dimension(dists_a, 1e-3);
          double misfit2 = 0.0;
          double norm2 = 0.0;
          for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
              const double c = std::cosh(d_tree(i, j));
              const double r = std::cosh(dists_a[d0_a - 1](i, j)) - c;
              misfit2 += 2.0 * r * r;
              norm2 += 2.0 * c * c;
            }
          }
          EmbedOptions options;
          options.objective = Objective::kLogDet;
          options.logdet_rounds = 6;
          options.solver.logdet_delta0 = 1.0;
          options.eps1 = std::max(misfit2, 1e-12 * norm2);
          auto [g_b, report_b] = sdr_complete(
              Hdm(d_tree), ObservationMask::complete(n), {}, n - 1, options);
          g_h = std::move(g_b);
          ok = report_b.converged;
        }
      } catch (const std::exception&) {
        ok = false;
      }

      Mat g_e;
      if (ok) {
        SolverConfig lsq_config;
        auto [g, report] = solve_psd_least_squares(
            d_tree.cwiseProduct(d_tree), lsq_config);
        g_e = std::move(g);
        ok = report.converged;
      }
      if (!ok) {
        ++failures;  // excluded from both sides to keep the pairing
        continue;
      }

      std::vector<Mat> hyp_dists;
      hyp_dists.reserve(n - 1);
      for (int dd = 1; dd <= n - 1; ++dd) {
        hyp_dists.push_back(distance_matrix(embed_points(g_h, dd)));
      }
      const int d0_h = optimal_embedding_dimension(hyp_dists, 1e-3);
      err_h.add((d_tree - hyp_dists[d0_h - 1]).norm() / d_tree.norm());
      dim_h.add(static_cast<double>(d0_h));

      Eigen::SelfAdjointEigenSolver<Mat> es(g_e);
      std::vector<Mat> euc_dists;
      euc_dists.reserve(n - 1);
      for (int dd = 1; dd <= n - 1; ++dd) {
        Mat trunc = Mat::Zero(n, n);
        for (int k = 0; k < dd; ++k) {
          const int idx = n - 1 - k;
          const double lam = std::max(es.eigenvalues()(idx), 0.0);
          if (lam > 0.0) {
            trunc += lam * es.eigenvectors().col(idx) *
                     es.eigenvectors().col(idx).transpose();
          }
        }
        euc_dists.push_back(edm_distances(trunc));
      }
      const int d0_e = optimal_embedding_dimension(euc_dists, 1e-3);
      err_e.add((d_tree - euc_dists[d0_e - 1]).norm() / d_tree.norm());
      dim_e.add(static_cast<double>(d0_e));
    }

    auto make_row = [&](const RunningStats& st) {
      TrialSummary row;
      row.params = {{"n", static_cast<double>(n)}};
      row.trials = m_trials;
      row.failures = failures;
      row.successes = static_cast<int>(st.values.size());
      row.mean = st.mean();
      row.stddev = st.stddev();
      row.seed = seed;
      return row;
    };
    bench.hyperbolic_err.push_back(make_row(err_h));
    bench.euclidean_err.push_back(make_row(err_e));
    bench.hyperbolic_dim.push_back(make_row(dim_h));
    bench.euclidean_dim.push_back(make_row(dim_e));
  }
  return bench;
}

double ordinal_accuracy(const Mat& embedded_dist, const Mat& true_dist) {
  if (embedded_dist.rows() != true_dist.rows() ||
      embedded_dist.rows() != embedded_dist.cols() ||
      true_dist.rows() != true_dist.cols()) {
    throw std::invalid_argument("ordinal_accuracy: size mismatch");
  }
  const int n = static_cast<int>(true_dist.rows());
  const auto pairs = all_pairs(n);
  const int p = static_cast<int>(pairs.size());
  if (p < 2) return 1.0;
  std::int64_t total = 0;
  std::int64_t correct = 0;
  for (int a = 0; a < p; ++a) {
    const double ta = true_dist(pairs[a].first, pairs[a].second);
    const double ea = embedded_dist(pairs[a].first, pairs[a].second);
    for (int b = 0; b < p; ++b) {
      if (a == b) continue;
      const double tb = true_dist(pairs[b].first, pairs[b].second);
      if (ta > tb) continue;  // comparison (a, b) not in the ground-truth set
      ++total;
      const double eb = embedded_dist(pairs[b].first, pairs[b].second);
      if (ea < eb) ++correct;  // ties count as incorrect
    }
  }
  return static_cast<double>(correct) / static_cast<double>(total);
}

std::vector<TrialSummary> ordinal_benchmark(int n,
                                            const std::vector<int>& d_grid,
                                            int k_per_pair,
                                            const std::vector<double>& zeta_pct_grid,
                                            std::uint64_t seed,
                                            double corrupt_pct) {
  if (d_grid.empty() || zeta_pct_grid.empty()) {
    throw std::invalid_argument("ordinal_benchmark: empty grids");
  }
  const auto points = random_separated_points(n, 2, seed, 2.0, 1.0);
  const Mat d_true = distance_matrix(points);
  auto ordinal = sample_ordinal_set(d_true, k_per_pair, mix_seed(seed, 7, 1));
  if (corrupt_pct > 0.0 && !ordinal.empty()) {
    auto gap = [&](const OrdinalConstraint& oc) {
      return d_true(oc.i3, oc.i4) - d_true(oc.i1, oc.i2);
    };
    std::sort(ordinal.begin(), ordinal.end(),
              [&](const auto& a, const auto& b) { return gap(a) < gap(b); });
    const auto flips = static_cast<std::size_t>(std::llround(
        corrupt_pct / 100.0 * static_cast<double>(ordinal.size())));
    for (std::size_t k = 0; k < std::min(flips, ordinal.size()); ++k) {
      std::swap(ordinal[k].i1, ordinal[k].i3);
      std::swap(ordinal[k].i2, ordinal[k].i4);
    }
  }

  std::vector<TrialSummary> rows;
  for (std::size_t zi = 0; zi < zeta_pct_grid.size(); ++zi) {
    EmbedOptions options;
    options.min_distance = 1.0;
    // A margin well above the solver default keeps the embedded ordering
    // stable through the rank reduction, and the reweighted objective
    // compresses the junk directions that otherwise leak into high-d
    // embeddings.
    options.eps2 = 5e-2;
    options.objective = Objective::kLogDet;
    options.logdet_rounds = 6;
    options.solver.logdet_delta0 = 1.0;
    if (zeta_pct_grid[zi] > 0.0) {
      options.max_violations_pct = zeta_pct_grid[zi];
    }
    auto [g, report] =
        sdr_complete(Hdm(Mat::Zero(n, n)), ObservationMask::none(n), ordinal,
                     d_grid.front(), options);
    for (int d : d_grid) {
      const auto embedded = embed_points(g, d);
      const double gamma = ordinal_accuracy(distance_matrix(embedded), d_true);
      TrialSummary row;
      row.params = {{"n", static_cast<double>(n)},
                    {"d", static_cast<double>(d)},
                    {"zeta_pct", zeta_pct_grid[zi]},
                    {"k", static_cast<double>(k_per_pair)}};
      row.trials = 1;
      row.successes = report.converged ? 1 : 0;
      row.failures = report.converged ? 0 : 1;
      row.mean = gamma;
      row.stddev = 0.0;
      row.seed = seed;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

Mat correlation_matrix(const Mat& concentrations) {
  const int n = static_cast<int>(concentrations.rows());
  const int m = static_cast<int>(concentrations.cols());
  if (n < 1 || m < 2) {
    throw std::invalid_argument("correlation_matrix: need >= 1 row, >= 2 columns");
  }
  Mat centered = concentrations;
  for (int i = 0; i < n; ++i) {
    centered.row(i).array() -= concentrations.row(i).mean();
  }
  Vec norms(n);
  for (int i = 0; i < n; ++i) norms(i) = centered.row(i).norm();
  Mat c = Mat::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double v = 0.0;
      if (norms(i) > 0.0 && norms(j) > 0.0) {
        v = centered.row(i).dot(centered.row(j)) / (norms(i) * norms(j));
      }
      c(i, j) = c(j, i) = v;
    }
  }
  return c;
}

std::vector<LoidPoint> random_separated_points(int n, int d, std::uint64_t seed,
                                               double spread, double min_dist) {
  if (n < 1 || d < 1) {
    throw std::invalid_argument("random_separated_points: bad arguments");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, spread);
  std::vector<LoidPoint> points;
  points.reserve(n);
  const int max_attempts = 20000;
  for (int k = 0; k < n; ++k) {
    bool placed = false;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
      Vec spatial(d);
      for (int i = 0; i < d; ++i) spatial(i) = gauss(rng);
      LoidPoint candidate = LoidPoint::lift(spatial);
      bool clear = true;
      for (const auto& q : points) {
        if (loid_distance(candidate, q) < min_dist) {
          clear = false;
          break;
        }
      }
      if (clear) {
        points.push_back(std::move(candidate));
        placed = true;
        break;
      }
    }
    if (!placed) {
      throw std::runtime_error(
          "random_separated_points: could not satisfy the separation");
    }
  }
  return points;
}

}  // namespace hdm
