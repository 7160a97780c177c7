#pragma once

// File formats: long-form distance CSV (missing entries are first-class),
// ordinal JSON, embedding JSON with a provenance block, experiment CSV
// tables, and Poincare-disk SVG rendering. Doubles are written with 17
// significant digits so round-trips are lossless.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hdm/embedding.hpp"
#include "hdm/experiments.hpp"
#include "hdm/gramian.hpp"
#include "hdm/solver.hpp"

namespace hdm {

/// Largest accepted distance value; cosh(20) already strains first-order
/// solves, so larger inputs are rejected at load time.
inline constexpr double kMaxDistance = 20.0;

/// Reads a long-form CSV with header `i,j,value` (0-based, i < j, no
/// duplicates; lines starting with '#' are skipped). Returns the
/// symmetrically filled distance matrix and the mask of listed pairs.
/// Throws std::runtime_error on malformed input, duplicate pairs, negative
/// values or values above kMaxDistance.
std::pair<Hdm, ObservationMask> load_distances(const std::string& path);

/// Writes measured entries in the same long-form CSV. `comment` lines (one
/// string per line, without the leading '#') are emitted before the header.
void save_distances(const Hdm& d, const ObservationMask& mask,
                    const std::string& path,
                    const std::vector<std::string>& comments = {});

/// Ordinal JSON: an array of [i1,i2,i3,i4] records.
std::vector<OrdinalConstraint> load_ordinal(const std::string& path, int n);
void save_ordinal(const std::vector<OrdinalConstraint>& ordinal,
                  const std::string& path);

/// Provenance recorded in every embedding file.
struct Provenance {
  std::string invocation;  // full command line (flags + seed)
  std::uint64_t seed = 0;
  SolverConfig config;
  SolverReport report;
  double recon_error = 0.0;  // relative error on measured entries
  int padded_dims = 0;
  std::optional<std::string> warning;
};

/// Embedding JSON payload ("loid" stores (d+1)-vectors, "poincare"
/// d-vectors with norms < 1).
struct EmbeddingFile {
  std::string model;  // "loid" | "poincare"
  int dim = 0;
  int n = 0;
  std::vector<Vec> points;
  Provenance provenance;
};

void save_embedding(const EmbeddingResult& result, const std::string& path,
                    const std::string& model, const Provenance& provenance);
EmbeddingFile load_embedding(const std::string& path);

/// Raw point list from an embedding-file-shaped JSON (used by `project`,
/// which accepts arbitrary ambient vectors).
std::vector<Vec> load_point_rows(const std::string& path);
void save_point_rows(const std::vector<Vec>& rows, const std::string& model,
                     const Provenance& provenance, const std::string& path);

/// SVG of the unit disk (1000x1000 viewport) with point markers and
/// optional labels. Deterministic bytes for fixed input. `metadata` is
/// embedded as an SVG comment when nonempty. Throws if a point lies outside
/// the open disk.
void render_poincare_svg(const std::vector<PoincarePoint>& points,
                         const std::vector<std::string>& labels,
                         const std::string& path,
                         const std::string& metadata = {});

/// Experiment table CSV: '#' comment lines, then a header of param names
/// plus the fixed stat columns, then one row per summary.
void save_trial_summaries(const std::vector<TrialSummary>& rows,
                          const std::string& path,
                          const std::vector<std::string>& comments = {});

/// Paired tree-benchmark CSV: one row per (n, space) with error and
/// dimension statistics side by side.
void save_tree_benchmark(const TreeBenchmark& bench, const std::string& path,
                         const std::vector<std::string>& comments = {});

}  // namespace hdm
