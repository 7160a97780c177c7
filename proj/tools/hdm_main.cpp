// Command-line front end. All numeric work lives in the core library; this
// file only parses flags, moves files around and shapes exit codes:
//   0  success
//   1  input error
//   2  solver did not converge (output is still written, with a warning)

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hdm/embedding.hpp"
#include "hdm/experiments.hpp"
#include "hdm/gramian.hpp"
#include "hdm/io.hpp"
#include "hdm/lorentz.hpp"
#include "hdm/solver.hpp"

namespace {

std::string join_invocation(int argc, char** argv) {
  std::ostringstream out;
  out << "hdm";
  for (int i = 1; i < argc; ++i) out << " " << argv[i];
  return out.str();
}

hdm::SolverConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  nlohmann::json j;
  in >> j;
  hdm::SolverConfig c;
  c.max_iters = j.value("max_iters", c.max_iters);
  c.rho = j.value("rho", c.rho);
  c.tol_primal = j.value("tol_primal", c.tol_primal);
  c.tol_dual = j.value("tol_dual", c.tol_dual);
  c.logdet_rounds = j.value("logdet_rounds", c.logdet_rounds);
  c.logdet_delta0 = j.value("logdet_delta0", c.logdet_delta0);
  return c;
}

double masked_recon_error(const hdm::Hdm& dtilde, const hdm::ObservationMask& mask,
                          const hdm::Hdm& recon) {
  double num = 0.0, den = 0.0;
  for (const auto& [i, j] : mask.measured_pairs()) {
    const double diff = dtilde(i, j) - recon(i, j);
    num += diff * diff;
    den += dtilde(i, j) * dtilde(i, j);
  }
  if (den == 0.0) return 0.0;
  return std::sqrt(num / den);
}

struct EmbedArgs {
  std::string distances, ordinal, out, model = "poincare", svg;
  std::string objective = "trace", config;
  int dim = 0;
  std::optional<double> eps1, min_distance, max_violations_pct;
  double eps2 = 1e-2;
  std::uint64_t seed = 0;
};

int run_embed(const EmbedArgs& args, const std::string& invocation) {
  auto [dtilde, mask] = hdm::load_distances(args.distances);
  std::vector<hdm::OrdinalConstraint> ordinal;
  if (!args.ordinal.empty()) {
    ordinal = hdm::load_ordinal(args.ordinal, dtilde.n());
  }

  hdm::EmbedOptions options;
  options.objective = args.objective == "logdet" ? hdm::Objective::kLogDet
                                                 : hdm::Objective::kTrace;
  options.eps1 = args.eps1;
  options.eps2 = args.eps2;
  options.min_distance = args.min_distance;
  options.max_violations_pct = args.max_violations_pct;
  if (!args.config.empty()) options.solver = load_config_file(args.config);

  hdm::EmbeddingResult result =
      hdm::hdgp(dtilde, mask, ordinal, args.dim, options);

  hdm::Provenance prov;
  prov.invocation = invocation;
  prov.seed = args.seed;
  prov.config = options.solver;
  prov.report = result.report;
  prov.recon_error = masked_recon_error(dtilde, mask, result.recon_hdm);
  prov.padded_dims = result.padded_dims;
  if (!result.report.converged) {
    prov.warning = "solver did not converge within max_iters";
  }
  hdm::save_embedding(result, args.out, args.model, prov);
  if (!args.svg.empty()) {
    std::vector<std::string> labels;
    hdm::render_poincare_svg(result.poincare_points, labels, args.svg,
                             invocation);
  }
  if (!result.report.converged) {
    std::cerr << "warning: solver did not converge; best iterate written\n";
    return 2;
  }
  return 0;
}

struct CompleteArgs {
  std::string distances, out_hdm;
  int dim = 0;
};

int run_complete(const CompleteArgs& args, const std::string& invocation) {
  auto [dtilde, mask] = hdm::load_distances(args.distances);
  hdm::EmbedOptions options;
  auto [g, report] = hdm::sdr_complete(dtilde, mask, {}, args.dim, options);
  const hdm::Hdm completed = hdm::hdm_from_gramian(g, 1e-3);
  std::vector<std::string> comments{"invocation: " + invocation};
  if (!report.converged) {
    comments.push_back("warning: solver did not converge within max_iters");
  }
  hdm::save_distances(completed, hdm::ObservationMask::complete(completed.n()),
                      args.out_hdm, comments);
  if (!report.converged) {
    std::cerr << "warning: solver did not converge; best iterate written\n";
    return 2;
  }
  return 0;
}

struct ProjectArgs {
  std::string in, out;
};

int run_project(const ProjectArgs& args, const std::string& invocation) {
  const auto rows = hdm::load_point_rows(args.in);
  if (rows.empty()) throw std::runtime_error(args.in + ": no points");
  for (const auto& row : rows) {
    if (row.size() != rows.front().size() || row.size() < 2) {
      throw std::runtime_error(args.in + ": rows must share a length >= 2");
    }
  }
  std::vector<hdm::Vec> projected;
  projected.reserve(rows.size());
  for (const auto& row : rows) {
    projected.push_back(hdm::project_to_loid(row).coords());
  }
  hdm::Provenance prov;
  prov.invocation = invocation;
  hdm::save_point_rows(projected, "loid", prov, args.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string invocation = join_invocation(argc, argv);

  CLI::App app{"hyperbolic distance-geometry toolkit"};
  app.require_subcommand(1);

  EmbedArgs embed_args;
  double embed_eps1 = -1.0, embed_min_dist = -1.0, embed_viol = -1.0;
  auto* embed = app.add_subcommand(
      "embed", "embed points from metric and/or ordinal measurements");
  embed->add_option("--distances", embed_args.distances, "distance CSV")
      ->required();
  embed->add_option("--ordinal", embed_args.ordinal, "ordinal JSON");
  embed->add_option("--dim", embed_args.dim, "embedding dimension")
      ->required()
      ->check(CLI::PositiveNumber);
  embed->add_option("--out", embed_args.out, "output embedding JSON")
      ->required();
  embed->add_option("--model", embed_args.model, "output model")
      ->check(CLI::IsMember({"loid", "poincare"}));
  embed->add_option("--svg", embed_args.svg, "Poincare-disk SVG path");
  embed->add_option("--objective", embed_args.objective, "solver objective")
      ->check(CLI::IsMember({"trace", "logdet"}));
  auto* eps1_opt = embed->add_option("--eps1", embed_eps1, "fidelity budget");
  embed->add_option("--eps2", embed_args.eps2, "ordinal margin");
  auto* mind_opt =
      embed->add_option("--min-distance", embed_min_dist, "pairwise lower bound");
  auto* viol_opt = embed->add_option("--max-violations-pct", embed_viol,
                                     "allowed violated comparisons, percent");
  embed->add_option("--seed", embed_args.seed, "seed recorded in provenance");
  embed->add_option("--config", embed_args.config, "solver config JSON");

  CompleteArgs complete_args;
  auto* complete = app.add_subcommand(
      "complete", "complete and denoise a distance matrix (no factorization)");
  complete->add_option("--distances", complete_args.distances, "distance CSV")
      ->required();
  complete->add_option("--dim", complete_args.dim, "embedding dimension")
      ->required()
      ->check(CLI::PositiveNumber);
  complete->add_option("--out-hdm", complete_args.out_hdm, "output CSV")
      ->required();

  ProjectArgs project_args;
  auto* project =
      app.add_subcommand("project", "project ambient points onto the sheet");
  project->add_option("--in", project_args.in, "input JSON")->required();
  project->add_option("--out", project_args.out, "output JSON")->required();

  auto* bench = app.add_subcommand("bench", "experiment harnesses");
  bench->require_subcommand(1);

  int sp_n = 10, sp_dim = 2, sp_trials = 20;
  double sp_delta = 1e-2;
  std::uint64_t sp_seed = 0;
  std::vector<double> sp_grid;
  std::string sp_out;
  auto* sparsity = bench->add_subcommand("sparsity", "completion success curve");
  sparsity->add_option("--n", sp_n, "points")->required();
  sparsity->add_option("--dim", sp_dim, "dimension")->required();
  sparsity->add_option("--grid", sp_grid, "sampling densities")
      ->required()
      ->delimiter(',');
  sparsity->add_option("--trials", sp_trials, "trials per density")->required();
  sparsity->add_option("--delta", sp_delta, "success threshold")->required();
  sparsity->add_option("--seed", sp_seed, "seed")->required();
  sparsity->add_option("--out", sp_out, "output CSV")->required();

  int tr_trials = 10;
  std::uint64_t tr_seed = 0;
  std::vector<int> tr_grid;
  std::string tr_out;
  auto* tree = bench->add_subcommand("tree", "paired tree-embedding benchmark");
  tree->add_option("--n-grid", tr_grid, "tree sizes")->required()->delimiter(',');
  tree->add_option("--trials", tr_trials, "trials per size")->required();
  tree->add_option("--seed", tr_seed, "seed")->required();
  tree->add_option("--out", tr_out, "output CSV")->required();

  int od_n = 20, od_k = 4;
  std::uint64_t od_seed = 0;
  std::vector<int> od_dims;
  std::vector<double> od_zetas;
  std::string od_out;
  auto* ordinal = bench->add_subcommand("ordinal", "ordinal embedding accuracy");
  ordinal->add_option("--n", od_n, "points")->required();
  ordinal->add_option("--dim-grid", od_dims, "embedding dimensions")
      ->required()
      ->delimiter(',');
  ordinal->add_option("--k", od_k, "comparisons per pair")->required();
  ordinal->add_option("--zeta-grid", od_zetas, "violation budgets, percent")
      ->required()
      ->delimiter(',');
  ordinal->add_option("--seed", od_seed, "seed")->required();
  ordinal->add_option("--out", od_out, "output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << "\n";
    return 1;
  }

  try {
    if (*embed) {
      if (*eps1_opt) embed_args.eps1 = embed_eps1;
      if (*mind_opt) embed_args.min_distance = embed_min_dist;
      if (*viol_opt) embed_args.max_violations_pct = embed_viol;
      return run_embed(embed_args, invocation);
    }
    if (*complete) return run_complete(complete_args, invocation);
    if (*project) return run_project(project_args, invocation);
    if (*sparsity) {
      const auto rows = hdm::sparsity_success_curve(sp_n, sp_dim, sp_grid,
                                                    sp_trials, sp_delta, sp_seed);
      hdm::save_trial_summaries(rows, sp_out, {"invocation: " + invocation});
      return 0;
    }
    if (*tree) {
      const auto result = hdm::tree_benchmark(tr_grid, tr_trials, tr_seed);
      hdm::save_tree_benchmark(result, tr_out, {"invocation: " + invocation});
      return 0;
    }
    if (*ordinal) {
      const auto rows =
          hdm::ordinal_benchmark(od_n, od_dims, od_k, od_zetas, od_seed);
      hdm::save_trial_summaries(rows, od_out, {"invocation: " + invocation});
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
