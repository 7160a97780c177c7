#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "hdm/experiments.hpp"
#include "hdm/io.hpp"

using namespace hdm;

namespace {

namespace fs = std::filesystem;

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "hdm_cli_tests";
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(HDM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path make_distance_file(const std::string& name, int n, std::uint64_t seed) {
  const auto pts = random_loid_points(n, 2, seed, 1.0);
  const Hdm d(distance_matrix(pts));
  const fs::path path = work_dir() / name;
  save_distances(d, ObservationMask::complete(n), path.string());
  return path;
}

}  // namespace

TEST_CASE("embed writes a valid reproducible embedding") {
  const auto dist = make_distance_file("cli_embed.csv", 10, 5);
  const fs::path out = work_dir() / "cli_embed_out.json";
  const fs::path svg = work_dir() / "cli_embed_out.svg";
  const std::string cmd = "embed --distances " + dist.string() +
                          " --dim 2 --out " + out.string() + " --svg " +
                          svg.string() + " --seed 3";
  CHECK(run_cli(cmd) == 0);

  const EmbeddingFile file = load_embedding(out.string());
  CHECK(file.model == "poincare");
  CHECK(file.n == 10);
  CHECK(file.dim == 2);
  CHECK(file.provenance.recon_error <= 1e-2);
  CHECK(file.provenance.invocation.find("--seed 3") != std::string::npos);
  for (const auto& p : file.points) CHECK(p.norm() < 1.0);

  // Same invocation, same bytes.
  const fs::path out2 = work_dir() / "cli_embed_out2.json";
  const std::string cmd2 = "embed --distances " + dist.string() +
                           " --dim 2 --out " + out2.string() + " --svg " +
                           svg.string() + " --seed 3";
  CHECK(run_cli(cmd2) == 0);
  std::string body1 = read_file(out);
  std::string body2 = read_file(out2);
  // The invocation embeds the output path; compare after normalizing it.
  const auto normalize = [](std::string s, const std::string& from) {
    for (std::size_t at = s.find(from); at != std::string::npos;
         at = s.find(from, at)) {
      s.erase(at, from.size());
    }
    return s;
  };
  CHECK(normalize(body1, out.string()) == normalize(body2, out2.string()));
}

TEST_CASE("embed supports the loid model tag") {
  const auto dist = make_distance_file("cli_embed_loid.csv", 8, 6);
  const fs::path out = work_dir() / "cli_embed_loid.json";
  CHECK(run_cli("embed --distances " + dist.string() + " --dim 2 --model loid --out " +
                out.string()) == 0);
  const EmbeddingFile file = load_embedding(out.string());
  CHECK(file.model == "loid");
  for (const auto& p : file.points) REQUIRE(p.size() == 3);
}

TEST_CASE("embed fails cleanly on missing required flags") {
  const auto dist = make_distance_file("cli_embed_bad.csv", 6, 7);
  const fs::path out = work_dir() / "cli_embed_bad.json";
  CHECK(run_cli("embed --distances " + dist.string() + " --out " + out.string()) ==
        1);
  CHECK(run_cli("embed --distances /nonexistent.csv --dim 2 --out " +
                out.string()) == 1);
}

TEST_CASE("complete emits a full matrix that reloads") {
  const auto pts = random_loid_points(9, 2, 8, 1.0);
  const Hdm d(distance_matrix(pts));
  const fs::path dist = work_dir() / "cli_complete_in.csv";
  save_distances(d, sample_metric_mask(9, 0.3, 4), dist.string());

  const fs::path out = work_dir() / "cli_complete_out.csv";
  CHECK(run_cli("complete --distances " + dist.string() + " --dim 2 --out-hdm " +
                out.string()) == 0);
  auto [completed, mask] = load_distances(out.string());
  CHECK(completed.n() == 9);
  CHECK(mask.measured_count() == 36);
  // Plumbing check: stays in the neighborhood of the generator at the
  // default fidelity budget.
  CHECK((completed.values() - d.values()).norm() / d.values().norm() <= 2e-1);
}

TEST_CASE("project maps ambient points onto the sheet") {
  const fs::path in = work_dir() / "cli_project_in.json";
  {
    std::ofstream out(in);
    out << "{\"points\": [[0.0, 1.0, 0.0], [3.0, 0.0, 0.0], [-2.0, 0.5, 0.1]]}\n";
  }
  const fs::path out = work_dir() / "cli_project_out.json";
  CHECK(run_cli("project --in " + in.string() + " --out " + out.string()) == 0);
  const EmbeddingFile file = load_embedding(out.string());
  CHECK(file.model == "loid");
  REQUIRE(file.n == 3);
  for (const auto& p : file.points) {
    const double h = -p(0) * p(0) + p.tail(p.size() - 1).squaredNorm();
    CHECK(h == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(p(0) >= 1.0);
  }
}

TEST_CASE("bench sparsity at S = 0 reports certain success") {
  const fs::path out = work_dir() / "cli_sparsity.csv";
  CHECK(run_cli("bench sparsity --n 8 --dim 2 --grid 0 --trials 3 --delta 1e-2 "
                "--seed 2 --out " +
                out.string()) == 0);
  const std::string body = read_file(out);
  CHECK(body.find("# invocation:") != std::string::npos);
  CHECK(body.find("n,d,s,spread,trials,successes,failures,mean,stddev,seed") !=
        std::string::npos);
  CHECK(body.find("8,2,0,1,3,3,0,") != std::string::npos);

  const fs::path out2 = work_dir() / "cli_sparsity2.csv";
  CHECK(run_cli("bench sparsity --n 8 --dim 2 --grid 0 --trials 3 --delta 1e-2 "
                "--seed 2 --out " +
                out2.string()) == 0);
  const auto normalize = [](std::string s, const std::string& from) {
    const auto at = s.find(from);
    if (at != std::string::npos) s.erase(at, from.size());
    return s;
  };
  CHECK(normalize(read_file(out), out.string()) ==
        normalize(read_file(out2), out2.string()));
}

TEST_CASE("bench tree emits paired rows") {
  const fs::path out = work_dir() / "cli_tree.csv";
  CHECK(run_cli("bench tree --n-grid 5 --trials 2 --seed 4 --out " +
                out.string()) == 0);
  const std::string body = read_file(out);
  CHECK(body.find("n,space,trials,failures,mean_erel,std_erel,mean_d0,std_d0,seed") !=
        std::string::npos);
  CHECK(body.find("5,hyperbolic,2,") != std::string::npos);
  CHECK(body.find("5,euclidean,2,") != std::string::npos);
}

TEST_CASE("bench ordinal emits one row per dimension and budget") {
  const fs::path out = work_dir() / "cli_ordinal.csv";
  CHECK(run_cli("bench ordinal --n 8 --dim-grid 2,3 --k 2 --zeta-grid 0,1 "
                "--seed 6 --out " +
                out.string()) == 0);
  const std::string body = read_file(out);
  CHECK(body.find("n,d,zeta_pct,k,trials,successes,failures,mean,stddev,seed") !=
        std::string::npos);
  int rows = 0;
  for (std::size_t at = body.find('\n'); at != std::string::npos;
       at = body.find('\n', at + 1)) {
    ++rows;
  }
  CHECK(rows >= 6);  // comment + header + 4 data rows
}

TEST_CASE("embed accepts ordinal data with margins and budgets") {
  const auto pts = random_separated_points(9, 2, 14, 2.0, 1.0);
  const Mat d = distance_matrix(pts);
  const fs::path dist = work_dir() / "cli_mixed.csv";
  save_distances(Hdm(d), sample_metric_mask(9, 0.5, 3), dist.string());
  const fs::path ord = work_dir() / "cli_mixed_ord.json";
  save_ordinal(sample_ordinal_set(d, 1, 8), ord.string());

  const fs::path out = work_dir() / "cli_mixed_out.json";
  CHECK(run_cli("embed --distances " + dist.string() + " --ordinal " +
                ord.string() +
                " --dim 2 --eps2 0.05 --min-distance 1 "
                "--max-violations-pct 1 --out " +
                out.string()) == 0);
  const EmbeddingFile file = load_embedding(out.string());
  CHECK(file.n == 9);
  CHECK(file.provenance.invocation.find("--max-violations-pct") !=
        std::string::npos);
}

TEST_CASE("embed honors a solver config file") {
  const auto dist = make_distance_file("cli_embed_cfg.csv", 8, 12);
  const fs::path cfg = work_dir() / "cli_cfg.json";
  {
    std::ofstream out(cfg);
    out << "{\"max_iters\": 3, \"tol_primal\": 1e-6, \"tol_dual\": 1e-6}\n";
  }
  const fs::path out = work_dir() / "cli_embed_cfg.json";
  // Three iterations cannot converge; the CLI must still write the best
  // iterate and exit with 2.
  CHECK(run_cli("embed --distances " + dist.string() + " --dim 2 --config " +
                cfg.string() + " --out " + out.string()) == 2);
  const EmbeddingFile file = load_embedding(out.string());
  CHECK(file.provenance.warning.has_value());
  CHECK(file.provenance.config.max_iters == 3);
  CHECK_FALSE(file.provenance.report.converged);
}

TEST_CASE("unknown command exits with an input error") {
  CHECK(run_cli("frobnicate") == 1);
  CHECK(run_cli("") == 1);
}
