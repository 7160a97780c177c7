#include "hdm/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace hdm {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

double parse_double(const std::string& s, const std::string& context) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) {
      ++pos;
    }
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(context + ": cannot parse number '" + s + "'");
  }
}

int parse_index(const std::string& s, const std::string& context) {
  const double v = parse_double(s, context);
  const int i = static_cast<int>(v);
  if (v != static_cast<double>(i) || i < 0) {
    throw std::runtime_error(context + ": bad index '" + s + "'");
  }
  return i;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

json config_to_json(const SolverConfig& c) {
  return json{{"max_iters", c.max_iters},
              {"rho", c.rho},
              {"tol_primal", c.tol_primal},
              {"tol_dual", c.tol_dual},
              {"logdet_rounds", c.logdet_rounds},
              {"logdet_delta0", c.logdet_delta0}};
}

SolverConfig config_from_json(const json& j) {
  SolverConfig c;
  c.max_iters = j.value("max_iters", c.max_iters);
  c.rho = j.value("rho", c.rho);
  c.tol_primal = j.value("tol_primal", c.tol_primal);
  c.tol_dual = j.value("tol_dual", c.tol_dual);
  c.logdet_rounds = j.value("logdet_rounds", c.logdet_rounds);
  c.logdet_delta0 = j.value("logdet_delta0", c.logdet_delta0);
  return c;
}

json provenance_to_json(const Provenance& p) {
  json j{{"invocation", p.invocation},
         {"seed", p.seed},
         {"config", config_to_json(p.config)},
         {"report",
          {{"iterations", p.report.iterations},
           {"primal_residual", p.report.primal_residual},
           {"dual_residual", p.report.dual_residual},
           {"objective", p.report.objective},
           {"converged", p.report.converged},
           {"recon_error", p.recon_error},
           {"padded_dims", p.padded_dims}}}};
  if (p.warning) j["warning"] = *p.warning;
  return j;
}

Provenance provenance_from_json(const json& j) {
  Provenance p;
  p.invocation = j.value("invocation", std::string());
  p.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("config")) p.config = config_from_json(j["config"]);
  if (j.contains("report")) {
    const json& r = j["report"];
    p.report.iterations = r.value("iterations", 0);
    p.report.primal_residual = r.value("primal_residual", 0.0);
    p.report.dual_residual = r.value("dual_residual", 0.0);
    p.report.objective = r.value("objective", 0.0);
    p.report.converged = r.value("converged", false);
    p.recon_error = r.value("recon_error", 0.0);
    p.padded_dims = r.value("padded_dims", 0);
  }
  if (j.contains("warning")) p.warning = j["warning"].get<std::string>();
  return p;
}

json point_rows_to_json(const std::vector<Vec>& rows) {
  json pts = json::array();
  for (const Vec& v : rows) {
    json row = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) row.push_back(v(i));
    pts.push_back(std::move(row));
  }
  return pts;
}

}  // namespace

std::pair<Hdm, ObservationMask> load_distances(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);

  std::string line;
  bool header_seen = false;
  std::vector<std::tuple<int, int, double>> records;
  int max_index = -1;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#' || line == "\r") continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header_seen) {
      if (line != "i,j,value") {
        throw std::runtime_error(path + ": expected header 'i,j,value'");
      }
      header_seen = true;
      continue;
    }
    const auto fields = split_csv_line(line);
    const std::string ctx = path + ":" + std::to_string(line_no);
    if (fields.size() != 3) throw std::runtime_error(ctx + ": expected 3 fields");
    const int i = parse_index(fields[0], ctx);
    const int j = parse_index(fields[1], ctx);
    const double value = parse_double(fields[2], ctx);
    if (i >= j) throw std::runtime_error(ctx + ": need i < j");
    if (value < 0.0) throw std::runtime_error(ctx + ": negative distance");
    if (!(value <= kMaxDistance)) {
      throw std::runtime_error(ctx + ": distance exceeds cap " +
                               fmt17(kMaxDistance));
    }
    records.emplace_back(i, j, value);
    max_index = std::max(max_index, j);
  }
  if (!header_seen) throw std::runtime_error(path + ": missing header");
  if (records.empty()) throw std::runtime_error(path + ": no data");

  const int n = max_index + 1;
  Mat values = Mat::Zero(n, n);
  Eigen::MatrixXi mask = Eigen::MatrixXi::Zero(n, n);
  for (const auto& [i, j, value] : records) {
    if (mask(i, j) != 0) {
      throw std::runtime_error(path + ": duplicate pair (" + std::to_string(i) +
                               "," + std::to_string(j) + ")");
    }
    mask(i, j) = mask(j, i) = 1;
    values(i, j) = values(j, i) = value;
  }
  return {Hdm(std::move(values)), ObservationMask(std::move(mask))};
}

void save_distances(const Hdm& d, const ObservationMask& mask,
                    const std::string& path,
                    const std::vector<std::string>& comments) {
  if (d.n() != mask.n()) {
    throw std::invalid_argument("save_distances: size mismatch");
  }
  auto out = open_out(path);
  for (const auto& c : comments) out << "# " << c << "\n";
  out << "i,j,value\n";
  for (const auto& [i, j] : mask.measured_pairs()) {
    out << i << "," << j << "," << fmt17(d(i, j)) << "\n";
  }
}

std::vector<OrdinalConstraint> load_ordinal(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": invalid JSON: " + e.what());
  }
  const json& arr = j.is_array() ? j : j.value("ordinal", json::array());
  std::vector<OrdinalConstraint> out;
  out.reserve(arr.size());
  for (const auto& rec : arr) {
    if (!rec.is_array() || rec.size() != 4) {
      throw std::runtime_error(path + ": each record must be [i1,i2,i3,i4]");
    }
    out.push_back(OrdinalConstraint{rec[0].get<int>(), rec[1].get<int>(),
                                    rec[2].get<int>(), rec[3].get<int>()});
  }
  try {
    validate_ordinal(out, n);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return out;
}

void save_ordinal(const std::vector<OrdinalConstraint>& ordinal,
                  const std::string& path) {
  json arr = json::array();
  for (const auto& oc : ordinal) {
    arr.push_back(json::array({oc.i1, oc.i2, oc.i3, oc.i4}));
  }
  auto out = open_out(path);
  out << arr.dump(1) << "\n";
}

void save_embedding(const EmbeddingResult& result, const std::string& path,
                    const std::string& model, const Provenance& provenance) {
  if (model != "loid" && model != "poincare") {
    throw std::invalid_argument("save_embedding: model must be loid|poincare");
  }
  std::vector<Vec> rows;
  int dim = 0;
  if (model == "loid") {
    for (const auto& p : result.loid_points) rows.push_back(p.coords());
    dim = result.loid_points.empty() ? 0 : result.loid_points[0].dim();
  } else {
    for (const auto& p : result.poincare_points) rows.push_back(p.coords());
    dim = result.poincare_points.empty() ? 0 : result.poincare_points[0].dim();
  }
  json j{{"model", model},
         {"dim", dim},
         {"n", static_cast<int>(rows.size())},
         {"points", point_rows_to_json(rows)},
         {"provenance", provenance_to_json(provenance)}};
  auto out = open_out(path);
  out << j.dump(1) << "\n";
}

EmbeddingFile load_embedding(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": invalid JSON: " + e.what());
  }
  EmbeddingFile file;
  file.model = j.value("model", std::string());
  file.dim = j.value("dim", 0);
  file.n = j.value("n", 0);
  if (file.model != "loid" && file.model != "poincare") {
    throw std::runtime_error(path + ": unknown model tag");
  }
  for (const auto& row : j.at("points")) {
    Vec v(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) v(i) = row[i].get<double>();
    file.points.push_back(std::move(v));
  }
  if (static_cast<int>(file.points.size()) != file.n) {
    throw std::runtime_error(path + ": point count does not match n");
  }
  const int expected = file.model == "loid" ? file.dim + 1 : file.dim;
  for (const Vec& v : file.points) {
    if (static_cast<int>(v.size()) != expected) {
      throw std::runtime_error(path + ": coordinate length does not match model");
    }
    if (file.model == "poincare" && v.norm() >= 1.0) {
      throw std::runtime_error(path + ": poincare point with norm >= 1");
    }
  }
  if (j.contains("provenance")) {
    file.provenance = provenance_from_json(j["provenance"]);
  }
  return file;
}

std::vector<Vec> load_point_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": invalid JSON: " + e.what());
  }
  const json& arr = j.is_array() ? j : j.at("points");
  std::vector<Vec> rows;
  for (const auto& row : arr) {
    Vec v(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) v(i) = row[i].get<double>();
    rows.push_back(std::move(v));
  }
  return rows;
}

void save_point_rows(const std::vector<Vec>& rows, const std::string& model,
                     const Provenance& provenance, const std::string& path) {
  const int ambient = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  const int dim = model == "loid" ? std::max(0, ambient - 1) : ambient;
  json j{{"model", model},
         {"dim", dim},
         {"n", static_cast<int>(rows.size())},
         {"points", point_rows_to_json(rows)},
         {"provenance", provenance_to_json(provenance)}};
  auto out = open_out(path);
  out << j.dump(1) << "\n";
}

void render_poincare_svg(const std::vector<PoincarePoint>& points,
                         const std::vector<std::string>& labels,
                         const std::string& path,
                         const std::string& metadata) {
  for (const auto& p : points) {
    if (p.coords().norm() >= 1.0) {
      throw std::invalid_argument("render_poincare_svg: point outside the disk");
    }
    if (p.dim() < 2) {
      throw std::invalid_argument("render_poincare_svg: need dimension >= 2");
    }
  }
  const double cx = 500.0, cy = 500.0, radius = 480.0;
  char buf[256];
  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1000\" "
         "height=\"1000\" viewBox=\"0 0 1000 1000\">\n";
  if (!metadata.empty()) {
    svg += "<!-- " + metadata + " -->\n";
  }
  svg += "<rect width=\"1000\" height=\"1000\" fill=\"#ffffff\"/>\n";
  std::snprintf(buf, sizeof(buf),
                "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.3f\" fill=\"none\" "
                "stroke=\"#222222\" stroke-width=\"2\"/>\n",
                cx, cy, radius);
  svg += buf;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const Vec& c = points[k].coords();
    const double px = cx + radius * c(0);
    const double py = cy - radius * c(1);
    std::snprintf(buf, sizeof(buf),
                  "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"5\" fill=\"#1f6fb2\"/>\n",
                  px, py);
    svg += buf;
    if (k < labels.size() && !labels[k].empty()) {
      std::snprintf(buf, sizeof(buf),
                    "<text x=\"%.3f\" y=\"%.3f\" font-size=\"14\" "
                    "font-family=\"sans-serif\" fill=\"#333333\">",
                    px + 8.0, py - 8.0);
      svg += buf;
      svg += labels[k];
      svg += "</text>\n";
    }
  }
  svg += "</svg>\n";
  auto out = open_out(path);
  out << svg;
}

void save_trial_summaries(const std::vector<TrialSummary>& rows,
                          const std::string& path,
                          const std::vector<std::string>& comments) {
  auto out = open_out(path);
  for (const auto& c : comments) out << "# " << c << "\n";
  if (rows.empty()) {
    out << "trials,successes,failures,mean,stddev,seed\n";
    return;
  }
  for (const auto& [name, value] : rows.front().params) out << name << ",";
  out << "trials,successes,failures,mean,stddev,seed\n";
  for (const auto& row : rows) {
    if (row.params.size() != rows.front().params.size()) {
      throw std::invalid_argument("save_trial_summaries: ragged param lists");
    }
    for (const auto& [name, value] : row.params) out << fmt17(value) << ",";
    out << row.trials << "," << row.successes << "," << row.failures << ","
        << fmt17(row.mean) << "," << fmt17(row.stddev) << "," << row.seed
        << "\n";
  }
}

void save_tree_benchmark(const TreeBenchmark& bench, const std::string& path,
                         const std::vector<std::string>& comments) {
  const std::size_t levels = bench.hyperbolic_err.size();
  if (bench.euclidean_err.size() != levels ||
      bench.hyperbolic_dim.size() != levels ||
      bench.euclidean_dim.size() != levels) {
    throw std::invalid_argument("save_tree_benchmark: ragged benchmark");
  }
  auto out = open_out(path);
  for (const auto& c : comments) out << "# " << c << "\n";
  out << "n,space,trials,failures,mean_erel,std_erel,mean_d0,std_d0,seed\n";
  for (std::size_t k = 0; k < levels; ++k) {
    auto emit = [&](const char* space, const TrialSummary& err,
                    const TrialSummary& dim) {
      out << fmt17(err.params.at(0).second) << "," << space << ","
          << err.trials << "," << err.failures << "," << fmt17(err.mean) << ","
          << fmt17(err.stddev) << "," << fmt17(dim.mean) << ","
          << fmt17(dim.stddev) << "," << err.seed << "\n";
    };
    emit("hyperbolic", bench.hyperbolic_err[k], bench.hyperbolic_dim[k]);
    emit("euclidean", bench.euclidean_err[k], bench.euclidean_dim[k]);
  }
}

}  // namespace hdm
