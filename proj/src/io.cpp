#include "tspdual/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

namespace tspdual::io {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

void reject_unknown_keys(const json& j, const std::set<std::string>& known,
                         const std::string& what) {
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) {
      throw Error(ErrorKind::ConfigError,
                  "unknown " + what + " key \"" + key + "\"");
    }
  }
}

template <class T>
void read_field(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigError,
                std::string("bad value for \"") + key + "\": " + e.what());
  }
}

}  // namespace

LoadedInstance parse_instance(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("d")) {
    throw Error(ErrorKind::InvalidInstance,
                "instance needs fields \"n\" and \"d\"");
  }
  int n = 0;
  std::vector<double> flat;
  try {
    n = j.at("n").get<int>();
    flat = j.at("d").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidInstance, e.what());
  }
  if (n < 3) {
    throw Error(ErrorKind::InvalidInstance,
                "need n >= 3 cities, got n = " + std::to_string(n));
  }
  if (flat.size() != static_cast<std::size_t>(n) * n) {
    throw Error(ErrorKind::InvalidInstance,
                "\"d\" must hold n*n = " + std::to_string(n * n) + " entries");
  }
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) m(i, k) = flat[static_cast<std::size_t>(i) * n + k];
  }
  std::optional<Eigen::MatrixXd> points;
  if (j.contains("points")) {
    std::vector<std::vector<double>> pts;
    try {
      pts = j.at("points").get<std::vector<std::vector<double>>>();
    } catch (const json::exception& e) {
      throw Error(ErrorKind::InvalidInstance, e.what());
    }
    if (pts.size() != static_cast<std::size_t>(n)) {
      throw Error(ErrorKind::InvalidInstance, "\"points\" must list n points");
    }
    Eigen::MatrixXd p(n, 2);
    for (int i = 0; i < n; ++i) {
      if (pts[i].size() != 2) {
        throw Error(ErrorKind::InvalidInstance, "points must be [x, y] pairs");
      }
      p(i, 0) = pts[i][0];
      p(i, 1) = pts[i][1];
    }
    points = std::move(p);
  }
  return {DistanceMatrix::validate(m, false), std::move(points)};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::InvalidInstance,
                "cannot open " + path.string());
  }
  // Parse errors surface as json::parse_error for the caller to map.
  return json::parse(in);
}

LoadedInstance load_instance(const std::filesystem::path& path) {
  return parse_instance(read_json_file(path));
}

json instance_to_json(const DistanceMatrix& d,
                      const std::optional<Eigen::MatrixXd>& points) {
  json j;
  j["n"] = d.n();
  json flat = json::array();
  for (int i = 0; i < d.n(); ++i) {
    for (int k = 0; k < d.n(); ++k) flat.push_back(d(i, k));
  }
  j["d"] = std::move(flat);
  if (points) j["points"] = matrix_to_json(*points);
  return j;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(number(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number(v(i)));
  return out;
}

std::string matrix_to_csv(const Eigen::MatrixXd& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      if (k) out += ',';
      out += format_double(m(i, k));
    }
    out += '\n';
  }
  return out;
}

json reduced_to_json(const ReducedProblem& r) {
  json j;
  j["n"] = r.n;
  j["A_r"] = matrix_to_json(r.A_r);
  j["b_r"] = vector_to_json(r.b_r);
  j["E_r"] = matrix_to_json(r.E_r);
  j["c0"] = r.c0;
  json index = json::array();
  for (int pos = 1; pos < r.n; ++pos) {
    for (int city = 1; city < r.n; ++city) {
      index.push_back({city + 1, pos + 1});
    }
  }
  j["y_index"] = std::move(index);
  return j;
}

json ascent_config_to_json(const AscentConfig& c) {
  return {{"max_iter", c.max_iter},       {"gtol", c.gtol},
          {"ftol", c.ftol},               {"stall_window", c.stall_window},
          {"initial_step", c.initial_step}, {"min_step", c.min_step},
          {"armijo", c.armijo}};
}

AscentConfig ascent_config_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::ConfigError, "ascent config must be an object");
  reject_unknown_keys(j,
                      {"max_iter", "gtol", "ftol", "stall_window",
                       "initial_step", "min_step", "armijo"},
                      "ascent config");
  AscentConfig c;
  read_field(j, "max_iter", c.max_iter);
  read_field(j, "gtol", c.gtol);
  read_field(j, "ftol", c.ftol);
  read_field(j, "stall_window", c.stall_window);
  read_field(j, "initial_step", c.initial_step);
  read_field(j, "min_step", c.min_step);
  read_field(j, "armijo", c.armijo);
  if (c.max_iter < 0 || c.stall_window < 1 || !(c.initial_step > 0.0) ||
      !(c.min_step > 0.0)) {
    throw Error(ErrorKind::ConfigError, "ascent config out of range");
  }
  return c;
}

json inverse_config_to_json(const InverseConfig& c) {
  return {{"n", c.n},
          {"restarts", c.restarts},
          {"local_iters", c.local_iters},
          {"lambda_box_factor", c.lambda_box_factor},
          {"seed", c.seed},
          {"parameterization", to_string(c.parameterization)},
          {"penalty", c.penalty},
          {"strict_margin", c.strict_margin},
          {"step_floor", c.step_floor},
          {"initial_step", c.initial_step}};
}

InverseConfig inverse_config_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::ConfigError, "inverse config must be an object");
  reject_unknown_keys(j,
                      {"n", "restarts", "local_iters", "lambda_box_factor",
                       "seed", "parameterization", "penalty", "strict_margin",
                       "step_floor", "initial_step"},
                      "inverse config");
  InverseConfig c;
  read_field(j, "n", c.n);
  read_field(j, "restarts", c.restarts);
  read_field(j, "local_iters", c.local_iters);
  read_field(j, "lambda_box_factor", c.lambda_box_factor);
  read_field(j, "seed", c.seed);
  read_field(j, "penalty", c.penalty);
  read_field(j, "strict_margin", c.strict_margin);
  read_field(j, "step_floor", c.step_floor);
  read_field(j, "initial_step", c.initial_step);
  std::string kind = to_string(c.parameterization);
  read_field(j, "parameterization", kind);
  if (kind == "points") {
    c.parameterization = Parameterization::Points;
  } else if (kind == "direct") {
    c.parameterization = Parameterization::Direct;
  } else {
    throw Error(ErrorKind::ConfigError,
                "parameterization must be \"points\" or \"direct\"");
  }
  return c;
}

json verify_report_to_json(const VerifyReport& r) {
  return {{"verdict", to_string(r.verdict)},
          {"in_S_plus", r.in_S_plus},
          {"critical", r.critical},
          {"binary", r.binary},
          {"feasible", r.feasible},
          {"optimal", r.optimal},
          {"min_eig", number(r.min_eig)},
          {"gradient_norm", number(r.gradient_norm)},
          {"binary_deviation", number(r.binary_deviation)},
          {"feasibility_residual", number(r.feasibility_residual)},
          {"recovered_objective", number(r.recovered_objective)},
          {"oracle_optimum", number(r.oracle_optimum)}};
}

json inverse_report_to_json(const InverseSearchReport& r) {
  json j;
  j["config"] = inverse_config_to_json(r.config);
  j["seed"] = r.config.seed;
  j["target_Y"] = vector_to_json(r.ybar);
  j["restarts"] = r.restarts;
  j["evaluations"] = r.evaluations;
  j["restarts_with_positive_min_eig"] = r.restarts_with_positive_min_eig;
  j["verdict"] = to_string(r.verdict);
  if (!r.best) {
    j["best"] = nullptr;
    j["best_restart"] = nullptr;
    j["best_score"] = nullptr;
    j["best_min_eig"] = nullptr;
    j["stationarity_residual"] = nullptr;
    j["optimality_margins"] = json::array();
    j["edm_violations"] = nullptr;
    return j;
  }
  json best;
  best["d"] = matrix_to_json(r.best->d.entries());
  best["lambda"] = vector_to_json(r.best->lambda);
  best["mu"] = vector_to_json(r.best->mu);
  best["derived"] = r.best->derived;
  if (r.best->points.size() > 0) best["points"] = matrix_to_json(r.best->points);
  j["best"] = std::move(best);
  j["best_restart"] = r.best_restart;
  j["best_score"] = number(r.best_score);
  j["best_min_eig"] = number(r.best_min_eig);
  j["stationarity_residual"] = number(r.stationarity_residual);
  json margins = json::array();
  for (double m : r.optimality_margins) margins.push_back(number(m));
  j["optimality_margins"] = std::move(margins);
  j["edm_violations"] = number(r.edm_violations);
  if (r.replay) {
    j["replay"] = {{"metric", r.replay->metric},
                   {"positive", r.replay->positive},
                   {"stationary", r.replay->stationary},
                   {"positive_definite", r.replay->positive_definite},
                   {"target_optimal", r.replay->target_optimal},
                   {"passed", r.replay->passed()}};
  }
  return j;
}

std::string ascent_trace_csv(const AscentResult& r) {
  std::string out = "iteration,g,gradient_norm,min_eig\n";
  for (std::size_t k = 0; k < r.trajectory.size(); ++k) {
    const auto& s = r.trajectory[k];
    out += std::to_string(k) + ',' + format_double(s.value) + ',' +
           format_double(s.gradient_norm) + ',' + format_double(s.min_eig) +
           '\n';
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::ConfigError, "cannot write " + path.string());
  out << text;
}

void write_json(const std::filesystem::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

}  // namespace tspdual::io
