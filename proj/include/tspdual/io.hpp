#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "tspdual/dual.hpp"
#include "tspdual/instance.hpp"
#include "tspdual/inverse.hpp"
#include "tspdual/reduction.hpp"

namespace tspdual::io {

using nlohmann::json;

// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);

struct LoadedInstance {
  DistanceMatrix d;
  std::optional<Eigen::MatrixXd> points;
};

// {"n": int, "d": [n*n reals, row-major], "points": [[x, y], ...]?}
LoadedInstance parse_instance(const json& j);
LoadedInstance load_instance(const std::filesystem::path& path);
json instance_to_json(const DistanceMatrix& d,
                      const std::optional<Eigen::MatrixXd>& points);

json matrix_to_json(const Eigen::MatrixXd& m);
json vector_to_json(const Eigen::VectorXd& v);
std::string matrix_to_csv(const Eigen::MatrixXd& m);

// {"n", "A_r", "b_r", "E_r", "c0", "y_index"}; y_index lists the 1-based
// (city, position) pair behind each reduced coordinate.
json reduced_to_json(const ReducedProblem& r);

json ascent_config_to_json(const AscentConfig& c);
AscentConfig ascent_config_from_json(const json& j);

json inverse_config_to_json(const InverseConfig& c);
InverseConfig inverse_config_from_json(const json& j);

json verify_report_to_json(const VerifyReport& r);
json inverse_report_to_json(const InverseSearchReport& r);

// iteration,g,gradient_norm,min_eig
std::string ascent_trace_csv(const AscentResult& r);

json read_json_file(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const json& j);

}  // namespace tspdual::io
