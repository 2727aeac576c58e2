#pragma once

#include <iosfwd>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

namespace specind {

/// Row-major CSV with 17 significant digits.
void write_csv(std::ostream& os, const Eigen::MatrixXd& m);
void write_csv_file(const std::string& path, const Eigen::MatrixXd& m);

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);
nlohmann::json vector_to_json(const Eigen::VectorXd& v);

} // namespace specind
