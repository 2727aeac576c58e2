#include "specind/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "specind/errors.hpp"

namespace specind {

void write_csv(std::ostream& os, const Eigen::MatrixXd& m) {
    char buf[64];
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
            os << buf << (j + 1 < m.cols() ? "," : "");
        }
        os << "\n";
    }
}

void write_csv_file(const std::string& path, const Eigen::MatrixXd& m) {
    std::ofstream os(path);
    if (!os)
        throw ParseError("cannot open " + path + " for writing");
    write_csv(os, m);
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back(v(i));
    return out;
}

} // namespace specind
