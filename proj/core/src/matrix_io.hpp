#pragma once

// Plain-text matrix serialization shared by the model checkpoints.

#include "jobrel/embed.hpp"
#include "jobrel/error.hpp"

#include <Eigen/Dense>

#include <istream>
#include <ostream>
#include <string>

namespace jobrel::detail {

inline void write_matrix(std::ostream& out, const std::string& name, const Eigen::MatrixXd& m)
{
    out << "matrix " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    bool first = true;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (!first) out << ' ';
            out << format_double(m(r, c));
            first = false;
        }
    }
    out << '\n';
}

inline Eigen::MatrixXd read_matrix(std::istream& in, const std::string& name)
{
    std::string tag;
    std::string got;
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    if (!(in >> tag >> got >> rows >> cols) || tag != "matrix" || got != name || rows < 0 || cols < 0) {
        throw DataError("checkpoint: expected matrix '" + name + "'");
    }
    Eigen::MatrixXd m(rows, cols);
    std::string token;
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            if (!(in >> token)) throw DataError("checkpoint: truncated matrix '" + name + "'");
            m(r, c) = parse_double(token);
        }
    }
    return m;
}

} // namespace jobrel::detail
