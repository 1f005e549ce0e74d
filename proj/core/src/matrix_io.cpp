#include "rmtinit/matrix_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace rmtinit {

void write_matrix(const Eigen::MatrixXd& m, std::ostream& out) {
    out << m.rows() << ' ' << m.cols() << '\n';
    char buf[32];
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
            if (j > 0) out << ' ';
            out << buf;
        }
        out << '\n';
    }
}

Eigen::MatrixXd read_matrix(std::istream& in) {
    long rows = -1, cols = -1;
    if (!(in >> rows >> cols) || rows < 0 || cols < 0) throw std::runtime_error("read_matrix: bad header");
    Eigen::MatrixXd m(rows, cols);
    for (long i = 0; i < rows; ++i)
        for (long j = 0; j < cols; ++j)
            if (!(in >> m(i, j))) throw std::runtime_error("read_matrix: truncated data");
    return m;
}

void write_matrix_file(const Eigen::MatrixXd& m, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("write_matrix_file: cannot open " + file.string());
    write_matrix(m, out);
}

Eigen::MatrixXd read_matrix_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("read_matrix_file: cannot open " + file.string());
    return read_matrix(in);
}

}  // namespace rmtinit
