#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

namespace rmtinit {

/// Portable text matrix: a "rows cols" header line, then one line per row of
/// space separated decimal values (round-trip precision).
void write_matrix(const Eigen::MatrixXd& m, std::ostream& out);
Eigen::MatrixXd read_matrix(std::istream& in);

void write_matrix_file(const Eigen::MatrixXd& m, const std::filesystem::path& file);
Eigen::MatrixXd read_matrix_file(const std::filesystem::path& file);

}  // namespace rmtinit
