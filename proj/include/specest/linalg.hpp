#pragma once

// Dense linear algebra used throughout the estimator: sample matrices,
// Gram products, strict upper-triangular masking and a symmetric
// eigenvalue routine. Storage is Eigen column-major doubles.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "specest/errors.hpp"

namespace specest {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace detail {

inline void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw non_finite_error(std::string(what) + " has non-finite entries");
}

}  // namespace detail

/// n x d sample matrix; row i is the i-th observed sample.
class DataMatrix {
 public:
  explicit DataMatrix(Matrix values) : values_(std::move(values)) {
    if (values_.rows() < 1 || values_.cols() < 1)
      throw std::invalid_argument("DataMatrix needs at least one row and one column");
    detail::require_finite(values_, "DataMatrix");
  }

  std::size_t samples() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(values_.cols()); }
  const Matrix& values() const noexcept { return values_; }

  DataMatrix scaled(double factor) const { return DataMatrix(values_ * factor); }

 private:
  Matrix values_;
};

/// Dense square matrix with finite entries.
class SquareMatrix {
 public:
  explicit SquareMatrix(Matrix values) : values_(std::move(values)) {
    if (values_.rows() != values_.cols())
      throw std::invalid_argument("SquareMatrix must be square");
    detail::require_finite(values_, "SquareMatrix");
  }

  static SquareMatrix identity(std::size_t order) {
    const auto m = static_cast<Eigen::Index>(order);
    return SquareMatrix(Matrix::Identity(m, m));
  }

  std::size_t order() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  const Matrix& values() const noexcept { return values_; }
  double operator()(std::size_t i, std::size_t j) const {
    return values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  double trace() const noexcept { return values_.trace(); }

 private:
  Matrix values_;
};

/// A = Y Y^T, the n x n matrix of inner products between samples.
inline SquareMatrix gram(const DataMatrix& y) {
  Matrix a(y.values().rows(), y.values().rows());
  a.setZero();
  a.selfadjointView<Eigen::Lower>().rankUpdate(y.values());
  a.triangularView<Eigen::StrictlyUpper>() = a.transpose();
  if (!a.allFinite()) throw non_finite_error("gram: product overflowed");
  return SquareMatrix(std::move(a));
}

/// Keeps entries strictly above the diagonal, zeroes the rest.
inline SquareMatrix strict_upper(const SquareMatrix& a) {
  Matrix g = a.values().triangularView<Eigen::StrictlyUpper>();
  return SquareMatrix(std::move(g));
}

inline bool is_symmetric(const Matrix& a, double rel_tol = 1e-8) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(a.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  return (a - a.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

/// Eigenvalues of a symmetric matrix in ascending order.
inline std::vector<double> sym_eigenvalues(const SquareMatrix& a) {
  if (a.order() == 0) return {};
  if (!is_symmetric(a.values())) throw symmetry_error("sym_eigenvalues: matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.values(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("sym_eigenvalues: eigensolver did not converge");
  const Vector& ev = solver.eigenvalues();
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end());
  return out;
}

/// Symmetric eigendecomposition A = Q diag(values) Q^T, values ascending.
struct SymEigen {
  std::vector<double> values;
  Matrix vectors;
};

inline SymEigen sym_eigen(const SquareMatrix& a) {
  if (!is_symmetric(a.values())) throw symmetry_error("sym_eigen: matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.values());
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("sym_eigen: eigensolver did not converge");
  const Vector& ev = solver.eigenvalues();
  return {std::vector<double>(ev.data(), ev.data() + ev.size()), solver.eigenvectors()};
}

// ---------------------------------------------------------------------------
// CSV matrix format: one sample per line, comma separated decimals, no header.

inline DataMatrix read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    std::vector<double> row;
    std::stringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      const auto first = field.find_first_not_of(" \t");
      const auto last = field.find_last_not_of(" \t");
      if (first == std::string::npos) throw parse_error(line_no, "empty field");
      field = field.substr(first, last - first + 1);
      std::size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(field, &used);
      } catch (const std::exception&) {
        throw parse_error(line_no, "not a number: '" + field + "'");
      }
      if (used != field.size()) throw parse_error(line_no, "not a number: '" + field + "'");
      if (!std::isfinite(value)) throw parse_error(line_no, "non-finite value");
      row.push_back(value);
    }
    if (!line.empty() && line.back() == ',') throw parse_error(line_no, "trailing comma");
    if (!rows.empty() && row.size() != rows.front().size())
      throw parse_error(line_no, "expected " + std::to_string(rows.front().size()) +
                                     " columns, found " + std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw parse_error(line_no, "no data rows");

  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return DataMatrix(std::move(m));
}

inline DataMatrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_matrix_csv(in);
}

inline void write_matrix_csv(std::ostream& out, const DataMatrix& y) {
  out << std::setprecision(17);
  const Matrix& m = y.values();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
}

inline void write_matrix_csv(const std::string& path, const DataMatrix& y) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_matrix_csv(out, y);
}

}  // namespace specest
