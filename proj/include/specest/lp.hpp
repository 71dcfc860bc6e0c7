#pragma once

// Weighted-L1 moment matching over the probability simplex:
//
//   minimize   sum_i w_i |(V p)_i - target_i|
//   subject to sum_j p_j = 1,  p >= 0
//
// solved by a revised simplex method on the split form
//   V p - u + v = target,  1^T p = 1,  p, u, v >= 0,  cost sum_i w_i (u_i + v_i).
// The basis has only k + 1 rows, so it is refactored from scratch at every
// iteration.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "specest/linalg.hpp"

namespace specest {

struct WeightedL1Problem {
  Matrix moments;               // k x t, moments(i, j) = mesh[j]^(i+1)
  std::vector<double> target;   // length k
  std::vector<double> weights;  // length k, > 0
  std::vector<double> mesh;     // length t, strictly increasing

  /// Builds the power-moment matrix from the mesh.
  static WeightedL1Problem from_mesh(std::vector<double> mesh, std::vector<double> target,
                                     std::vector<double> weights) {
    const auto k = static_cast<Eigen::Index>(target.size());
    const auto t = static_cast<Eigen::Index>(mesh.size());
    Matrix v(k, t);
    for (Eigen::Index j = 0; j < t; ++j) {
      double power = 1.0;
      for (Eigen::Index i = 0; i < k; ++i) {
        power *= mesh[static_cast<std::size_t>(j)];
        v(i, j) = power;
      }
    }
    return {std::move(v), std::move(target), std::move(weights), std::move(mesh)};
  }

  void validate() const {
    const auto k = target.size();
    const auto t = mesh.size();
    if (k == 0 || t == 0) throw std::invalid_argument("WeightedL1Problem: empty problem");
    if (weights.size() != k) throw std::invalid_argument("WeightedL1Problem: weights size");
    if (static_cast<std::size_t>(moments.rows()) != k ||
        static_cast<std::size_t>(moments.cols()) != t)
      throw std::invalid_argument("WeightedL1Problem: moment matrix shape");
    for (double w : weights)
      if (!(w > 0.0) || !std::isfinite(w))
        throw std::invalid_argument("WeightedL1Problem: weights must be positive and finite");
    for (double a : target)
      if (!std::isfinite(a)) throw std::invalid_argument("WeightedL1Problem: non-finite target");
    for (std::size_t j = 1; j < t; ++j)
      if (!(mesh[j] > mesh[j - 1]))
        throw std::invalid_argument("WeightedL1Problem: mesh must be strictly increasing");
    if (!moments.allFinite()) throw std::invalid_argument("WeightedL1Problem: non-finite V");
  }

  /// sum_i w_i |(V p)_i - target_i|
  double objective(const std::vector<double>& p) const {
    const Eigen::Map<const Vector> pv(p.data(), static_cast<Eigen::Index>(p.size()));
    const Vector residual = moments * pv;
    double obj = 0.0;
    for (std::size_t i = 0; i < target.size(); ++i)
      obj += weights[i] * std::abs(residual(static_cast<Eigen::Index>(i)) - target[i]);
    return obj;
  }
};

enum class SolveStatus { optimal, iteration_limit };

struct SimplexSolution {
  std::vector<double> p;
  double objective = 0.0;
  SolveStatus status = SolveStatus::optimal;
  std::size_t iterations = 0;
};

struct SimplexOptions {
  std::size_t max_iterations = 200000;
  double optimality_tol = 0.0;  // on reduced costs, weights normalized to max 1
  double pivot_tol = 1e-11;
};

namespace detail {

class WeightedL1Simplex {
 public:
  WeightedL1Simplex(const WeightedL1Problem& prob, const SimplexOptions& opts)
      : prob_(prob),
        opts_(opts),
        k_(static_cast<Eigen::Index>(prob.target.size())),
        t_(static_cast<Eigen::Index>(prob.mesh.size())),
        m_(k_ + 1) {
    const double wmax = *std::max_element(prob.weights.begin(), prob.weights.end());
    w_.resize(k_);
    for (Eigen::Index i = 0; i < k_; ++i)
      w_(i) = prob.weights[static_cast<std::size_t>(i)] / wmax;
    rhs_.resize(m_);
    for (Eigen::Index i = 0; i < k_; ++i) rhs_(i) = prob.target[static_cast<std::size_t>(i)];
    rhs_(k_) = 1.0;
  }

  SimplexSolution run() {
    initial_basis();
    SimplexSolution sol;
    sol.status = SolveStatus::iteration_limit;

    const std::size_t stall_limit = 10 * static_cast<std::size_t>(t_ + 2 * k_);
    std::size_t stalled = 0;
    bool bland = false;
    double best = std::numeric_limits<double>::infinity();

    Eigen::PartialPivLU<Matrix> lu;
    Vector col(m_);
    std::size_t iter = 0;
    for (; iter < opts_.max_iterations; ++iter) {
      factor(lu);
      x_basic_ = lu.solve(rhs_);
      for (Eigen::Index r = 0; r < m_; ++r) x_basic_(r) = std::max(x_basic_(r), 0.0);

      const double obj = basic_objective();
      if (obj < best * (1.0 - 1e-15) - 1e-300) {
        best = obj;
        stalled = 0;
      } else if (!bland && ++stalled > stall_limit) {
        bland = true;
      }

      Vector cb(m_);
      for (Eigen::Index r = 0; r < m_; ++r) cb(r) = cost(basis_[static_cast<std::size_t>(r)]);
      const Vector y = lu.transpose().solve(cb);

      const Eigen::Index entering = price(y, bland);
      if (entering < 0) {
        sol.status = SolveStatus::optimal;
        break;
      }

      column(entering, col);
      const Vector dir = lu.solve(col);
      const Eigen::Index leave = ratio_test(dir);
      if (leave < 0) throw std::logic_error("WeightedL1Simplex: unbounded direction");
      in_basis_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(leave)])] = false;
      basis_[static_cast<std::size_t>(leave)] = entering;
      in_basis_[static_cast<std::size_t>(entering)] = true;
    }
    if (sol.status == SolveStatus::iteration_limit) {
      factor(lu);
      x_basic_ = lu.solve(rhs_);
      for (Eigen::Index r = 0; r < m_; ++r) x_basic_(r) = std::max(x_basic_(r), 0.0);
    }

    sol.iterations = iter;
    sol.p.assign(static_cast<std::size_t>(t_), 0.0);
    for (Eigen::Index r = 0; r < m_; ++r) {
      const Eigen::Index j = basis_[static_cast<std::size_t>(r)];
      if (j < t_) sol.p[static_cast<std::size_t>(j)] = x_basic_(r);
    }
    double total = 0.0;
    for (double& v : sol.p) {
      if (v < 1e-15) v = 0.0;
      total += v;
    }
    for (double& v : sol.p) v /= total;
    sol.objective = prob_.objective(sol.p);
    return sol;
  }

 private:
  // Columns: [0, t) mesh masses p_j; [t, t+k) surplus u_i; [t+k, t+2k) deficit v_i.
  double cost(Eigen::Index j) const {
    if (j < t_) return 0.0;
    return w_((j - t_) % k_);
  }

  void column(Eigen::Index j, Vector& out) const {
    out.setZero();
    if (j < t_) {
      out.head(k_) = prob_.moments.col(j);
      out(k_) = 1.0;
    } else if (j < t_ + k_) {
      out(j - t_) = -1.0;
    } else {
      out(j - t_ - k_) = 1.0;
    }
  }

  void factor(Eigen::PartialPivLU<Matrix>& lu) const {
    Matrix b(m_, m_);
    Vector col(m_);
    for (Eigen::Index r = 0; r < m_; ++r) {
      column(basis_[static_cast<std::size_t>(r)], col);
      b.col(r) = col;
    }
    lu.compute(b);
  }

  double basic_objective() const {
    double obj = 0.0;
    for (Eigen::Index r = 0; r < m_; ++r) obj += cost(basis_[static_cast<std::size_t>(r)]) * x_basic_(r);
    return obj;
  }

  // Start from the single mesh point with the smallest weighted residual;
  // every residual row is then covered by its surplus or deficit slack.
  void initial_basis() {
    Eigen::Index start = 0;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < t_; ++j) {
      double r = 0.0;
      for (Eigen::Index i = 0; i < k_; ++i) r += w_(i) * std::abs(prob_.moments(i, j) - rhs_(i));
      if (r < best) {
        best = r;
        start = j;
      }
    }
    basis_.assign(static_cast<std::size_t>(m_), 0);
    in_basis_.assign(static_cast<std::size_t>(t_ + 2 * k_), false);
    for (Eigen::Index i = 0; i < k_; ++i) {
      const bool surplus = prob_.moments(i, start) >= rhs_(i);
      basis_[static_cast<std::size_t>(i)] = surplus ? t_ + i : t_ + k_ + i;
    }
    basis_[static_cast<std::size_t>(k_)] = start;
    for (Eigen::Index j : basis_) in_basis_[static_cast<std::size_t>(j)] = true;
  }

  // Dantzig pricing, or Bland's smallest-index rule once stalled.
  Eigen::Index price(const Vector& y, bool bland) const {
    Eigen::Index best_j = -1;
    double best_d = -opts_.optimality_tol;
    const Vector vty = prob_.moments.transpose() * y.head(k_);
    const Eigen::Index total = t_ + 2 * k_;
    for (Eigen::Index j = 0; j < total; ++j) {
      if (in_basis_[static_cast<std::size_t>(j)]) continue;
      double d;
      if (j < t_) {
        d = -(vty(j) + y(k_));
      } else if (j < t_ + k_) {
        d = w_(j - t_) + y(j - t_);
      } else {
        d = w_(j - t_ - k_) - y(j - t_ - k_);
      }
      if (d < best_d) {
        best_d = d;
        best_j = j;
        if (bland) break;
      }
    }
    return best_j;
  }

  Eigen::Index ratio_test(const Vector& dir) const {
    const double scale = std::max(1.0, dir.cwiseAbs().maxCoeff());
    double min_ratio = std::numeric_limits<double>::infinity();
    for (Eigen::Index r = 0; r < m_; ++r)
      if (dir(r) > opts_.pivot_tol * scale) min_ratio = std::min(min_ratio, x_basic_(r) / dir(r));
    if (!std::isfinite(min_ratio)) return -1;

    // Ties go to the smallest variable index.
    const double cutoff = min_ratio + 1e-12 * std::max(1.0, min_ratio);
    Eigen::Index leave = -1;
    for (Eigen::Index r = 0; r < m_; ++r) {
      if (dir(r) <= opts_.pivot_tol * scale || x_basic_(r) / dir(r) > cutoff) continue;
      if (leave < 0 || basis_[static_cast<std::size_t>(r)] < basis_[static_cast<std::size_t>(leave)])
        leave = r;
    }
    return leave;
  }

  const WeightedL1Problem& prob_;
  SimplexOptions opts_;
  Eigen::Index k_, t_, m_;
  Vector w_;
  Vector rhs_;
  Vector x_basic_;
  std::vector<Eigen::Index> basis_;
  std::vector<bool> in_basis_;
};

}  // namespace detail

/// Solves the weighted-L1 moment-matching LP. The returned p is clamped to
/// be nonnegative and renormalized to sum to one; `objective` is evaluated
/// on that p with the caller's (unnormalized) weights.
inline SimplexSolution solve(const WeightedL1Problem& prob, const SimplexOptions& opts = {}) {
  prob.validate();
  return detail::WeightedL1Simplex(prob, opts).run();
}

}  // namespace specest
