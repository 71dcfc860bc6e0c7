#pragma once

// Reference implementations used only by tests. Each one takes a different
// route from the library code it checks.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace specest::oracle {

/// A_ij = <row i, row j> by explicit loops.
inline Eigen::MatrixXd naive_gram(const Eigen::MatrixXd& y) {
  Eigen::MatrixXd a(y.rows(), y.rows());
  for (Eigen::Index i = 0; i < y.rows(); ++i)
    for (Eigen::Index j = 0; j < y.rows(); ++j) {
      double s = 0.0;
      for (Eigen::Index c = 0; c < y.cols(); ++c) s += y(i, c) * y(j, c);
      a(i, j) = s;
    }
  return a;
}

/// Number of eigenvalues of symmetric A strictly below sigma, from the
/// signs of the pivots of an LDL^T factorization of A - sigma I
/// (Sylvester's law of inertia).
inline std::size_t count_below(const Eigen::MatrixXd& a, double sigma) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd m = a - sigma * Eigen::MatrixXd::Identity(n, n);
  std::size_t negative = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    double pivot = m(k, k);
    if (pivot == 0.0) pivot = 1e-300;
    if (pivot < 0.0) ++negative;
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const double f = m(i, k) / pivot;
      for (Eigen::Index j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return negative;
}

/// All eigenvalues by bisection on the inertia count, ascending.
inline std::vector<double> bisection_eigenvalues(const Eigen::MatrixXd& a, double tol = 1e-12) {
  const Eigen::Index n = a.rows();
  double radius = 0.0;  // Gershgorin
  for (Eigen::Index i = 0; i < n; ++i) radius = std::max(radius, a.row(i).cwiseAbs().sum());
  std::vector<double> out;
  for (Eigen::Index idx = 0; idx < n; ++idx) {
    // smallest x with count_below(x) > idx
    double lo = -radius - 1.0, hi = radius + 1.0;
    while (hi - lo > tol * std::max(1.0, radius)) {
      const double mid = 0.5 * (lo + hi);
      if (count_below(a, mid) > static_cast<std::size_t>(idx))
        hi = mid;
      else
        lo = mid;
    }
    out.push_back(0.5 * (lo + hi));
  }
  return out;
}

/// Random orthogonal matrix from the QR of a Gaussian matrix.
inline Eigen::MatrixXd random_orthogonal(Eigen::Index n, std::mt19937_64& gen) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = g(gen);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  return qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
}

inline Eigen::MatrixXd random_symmetric(Eigen::Index n, std::mt19937_64& gen) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) m(i, j) = m(j, i) = g(gen);
  return m;
}

/// Linear CDF scan: smallest support point whose running mass reaches `level`,
/// computed with integer numerators when masses are multiples of 1/denominator.
inline double quantile_by_counts(const std::vector<double>& support,
                                 const std::vector<long>& counts, long denominator, long level_num,
                                 long level_den) {
  // cumulative/denominator >= level_num/level_den  <=>  cumulative*level_den >= level_num*denominator
  long cumulative = 0;
  for (std::size_t j = 0; j < support.size(); ++j) {
    cumulative += counts[j];
    if (cumulative * level_den >= level_num * denominator) return support[j];
  }
  return support.back();
}

/// Independent floating CDF scan, restarting the sum for every level.
inline double quantile_scan(const std::vector<double>& support, const std::vector<double>& masses,
                            double level) {
  for (std::size_t j = 0; j < support.size(); ++j) {
    double cdf = 0.0;
    for (std::size_t l = 0; l <= j; ++l) cdf += masses[l];
    if (cdf >= level - 1e-12) return support[j];
  }
  return support.back();
}

/// Minimum-cost transport between two discrete distributions by successive
/// shortest augmenting paths (Bellman-Ford) on the bipartite flow network.
inline double transport_cost(const std::vector<double>& xp, const std::vector<double>& mp,
                             const std::vector<double>& xq, const std::vector<double>& mq) {
  const std::size_t a = xp.size(), b = xq.size();
  const std::size_t source = a + b, sink = a + b + 1, nodes = a + b + 2;
  struct Edge {
    std::size_t to, rev;
    double cap, cost;
  };
  std::vector<std::vector<Edge>> g(nodes);
  auto add = [&](std::size_t u, std::size_t v, double cap, double cost) {
    g[u].push_back({v, g[v].size(), cap, cost});
    g[v].push_back({u, g[u].size() - 1, 0.0, -cost});
  };
  for (std::size_t i = 0; i < a; ++i) add(source, i, mp[i], 0.0);
  for (std::size_t j = 0; j < b; ++j) add(a + j, sink, mq[j], 0.0);
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < b; ++j) add(i, a + j, 1e9, std::abs(xp[i] - xq[j]));

  double total = 0.0, flow = 0.0;
  const double eps = 1e-15;
  while (flow < 1.0 - 1e-12) {
    std::vector<double> dist(nodes, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> prev_node(nodes), prev_edge(nodes);
    dist[source] = 0.0;
    for (std::size_t it = 0; it < nodes; ++it) {
      bool changed = false;
      for (std::size_t u = 0; u < nodes; ++u) {
        if (!std::isfinite(dist[u])) continue;
        for (std::size_t e = 0; e < g[u].size(); ++e) {
          const Edge& ed = g[u][e];
          if (ed.cap > eps && dist[u] + ed.cost < dist[ed.to] - 1e-15) {
            dist[ed.to] = dist[u] + ed.cost;
            prev_node[ed.to] = u;
            prev_edge[ed.to] = e;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    if (!std::isfinite(dist[sink])) break;
    double push = std::numeric_limits<double>::infinity();
    for (std::size_t v = sink; v != source; v = prev_node[v])
      push = std::min(push, g[prev_node[v]][prev_edge[v]].cap);
    for (std::size_t v = sink; v != source; v = prev_node[v]) {
      Edge& ed = g[prev_node[v]][prev_edge[v]];
      ed.cap -= push;
      g[v][ed.rev].cap += push;
    }
    flow += push;
    total += push * dist[sink];
  }
  return total;
}

/// Sum over increasing tuples using an explicit odometer instead of recursion.
inline double increasing_cycle_sum_odometer(const Eigen::MatrixXd& a, std::size_t k) {
  const std::size_t n = static_cast<std::size_t>(a.rows());
  if (k > n) return 0.0;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  double total = 0.0;
  while (true) {
    double prod = 1.0;
    for (std::size_t i = 0; i < k; ++i)
      prod *= a(static_cast<Eigen::Index>(idx[i]), static_cast<Eigen::Index>(idx[(i + 1) % k]));
    total += prod;
    std::size_t pos = k;
    while (pos > 0 && idx[pos - 1] == n - k + pos - 1) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t i = pos; i < k; ++i) idx[i] = idx[i - 1] + 1;
  }
  return total;
}

/// min_p sum_i w_i |(Vp)_i - a_i| over the simplex by enumerating every
/// basis of the split-slack LP (k+1 rows, t+2k columns) and keeping the best
/// feasible vertex.
inline double lp_vertex_enumeration(const Eigen::MatrixXd& v, const std::vector<double>& a,
                                    const std::vector<double>& w) {
  const Eigen::Index k = v.rows(), t = v.cols(), m = k + 1, cols = t + 2 * k;
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(m, cols);
  full.topLeftCorner(k, t) = v;
  full.block(0, t, k, k) = -Eigen::MatrixXd::Identity(k, k);
  full.block(0, t + k, k, k) = Eigen::MatrixXd::Identity(k, k);
  full.row(k).head(t).setOnes();
  Eigen::VectorXd rhs(m);
  for (Eigen::Index i = 0; i < k; ++i) rhs(i) = a[static_cast<std::size_t>(i)];
  rhs(k) = 1.0;
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(cols);
  for (Eigen::Index i = 0; i < k; ++i) cost(t + i) = cost(t + k + i) = w[static_cast<std::size_t>(i)];

  double best = std::numeric_limits<double>::infinity();
  std::vector<Eigen::Index> pick(static_cast<std::size_t>(m));
  std::function<void(Eigen::Index, Eigen::Index)> rec = [&](Eigen::Index depth, Eigen::Index from) {
    if (depth == m) {
      Eigen::MatrixXd b(m, m);
      for (Eigen::Index c = 0; c < m; ++c) b.col(c) = full.col(pick[static_cast<std::size_t>(c)]);
      Eigen::FullPivLU<Eigen::MatrixXd> lu(b);
      if (lu.rank() < m) return;
      const Eigen::VectorXd x = lu.solve(rhs);
      if ((b * x - rhs).norm() > 1e-9) return;
      double obj = 0.0;
      for (Eigen::Index c = 0; c < m; ++c) {
        if (x(c) < -1e-12) return;
        obj += cost(pick[static_cast<std::size_t>(c)]) * x(c);
      }
      best = std::min(best, obj);
      return;
    }
    for (Eigen::Index c = from; c < cols; ++c) {
      pick[static_cast<std::size_t>(depth)] = c;
      rec(depth + 1, c + 1);
    }
  };
  rec(0, 0);
  return best;
}

/// Exhaustive grid search: p restricted to `support` with every coordinate a
/// multiple of 1/steps. Returns the smallest objective found.
inline double lp_grid_search(const Eigen::MatrixXd& v, const std::vector<double>& a,
                             const std::vector<double>& w, const std::vector<Eigen::Index>& support,
                             int steps) {
  const Eigen::Index k = v.rows();
  const std::size_t s = support.size();
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> residual(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) residual[static_cast<std::size_t>(i)] = -a[static_cast<std::size_t>(i)];
  const double h = 1.0 / steps;
  // Place `left` grid units on support[pos..]; the last coordinate takes the rest.
  std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int left) {
    const Eigen::Index col = support[pos];
    if (pos + 1 == s) {
      double obj = 0.0;
      for (Eigen::Index i = 0; i < k; ++i)
        obj += w[static_cast<std::size_t>(i)] *
               std::abs(residual[static_cast<std::size_t>(i)] + left * h * v(i, col));
      best = std::min(best, obj);
      return;
    }
    for (int c = 0; c <= left; ++c) {
      for (Eigen::Index i = 0; i < k; ++i) residual[static_cast<std::size_t>(i)] += c * h * v(i, col);
      rec(pos + 1, left - c);
      for (Eigen::Index i = 0; i < k; ++i) residual[static_cast<std::size_t>(i)] -= c * h * v(i, col);
    }
  };
  rec(0, steps);
  return best;
}

}  // namespace specest::oracle
