#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "orbent/error.hpp"

namespace orbent {

struct FiedlerOrdering {
  std::vector<int> order;   // 0-based orbital indices
  bool degenerate = false;  // a component had a repeated second Laplacian eigenvalue
};

namespace detail {

inline std::vector<std::vector<int>> connected_components(const Eigen::MatrixXd& w) {
  const auto n = static_cast<int>(w.rows());
  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  std::vector<std::vector<int>> components;
  for (int start = 0; start < n; ++start) {
    if (seen[static_cast<std::size_t>(start)]) continue;
    std::vector<int> members{start};
    seen[static_cast<std::size_t>(start)] = 1;
    for (std::size_t head = 0; head < members.size(); ++head)
      for (int v = 0; v < n; ++v)
        if (!seen[static_cast<std::size_t>(v)] && w(members[head], v) > 0.0) {
          seen[static_cast<std::size_t>(v)] = 1;
          members.push_back(v);
        }
    std::sort(members.begin(), members.end());
    components.push_back(std::move(members));
  }
  return components;
}

}  // namespace detail

/**
 * @brief Orbital ordering from the Fiedler vector of L = diag(Σ_j I_ij) − I.
 *
 * Each connected component (components ordered by smallest member) is
 * sorted by ascending Fiedler-vector component, ties by index. The vector's
 * sign is fixed so its first nonzero entry, in index order, is positive.
 * When the second eigenvalue is repeated the vector is the projection of the
 * lowest-index unit vector onto the degenerate eigenspace, which does not
 * depend on the eigensolver's choice of basis.
 */
inline FiedlerOrdering fiedler_order(const Eigen::MatrixXd& mi) {
  const auto n = static_cast<int>(mi.rows());
  if (mi.cols() != n) throw DimensionError("fiedler_order: matrix must be square");
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (mi(i, j) != mi(j, i)) throw Error("fiedler_order: matrix is not symmetric");
      if (mi(i, j) < -1e-10) throw Error("fiedler_order: negative entry");
      w(i, j) = std::max(mi(i, j), 0.0);
    }

  FiedlerOrdering out;
  for (const auto& members : detail::connected_components(w)) {
    const auto m = static_cast<int>(members.size());
    if (m == 1) {
      out.order.push_back(members.front());
      continue;
    }
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(m, m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        if (a != b) {
          lap(a, b) = -w(members[a], members[b]);
          lap(a, a) += w(members[a], members[b]);
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lap);
    const auto& values = es.eigenvalues();
    const double tol = 1e-10 * std::max(1.0, values.cwiseAbs().maxCoeff());
    int last = 1;
    while (last + 1 < m && values(last + 1) - values(1) <= tol) ++last;

    Eigen::VectorXd v;
    if (last == 1) {
      v = es.eigenvectors().col(1);
    } else {
      out.degenerate = true;
      const Eigen::MatrixXd q = es.eigenvectors().middleCols(1, last);
      for (int t = 0; t < m; ++t) {
        v = q * q.row(t).transpose();
        if (v.norm() > 1e-8) break;
      }
      v.normalize();
    }
    for (int a = 0; a < m; ++a)
      if (std::abs(v(a)) > 1e-12) {
        if (v(a) < 0) v = -v;
        break;
      }

    std::vector<int> local(static_cast<std::size_t>(m));
    std::iota(local.begin(), local.end(), 0);
    // Quantize so that numerically equal entries tie and fall back to index.
    auto key = [&](int a) { return std::llround(v(a) * 1e10); };
    std::stable_sort(local.begin(), local.end(), [&](int a, int b) { return key(a) < key(b); });
    for (int a : local) out.order.push_back(members[static_cast<std::size_t>(a)]);
  }
  return out;
}

}  // namespace orbent
