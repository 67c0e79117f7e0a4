#pragma once

/**
 * @file solver.hpp
 * @brief Lowest eigenpairs of the CI Hamiltonian: Davidson iteration and a
 *        dense LAPACK oracle.
 */

#include <lapacke.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <vector>

#include "orbent/civector.hpp"
#include "orbent/hamiltonian.hpp"

namespace orbent {

struct SpectrumResult {
  std::vector<double> eigenvalues;  // ascending, hartree
  std::vector<CIVector> vectors;
  std::vector<double> residual_norms;
  int iterations = 0;
  bool converged = false;

  /// Roots lying within @p window of the lowest one (the lowest included).
  int degeneracy(double window = 1e-6) const {
    if (eigenvalues.empty()) return 0;
    return static_cast<int>(std::count_if(eigenvalues.begin(), eigenvalues.end(),
                                          [&](double e) { return e - eigenvalues.front() <= window; }));
  }
};

struct DavidsonOptions {
  double tolerance = 1e-8;
  int max_iterations = 200;
  int max_subspace = 40;
  double level_shift = 1e-4;
};

namespace detail {

// Symmetric eigensolve of a small dense matrix, ascending.
inline void small_eigensystem(const Eigen::MatrixXd& a, Eigen::VectorXd& values,
                              Eigen::MatrixXd& vectors) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  values = es.eigenvalues();
  vectors = es.eigenvectors();
}

inline Eigen::VectorXd residual_of(const Hamiltonian& ham, const Eigen::VectorXd& x, double e) {
  return ham.sigma(x) - e * x;
}

}  // namespace detail

/**
 * @brief Davidson iteration for the lowest @p n_roots eigenpairs.
 *
 * Start vectors are unit vectors on the n_roots lowest diagonal elements
 * (ties broken by basis index). Corrections use the diagonal preconditioner
 * (D - θ)^{-1} with denominators clamped away from zero by the level shift.
 * When the subspace would exceed max_subspace it collapses onto the current
 * Ritz vectors. On hitting the iteration cap the best available pairs are
 * returned with converged = false.
 */
inline SpectrumResult solve_lowest(const Hamiltonian& ham, int n_roots,
                                   const DavidsonOptions& opt = {}) {
  const auto dim = static_cast<Eigen::Index>(ham.dimension());
  if (n_roots < 1) throw Error("n_roots must be at least 1");
  if (n_roots > dim)
    throw Error("n_roots " + std::to_string(n_roots) + " exceeds basis dimension " +
                std::to_string(dim));
  if (!(opt.tolerance > 0.0)) throw Error("Davidson tolerance must be positive");
  if (opt.max_iterations < 1) throw Error("Davidson iteration cap must be at least 1");

  const Eigen::VectorXd diag = ham.diagonal();
  if (dim == 1) {
    SpectrumResult single;
    single.eigenvalues = {diag(0)};
    single.vectors.emplace_back(ham.basis_ptr(), Eigen::VectorXd::Ones(1));
    single.residual_norms = {0.0};
    single.converged = true;
    return single;
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(dim));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return diag(a) < diag(b); });

  const Eigen::Index max_sub = std::max<Eigen::Index>(opt.max_subspace, 2 * n_roots);
  std::vector<Eigen::VectorXd> V, AV;
  for (int k = 0; k < n_roots; ++k) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
    e(order[static_cast<std::size_t>(k)]) = 1.0;
    AV.push_back(ham.sigma(e));
    V.push_back(std::move(e));
  }

  Eigen::MatrixXd G;  // projected Hamiltonian V^T A V
  auto rebuild_projection = [&] {
    const auto m = static_cast<Eigen::Index>(V.size());
    Eigen::MatrixXd next(m, m);
    const auto old = G.rows();
    next.topLeftCorner(old, old) = G;
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = std::max(old, i); j < m; ++j) {
        const double v = V[static_cast<std::size_t>(i)].dot(AV[static_cast<std::size_t>(j)]);
        next(i, j) = v;
        next(j, i) = v;
      }
    G = std::move(next);
  };
  rebuild_projection();

  SpectrumResult result;
  std::vector<Eigen::VectorXd> ritz(static_cast<std::size_t>(n_roots));
  std::vector<Eigen::VectorXd> ritz_av(static_cast<std::size_t>(n_roots));
  std::vector<double> theta(static_cast<std::size_t>(n_roots));
  std::vector<double> rnorm(static_cast<std::size_t>(n_roots));

  for (int iter = 1; iter <= opt.max_iterations; ++iter) {
    result.iterations = iter;
    Eigen::VectorXd values;
    Eigen::MatrixXd y;
    detail::small_eigensystem(G, values, y);

    std::vector<Eigen::VectorXd> residuals;
    bool all_converged = true;
    for (int k = 0; k < n_roots; ++k) {
      auto& x = ritz[static_cast<std::size_t>(k)];
      auto& ax = ritz_av[static_cast<std::size_t>(k)];
      x = Eigen::VectorXd::Zero(dim);
      ax = Eigen::VectorXd::Zero(dim);
      for (std::size_t i = 0; i < V.size(); ++i) {
        x += y(static_cast<Eigen::Index>(i), k) * V[i];
        ax += y(static_cast<Eigen::Index>(i), k) * AV[i];
      }
      theta[static_cast<std::size_t>(k)] = values(k);
      Eigen::VectorXd r = ax - values(k) * x;
      rnorm[static_cast<std::size_t>(k)] = r.norm();
      if (rnorm[static_cast<std::size_t>(k)] > opt.tolerance) {
        all_converged = false;
        residuals.push_back(std::move(r));
        residuals.back().array() /= [&] {
          Eigen::ArrayXd d = diag.array() - values(k);
          for (Eigen::Index i = 0; i < dim; ++i)
            if (std::abs(d(i)) < opt.level_shift) d(i) = d(i) < 0 ? -opt.level_shift : opt.level_shift;
          return d;
        }();
      }
    }
    if (all_converged) {
      result.converged = true;
      break;
    }
    if (iter == opt.max_iterations) break;

    if (static_cast<Eigen::Index>(V.size() + residuals.size()) > max_sub) {
      V.assign(ritz.begin(), ritz.end());
      AV.assign(ritz_av.begin(), ritz_av.end());
      // Re-orthonormalize the collapsed basis against round-off drift.
      for (std::size_t i = 0; i < V.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
          const double ov = V[j].dot(V[i]);
          V[i] -= ov * V[j];
          AV[i] -= ov * AV[j];
        }
        const double nrm = V[i].norm();
        V[i] /= nrm;
        AV[i] /= nrm;
      }
      G.resize(0, 0);
      rebuild_projection();
    }

    std::size_t added = 0;
    for (auto& t : residuals) {
      const double initial = t.norm();
      if (!(initial > 0.0)) continue;
      t /= initial;
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& v : V) t -= v.dot(t) * v;
      const double nrm = t.norm();
      if (nrm < 1e-10) continue;
      t /= nrm;
      AV.push_back(ham.sigma(t));
      V.push_back(std::move(t));
      ++added;
    }
    if (added == 0) break;  // subspace exhausted; nothing more to gain
    rebuild_projection();
  }

  for (int k = 0; k < n_roots; ++k) {
    result.eigenvalues.push_back(theta[static_cast<std::size_t>(k)]);
    result.vectors.emplace_back(ham.basis_ptr(), ritz[static_cast<std::size_t>(k)]);
    result.residual_norms.push_back(rnorm[static_cast<std::size_t>(k)]);
  }
  return result;
}

inline SpectrumResult solve_lowest(BasisPtr basis, const IntegralSet& ints, int n_roots,
                                   double tolerance = 1e-8) {
  DavidsonOptions opt;
  opt.tolerance = tolerance;
  return solve_lowest(Hamiltonian(ints, std::move(basis)), n_roots, opt);
}

struct DenseOptions {
  std::size_t max_dimension = 20000;
  /// Diagonalize irrep blocks separately when the integrals are totally
  /// symmetric under the orbital labels; the Hamiltonian is then exactly
  /// block diagonal and the merged spectrum equals the full one.
  bool use_symmetry_blocks = true;
};

/**
 * @brief Dense symmetric eigensolve of H built element by element with the
 *        Slater–Condon rules (LAPACK dsyevr).
 */
inline SpectrumResult dense_solve(const Hamiltonian& ham, int n_roots,
                                  const DenseOptions& opt = {}) {
  const std::size_t dim = ham.dimension();
  if (dim > opt.max_dimension)
    throw Error("dense_solve: dimension " + std::to_string(dim) + " exceeds cap " +
                std::to_string(opt.max_dimension));
  if (n_roots < 1) throw Error("n_roots must be at least 1");
  if (static_cast<std::size_t>(n_roots) > dim)
    throw Error("n_roots " + std::to_string(n_roots) + " exceeds basis dimension " +
                std::to_string(dim));

  const auto& basis = ham.basis();
  std::map<int, std::vector<std::size_t>> blocks;
  if (opt.use_symmetry_blocks && ham.respects_symmetry()) {
    for (std::size_t k = 0; k < dim; ++k)
      blocks[determinant_irrep(basis.determinant(k), ham.orbsym())].push_back(k);
  } else {
    auto& all = blocks[0];
    all.resize(dim);
    std::iota(all.begin(), all.end(), std::size_t{0});
  }

  struct Pair {
    double value;
    Eigen::VectorXd vector;
  };
  std::vector<Pair> found;
  for (const auto& [irrep, members] : blocks) {
    const auto m = static_cast<lapack_int>(members.size());
    const lapack_int want = std::min<lapack_int>(m, n_roots);
    std::vector<double> a(static_cast<std::size_t>(m) * m);
    std::vector<Bits> masks(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) masks[i] = basis.spin_orbital_mask(members[i]);
    for (lapack_int i = 0; i < m; ++i)
      for (lapack_int j = 0; j <= i; ++j) {
        const double v = ham.element(masks[static_cast<std::size_t>(i)], masks[static_cast<std::size_t>(j)]);
        a[static_cast<std::size_t>(i) * m + j] = v;
        a[static_cast<std::size_t>(j) * m + i] = v;
      }
    std::vector<double> w(static_cast<std::size_t>(m));
    std::vector<double> z(static_cast<std::size_t>(m) * want);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(want));
    lapack_int found_count = 0;
    const lapack_int info =
        LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', m, a.data(), m, 0.0, 0.0, 1, want, 0.0,
                       &found_count, w.data(), z.data(), m, support.data());
    if (info != 0) throw Error("dense_solve: LAPACK dsyevr failed with info " + std::to_string(info));
    for (lapack_int k = 0; k < found_count; ++k) {
      Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
      for (lapack_int i = 0; i < m; ++i)
        full(static_cast<Eigen::Index>(members[static_cast<std::size_t>(i)])) =
            z[static_cast<std::size_t>(k) * m + i];
      found.push_back({w[static_cast<std::size_t>(k)], std::move(full)});
    }
  }
  std::stable_sort(found.begin(), found.end(),
                   [](const Pair& a, const Pair& b) { return a.value < b.value; });

  SpectrumResult result;
  result.iterations = 1;
  for (int k = 0; k < n_roots; ++k) {
    auto& pr = found[static_cast<std::size_t>(k)];
    result.residual_norms.push_back(detail::residual_of(ham, pr.vector, pr.value).norm());
    result.eigenvalues.push_back(pr.value);
    result.vectors.emplace_back(ham.basis_ptr(), std::move(pr.vector));
  }
  result.converged = true;
  return result;
}

}  // namespace orbent
