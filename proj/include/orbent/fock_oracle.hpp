#pragma once

/**
 * @file fock_oracle.hpp
 * @brief Dense Fock-space reference for orbital reduced density matrices.
 *
 * The CI vector is embedded into the full 4^n Fock space in a site-major
 * mode ordering (subset sites first, then the remaining sites ascending;
 * each site contributes its ↑ then ↓ mode). The sign of each determinant is
 * the parity of the permutation taking its creation operators from the
 * canonical alpha-then-beta ordering to the site-major one, obtained by
 * explicit inversion counting. The reduced matrix is M·Mᵀ of the reshaped
 * amplitude array. Meant for validation at small orbital counts.
 */

#include <Eigen/Dense>
#include <algorithm>
#include <vector>

#include "orbent/civector.hpp"
#include "orbent/error.hpp"

namespace orbent {

struct OracleOptions {
  std::size_t max_fock_dimension = std::size_t{1} << 20;
};

inline Eigen::MatrixXd oracle_rdm(const CIVector& psi, const std::vector<int>& subset,
                                  const OracleOptions& opt = {}) {
  const auto& basis = psi.basis();
  const int n = basis.n_orb();
  const int m = static_cast<int>(subset.size());
  if (m < 1 || m > 3) throw Error("oracle_rdm: subset size must be 1..3");
  for (int s : subset)
    if (s < 0 || s >= n) throw IndexError("oracle_rdm: orbital outside active space");
  {
    auto sorted = subset;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw Error("oracle_rdm: repeated orbital in subset");
  }
  const std::size_t fock_dim = std::size_t{1} << (2 * n);
  if (fock_dim > opt.max_fock_dimension)
    throw Error("oracle_rdm: Fock dimension 4^" + std::to_string(n) + " exceeds cap");

  std::vector<int> site_order(subset);
  for (int s = 0; s < n; ++s)
    if (std::find(subset.begin(), subset.end(), s) == subset.end()) site_order.push_back(s);

  // Site-major position of each canonical mode (alpha p -> p, beta p -> n + p).
  std::vector<int> new_position(static_cast<std::size_t>(2 * n));
  for (int t = 0; t < n; ++t) {
    new_position[static_cast<std::size_t>(site_order[static_cast<std::size_t>(t)])] = 2 * t;
    new_position[static_cast<std::size_t>(n + site_order[static_cast<std::size_t>(t)])] = 2 * t + 1;
  }

  const std::size_t env_dim = std::size_t{1} << (2 * (n - m));
  const std::size_t sub_dim = std::size_t{1} << (2 * m);
  Eigen::MatrixXd amplitudes = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(sub_dim),
                                                     static_cast<Eigen::Index>(env_dim));
  for (std::size_t k = 0; k < psi.size(); ++k) {
    const Bits mask = basis.spin_orbital_mask(k);
    std::vector<int> sequence;
    for (int mode = 0; mode < 2 * n; ++mode)
      if (mask & bit(mode)) sequence.push_back(new_position[static_cast<std::size_t>(mode)]);
    int inversions = 0;
    for (std::size_t a = 0; a < sequence.size(); ++a)
      for (std::size_t b = a + 1; b < sequence.size(); ++b)
        if (sequence[a] > sequence[b]) ++inversions;

    std::size_t index = 0;
    for (int t = 0; t < n; ++t) {
      const int site = site_order[static_cast<std::size_t>(t)];
      const std::size_t digit = ((mask >> site) & 1) + 2 * ((mask >> (n + site)) & 1);
      index = index * 4 + digit;
    }
    amplitudes(static_cast<Eigen::Index>(index / env_dim), static_cast<Eigen::Index>(index % env_dim)) =
        (inversions % 2 ? -1.0 : 1.0) * psi[k];
  }
  return amplitudes * amplitudes.transpose();
}

}  // namespace orbent
