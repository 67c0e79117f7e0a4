#pragma once

/**
 * @file orbital_rdm.hpp
 * @brief One- and two-orbital reduced density matrices by fermionic partial
 *        trace over the environment orbitals.
 *
 * Local Fock states of a spatial orbital are ordered empty, up, down, double
 * (indices 0..3); the doubly occupied state is a†_↑ a†_↓ |0>. For a pair
 * (i, j) with i < j the composite index is 4·state(i) + state(j), and the
 * reduced state is expressed in the mode ordering (i↑ i↓ j↑ j↓ | environment
 * in canonical order).
 */

#include <Eigen/Dense>
#include <array>
#include <unordered_map>

#include "orbent/civector.hpp"
#include "orbent/error.hpp"

namespace orbent {

enum class LocalState : int { empty = 0, up = 1, down = 2, doubly = 3 };

/// Electrons held by local state / composite index.
constexpr int local_particle_number(int state) noexcept {
  return (state & 1) + ((state >> 1) & 1);
}

/// Twice the local S_z of a single-orbital state.
constexpr int local_twice_sz(int state) noexcept { return (state & 1) - ((state >> 1) & 1); }

constexpr int pair_particle_number(int composite) noexcept {
  return local_particle_number(composite / 4) + local_particle_number(composite % 4);
}

constexpr int pair_twice_sz(int composite) noexcept {
  return local_twice_sz(composite / 4) + local_twice_sz(composite % 4);
}

/// Occupation label of a local state: '0', 'a', 'b' or '2'.
constexpr char local_state_label(int state) noexcept {
  constexpr char labels[] = {'0', 'a', 'b', '2'};
  return labels[state & 3];
}

template <int Dim>
struct OrbitalRDM {
  using Matrix = Eigen::Matrix<double, Dim, Dim>;
  using Vector = Eigen::Matrix<double, Dim, 1>;
  Matrix rho = Matrix::Zero();

  double trace() const { return rho.trace(); }

  /// Ascending eigenvalues of the (symmetric) density matrix.
  Vector eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }
};

using OneOrbitalRDM = OrbitalRDM<4>;
using TwoOrbitalRDM = OrbitalRDM<16>;

namespace detail {

// Reduced density matrix over the ordered orbital subset `sites`.
template <int M>
Eigen::Matrix<double, (1 << (2 * M)), (1 << (2 * M))> partial_trace(
    const CIVector& psi, const std::array<int, M>& sites) {
  constexpr int local_dim = 1 << (2 * M);
  using Local = std::array<double, local_dim>;
  const auto& basis = psi.basis();
  const int n = basis.n_orb();

  std::array<int, 2 * M> modes{};
  Bits subset = 0;
  for (int t = 0; t < M; ++t) {
    modes[2 * t] = sites[t];
    modes[2 * t + 1] = n + sites[t];
    subset |= bit(sites[t]) | bit(n + sites[t]);
  }

  std::unordered_map<Bits, Local> groups;
  groups.reserve(psi.size());
  for (std::size_t k = 0; k < psi.size(); ++k) {
    const double c = psi[k];
    if (c == 0.0) continue;
    const Bits mask = basis.spin_orbital_mask(k);
    int local = 0;
    int swaps = 0;
    Bits remaining = mask;
    for (int t = 0; t < M; ++t) {
      const int up = (mask >> modes[2 * t]) & 1;
      const int down = (mask >> modes[2 * t + 1]) & 1;
      local = local * 4 + up + 2 * down;
      for (int s = 0; s < 2; ++s) {
        const int x = modes[2 * t + s];
        if (!(mask & bit(x))) continue;
        swaps += popcount(remaining & bits_below(x));
        remaining ^= bit(x);
      }
    }
    auto [it, inserted] = groups.try_emplace(mask & ~subset);
    if (inserted) it->second.fill(0.0);
    it->second[static_cast<std::size_t>(local)] += (swaps & 1) ? -c : c;
  }

  Eigen::Matrix<double, local_dim, local_dim> rho =
      Eigen::Matrix<double, local_dim, local_dim>::Zero();
  for (const auto& [env, amp] : groups) {
    for (int a = 0; a < local_dim; ++a) {
      if (amp[static_cast<std::size_t>(a)] == 0.0) continue;
      for (int b = 0; b < local_dim; ++b)
        rho(a, b) += amp[static_cast<std::size_t>(a)] * amp[static_cast<std::size_t>(b)];
    }
  }
  return rho;
}

inline void check_orbital(const CIVector& psi, int i) {
  if (i < 0 || i >= psi.basis().n_orb())
    throw IndexError("orbital index " + std::to_string(i) + " outside 0.." +
                     std::to_string(psi.basis().n_orb() - 1));
}

}  // namespace detail

/// 4×4 density matrix of orbital @p i (0-based).
inline OneOrbitalRDM one_orbital_rdm(const CIVector& psi, int i) {
  detail::check_orbital(psi, i);
  return {detail::partial_trace<1>(psi, {i})};
}

/// 16×16 density matrix of the orbital pair (i, j), 0-based, i < j.
inline TwoOrbitalRDM two_orbital_rdm(const CIVector& psi, int i, int j) {
  detail::check_orbital(psi, i);
  detail::check_orbital(psi, j);
  if (i == j) throw IndexError("two_orbital_rdm requires distinct orbitals");
  if (i > j) throw IndexError("two_orbital_rdm requires i < j");
  return {detail::partial_trace<2>(psi, {i, j})};
}

/// Trace a pair RDM over its second (keep_first) or first orbital.
inline OneOrbitalRDM reduce_pair(const TwoOrbitalRDM& pair, bool keep_first) {
  OneOrbitalRDM out;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int e = 0; e < 4; ++e)
        out.rho(a, b) += keep_first ? pair.rho(4 * a + e, 4 * b + e)
                                    : pair.rho(4 * e + a, 4 * e + b);
  return out;
}

/// D_pq = <Ψ| Σ_σ a†_{pσ} a_{qσ} |Ψ>, 0-based orbitals.
inline Eigen::MatrixXd spin_summed_1rdm(const CIVector& psi) {
  const auto& basis = psi.basis();
  const int n = basis.n_orb();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  const auto& pairs = basis.pairs();
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const double ck = psi[k];
    if (ck == 0.0) continue;
    for (const auto& ex : basis.alpha_singles()[pairs[k].alpha]) {
      const auto j = basis.index_of(ex.target, pairs[k].beta);
      if (j >= 0) d(ex.p, ex.q) += ex.sign * psi[static_cast<std::size_t>(j)] * ck;
    }
    for (const auto& ex : basis.beta_singles()[pairs[k].beta]) {
      const auto j = basis.index_of(pairs[k].alpha, ex.target);
      if (j >= 0) d(ex.p, ex.q) += ex.sign * psi[static_cast<std::size_t>(j)] * ck;
    }
  }
  return d;
}

}  // namespace orbent
