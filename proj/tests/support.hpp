#pragma once

// Shared generators and brute-force references for the test suites. Nothing
// here calls into the Hamiltonian or RDM code under test.

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "orbent/basis.hpp"
#include "orbent/civector.hpp"
#include "orbent/integrals.hpp"

namespace orbent::test_support {

/// Molecule-like random integrals: increasing orbital energies, dominant
/// Coulomb terms, small random couplings. With @p orbsym given, integrals
/// that are not totally symmetric under the labels are left at zero.
inline IntegralSet random_integrals(int n, int n_elec, int ms2, std::mt19937& rng,
                                    std::optional<std::vector<int>> orbsym = std::nullopt,
                                    double coupling = 0.1) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  IntegralSet ints(n, n_elec, ms2, orbsym.value_or(std::vector<int>{}), 1);
  auto irrep = [&](int p) { return orbsym ? (*orbsym)[static_cast<std::size_t>(p - 1)] - 1 : 0; };
  ints.set_core_energy(0.5 + 0.1 * u(rng));
  for (int p = 1; p <= n; ++p)
    for (int q = p; q <= n; ++q) {
      double v = p == q ? -2.0 + 0.45 * p + 0.1 * u(rng) : coupling * u(rng);
      if (irrep(p) != irrep(q)) v = 0.0;
      if (v != 0.0) ints.set_h(p, q, v);
    }
  for (int p = 1; p <= n; ++p)
    for (int q = 1; q <= n; ++q)
      for (int r = 1; r <= n; ++r)
        for (int s = 1; s <= n; ++s) {
          if (canonical_eri_key(p, q, r, s) != EriKey{p, q, r, s}) continue;
          double v;
          if (p == q && r == s)
            v = (p == r ? 0.65 : 0.45) + 0.05 * u(rng);
          else if (p == r && q == s)
            v = 0.1 + 0.03 * u(rng);
          else
            v = 0.5 * coupling * u(rng);
          if ((irrep(p) ^ irrep(q) ^ irrep(r) ^ irrep(s)) != 0) v = 0.0;
          if (v != 0.0) ints.set_eri(p, q, r, s, v);
        }
  return ints;
}

inline Eigen::VectorXd random_vector(std::size_t dim, std::mt19937& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
  for (auto& x : v) x = g(rng);
  return v;
}

inline CIVector random_state(const BasisPtr& basis, std::mt19937& rng) {
  return CIVector(basis, random_vector(basis->size(), rng));
}

inline BasisPtr make_basis(int n, int na, int nb) {
  return std::make_shared<const DeterminantBasis>(n, na, nb);
}

// Apply a product of fermion operators (rightmost first) to an occupation
// number vector; returns false when the result vanishes.
struct FockOp {
  int mode;
  bool create;
};

inline bool apply_ops(const std::vector<FockOp>& ops, std::vector<int>& occ, int& sign) {
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    const auto m = static_cast<std::size_t>(it->mode);
    if (it->create == (occ[m] == 1)) return false;
    int before = 0;
    for (std::size_t k = 0; k < m; ++k) before += occ[k];
    if (before % 2) sign = -sign;
    occ[m] = it->create ? 1 : 0;
  }
  return true;
}

/// Dense H from the second-quantized operator sum applied mode by mode to
/// occupation vectors (canonical ordering alpha 0..n-1, beta n..2n-1).
inline Eigen::MatrixXd operator_algebra_hamiltonian(const IntegralSet& ints,
                                                    const DeterminantBasis& basis) {
  const int n = ints.n_orb();
  const int modes = 2 * n;
  const auto dim = static_cast<Eigen::Index>(basis.size());
  std::map<std::vector<int>, Eigen::Index> index;
  std::vector<std::vector<int>> occs;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    std::vector<int> occ(static_cast<std::size_t>(modes));
    const auto mask = basis.spin_orbital_mask(k);
    for (int m = 0; m < modes; ++m) occ[static_cast<std::size_t>(m)] = (mask >> m) & 1;
    index[occ] = static_cast<Eigen::Index>(k);
    occs.push_back(occ);
  }
  auto spatial = [&](int m) { return m % n + 1; };
  auto spin = [&](int m) { return m / n; };

  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index ket = 0; ket < dim; ++ket) {
    H(ket, ket) += ints.core_energy();
    auto accumulate = [&](const std::vector<FockOp>& ops, double coeff) {
      if (coeff == 0.0) return;
      auto occ = occs[static_cast<std::size_t>(ket)];
      int sign = 1;
      if (!apply_ops(ops, occ, sign)) return;
      auto it = index.find(occ);
      if (it != index.end()) H(it->second, ket) += sign * coeff;
    };
    for (int P = 0; P < modes; ++P)
      for (int Q = 0; Q < modes; ++Q)
        if (spin(P) == spin(Q))
          accumulate({{P, true}, {Q, false}}, ints.h(spatial(P), spatial(Q)));
    for (int P = 0; P < modes; ++P)
      for (int Q = 0; Q < modes; ++Q)
        for (int R = 0; R < modes; ++R)
          for (int S = 0; S < modes; ++S) {
            if (spin(P) != spin(R) || spin(Q) != spin(S)) continue;
            // <PQ|RS> = (pr|qs); operator a†P a†Q aS aR
            accumulate({{P, true}, {Q, true}, {S, false}, {R, false}},
                       0.5 * ints.eri(spatial(P), spatial(R), spatial(Q), spatial(S)));
          }
  }
  return H;
}

/// Relabel orbitals by perm (old orbital p becomes perm[p]) and carry the
/// coefficients over, including the reordering sign of each determinant.
inline CIVector permute_orbitals(const CIVector& psi, const std::vector<int>& perm) {
  const auto& basis = psi.basis();
  const int n = basis.n_orb();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(psi.size()));
  auto relabel = [&](Bits s, int& sign) {
    std::vector<int> seq;
    for (int p = 0; p < n; ++p)
      if (s & bit(p)) seq.push_back(perm[static_cast<std::size_t>(p)]);
    for (std::size_t a = 0; a < seq.size(); ++a)
      for (std::size_t b = a + 1; b < seq.size(); ++b)
        if (seq[a] > seq[b]) sign = -sign;
    Bits t = 0;
    for (int x : seq) t |= bit(x);
    return t;
  };
  for (std::size_t k = 0; k < psi.size(); ++k) {
    const auto d = basis.determinant(k);
    int sign = 1;
    const Bits a = relabel(d.alpha, sign);
    const Bits b = relabel(d.beta, sign);
    const auto j = basis.find(a, b);
    out(static_cast<Eigen::Index>(j)) = sign * psi[k];
  }
  return CIVector(psi.basis_ptr(), out);
}

}  // namespace orbent::test_support
