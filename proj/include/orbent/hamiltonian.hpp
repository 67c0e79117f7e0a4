#pragma once

/**
 * @file hamiltonian.hpp
 * @brief Second-quantized active-space Hamiltonian in a determinant basis.
 *
 * Two independent evaluation routes are provided:
 *  - element(): Slater–Condon rules on canonical spin-orbital masks, used for
 *    diagonals and for dense matrix construction;
 *  - sigma(): string-driven H·c built from single-excitation lists, with
 *    H = Σ k_pq E_pq + ½ Σ (pq|rs) E_pq E_rs and k_pq = h_pq − ½ Σ_r (pr|rq).
 */

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <vector>

#include "orbent/basis.hpp"
#include "orbent/civector.hpp"
#include "orbent/integrals.hpp"

namespace orbent {

class Hamiltonian {
 public:
  Hamiltonian(const IntegralSet& ints, BasisPtr basis)
      : basis_(std::move(basis)),
        n_(ints.n_orb()),
        core_(ints.core_energy()),
        orbsym_(ints.orbsym()),
        symmetric_(ints.respects_symmetry()) {
    if (!basis_) throw Error("Hamiltonian requires a basis");
    if (basis_->n_orb() != n_)
      throw DimensionError("basis and integrals disagree on orbital count");
    h_.assign(static_cast<std::size_t>(n_ * n_), 0.0);
    eri_.assign(static_cast<std::size_t>(n_) * n_ * n_ * n_, 0.0);
    for (int p = 0; p < n_; ++p)
      for (int q = 0; q < n_; ++q) h_[idx2(p, q)] = ints.h(p + 1, q + 1);
    for (const auto& [key, value] : ints.two_body()) {
      const int p = key[0] - 1, q = key[1] - 1, r = key[2] - 1, s = key[3] - 1;
      for (auto [a, b, c, d] : {std::array{p, q, r, s}, {q, p, r, s}, {p, q, s, r},
                                {q, p, s, r}, {r, s, p, q}, {s, r, p, q},
                                {r, s, q, p}, {s, r, q, p}})
        eri_[idx4(a, b, c, d)] = value;
    }
    k_.assign(h_.size(), 0.0);
    for (int p = 0; p < n_; ++p)
      for (int q = 0; q < n_; ++q) {
        double acc = h_[idx2(p, q)];
        for (int r = 0; r < n_; ++r) acc -= 0.5 * eri_[idx4(p, r, r, q)];
        k_[idx2(p, q)] = acc;
      }
    alpha_op_ = same_spin_operator(basis_->alpha_strings().size(), basis_->alpha_singles());
    beta_op_ = same_spin_operator(basis_->beta_strings().size(), basis_->beta_singles());
  }

  const DeterminantBasis& basis() const noexcept { return *basis_; }
  const BasisPtr& basis_ptr() const noexcept { return basis_; }
  std::size_t dimension() const noexcept { return basis_->size(); }
  double core_energy() const noexcept { return core_; }
  const std::vector<int>& orbsym() const noexcept { return orbsym_; }

  /// Whether every integral is totally symmetric under the orbital labels.
  bool respects_symmetry() const noexcept { return symmetric_; }

  /// Chemists' (pq|rs), 0-based.
  double eri(int p, int q, int r, int s) const noexcept { return eri_[idx4(p, q, r, s)]; }
  double h(int p, int q) const noexcept { return h_[idx2(p, q)]; }

  /// <bra|H|ket> for canonical spin-orbital occupation masks.
  double element(Bits bra, Bits ket) const noexcept {
    const Bits low = bits_below(n_);
    if (popcount(bra & low) != popcount(ket & low) ||
        popcount(bra >> n_) != popcount(ket >> n_))
      return 0.0;
    const Bits diff = bra ^ ket;
    switch (popcount(diff)) {
      case 0:
        return diagonal_mask(ket);
      case 2: {
        const int from = std::countr_zero(diff & ket);
        const int to = std::countr_zero(diff & bra);
        const int sign = operator_sign(ket, from) * operator_sign(ket ^ bit(from), to);
        double value = h(spatial(to), spatial(from));
        for (Bits rest = ket; rest; rest &= rest - 1) {
          const int occ = std::countr_zero(rest);
          value += antisymmetrized(to, occ, from, occ);
        }
        return sign * value;
      }
      case 4: {
        Bits removed = diff & ket;
        Bits added = diff & bra;
        const int p = std::countr_zero(removed);
        const int q = std::countr_zero(removed & (removed - 1));
        const int a = std::countr_zero(added);
        const int b = std::countr_zero(added & (added - 1));
        Bits state = ket;
        int sign = operator_sign(state, p);
        state ^= bit(p);
        sign *= operator_sign(state, q);
        state ^= bit(q);
        sign *= operator_sign(state, b);
        state ^= bit(b);
        sign *= operator_sign(state, a);
        return sign * antisymmetrized(a, b, p, q);
      }
      default:
        return 0.0;
    }
  }

  double diagonal_element(Determinant d) const noexcept {
    return diagonal_mask(d.alpha | (d.beta << n_));
  }

  Eigen::VectorXd diagonal() const {
    Eigen::VectorXd out(static_cast<Eigen::Index>(dimension()));
    for (std::size_t k = 0; k < dimension(); ++k)
      out(static_cast<Eigen::Index>(k)) = diagonal_mask(basis_->spin_orbital_mask(k));
    return out;
  }

  /// H·c, including the core energy.
  Eigen::VectorXd sigma(const Eigen::VectorXd& c) const {
    if (static_cast<std::size_t>(c.size()) != dimension())
      throw DimensionError("sigma: vector length " + std::to_string(c.size()) +
                           " differs from basis dimension " + std::to_string(dimension()));
    const auto& pairs = basis_->pairs();
    const std::size_t na = basis_->alpha_strings().size();
    const std::size_t nb = basis_->beta_strings().size();
    using Grid = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Grid in = Grid::Zero(static_cast<Eigen::Index>(na), static_cast<Eigen::Index>(nb));
    for (std::size_t k = 0; k < pairs.size(); ++k)
      in(pairs[k].alpha, pairs[k].beta) = c(static_cast<Eigen::Index>(k));
    Grid out = core_ * in;

    for (std::size_t ia = 0; ia < na; ++ia)
      for (const auto& [ja, value] : alpha_op_[ia])
        out.row(ja) += value * in.row(static_cast<Eigen::Index>(ia));
    for (std::size_t ib = 0; ib < nb; ++ib)
      for (const auto& [jb, value] : beta_op_[ib])
        out.col(jb) += value * in.col(static_cast<Eigen::Index>(ib));

    const auto& a_singles = basis_->alpha_singles();
    const auto& b_singles = basis_->beta_singles();
    for (std::size_t ia = 0; ia < na; ++ia) {
      for (const auto& ea : a_singles[ia]) {
        const double* eri_pq = &eri_[idx4(ea.p, ea.q, 0, 0)];
        for (std::size_t ib = 0; ib < nb; ++ib) {
          const double cval = ea.sign * in(static_cast<Eigen::Index>(ia), static_cast<Eigen::Index>(ib));
          if (cval == 0.0) continue;
          for (const auto& eb : b_singles[ib])
            out(ea.target, eb.target) += eb.sign * eri_pq[eb.p * n_ + eb.q] * cval;
        }
      }
    }

    Eigen::VectorXd result(static_cast<Eigen::Index>(pairs.size()));
    for (std::size_t k = 0; k < pairs.size(); ++k)
      result(static_cast<Eigen::Index>(k)) = out(pairs[k].alpha, pairs[k].beta);
    return result;
  }

  Eigen::VectorXd sigma(const CIVector& psi) const {
    return sigma(psi.coefficients());
  }

 private:
  std::size_t idx2(int p, int q) const noexcept {
    return static_cast<std::size_t>(p) * n_ + q;
  }
  std::size_t idx4(int p, int q, int r, int s) const noexcept {
    return ((static_cast<std::size_t>(p) * n_ + q) * n_ + r) * n_ + s;
  }
  int spatial(int spin_orbital) const noexcept { return spin_orbital % n_; }
  int spin(int spin_orbital) const noexcept { return spin_orbital / n_; }

  // Physicists' <PQ||RS> over spin orbitals.
  double antisymmetrized(int P, int Q, int R, int S) const noexcept {
    double value = 0.0;
    if (spin(P) == spin(R) && spin(Q) == spin(S))
      value += eri(spatial(P), spatial(R), spatial(Q), spatial(S));
    if (spin(P) == spin(S) && spin(Q) == spin(R))
      value -= eri(spatial(P), spatial(S), spatial(Q), spatial(R));
    return value;
  }

  double diagonal_mask(Bits mask) const noexcept {
    double value = core_;
    for (Bits a = mask; a; a &= a - 1) {
      const int P = std::countr_zero(a);
      value += h(spatial(P), spatial(P));
      for (Bits b = mask; b; b &= b - 1) {
        const int Q = std::countr_zero(b);
        value += 0.5 * antisymmetrized(P, Q, P, Q);
      }
    }
    return value;
  }

  // Sparse rows of Σ k_pq E_pq + ½ Σ (pq|rs) E_pq E_rs restricted to one spin.
  std::vector<std::vector<std::pair<std::uint32_t, double>>> same_spin_operator(
      std::size_t n_strings, const std::vector<std::vector<SingleExcitation>>& singles) const {
    std::vector<std::vector<std::pair<std::uint32_t, double>>> op(n_strings);
    std::vector<double> row(n_strings, 0.0);
    std::vector<char> touched(n_strings, 0);
    std::vector<std::uint32_t> touched_list;
    auto add = [&](std::uint32_t j, double v) {
      if (!touched[j]) {
        touched[j] = 1;
        touched_list.push_back(j);
      }
      row[j] += v;
    };
    for (std::size_t i = 0; i < n_strings; ++i) {
      for (const auto& first : singles[i]) {
        add(first.target, first.sign * k_[idx2(first.p, first.q)]);
        for (const auto& second : singles[first.target])
          add(second.target, 0.5 * first.sign * second.sign *
                                 eri(second.p, second.q, first.p, first.q));
      }
      std::sort(touched_list.begin(), touched_list.end());
      for (auto j : touched_list) {
        if (row[j] != 0.0) op[i].emplace_back(j, row[j]);
        row[j] = 0.0;
        touched[j] = 0;
      }
      touched_list.clear();
    }
    return op;
  }

  BasisPtr basis_;
  int n_;
  double core_;
  std::vector<int> orbsym_;
  bool symmetric_;
  std::vector<double> h_;
  std::vector<double> k_;
  std::vector<double> eri_;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> alpha_op_;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> beta_op_;
};

}  // namespace orbent
