#pragma once

/**
 * @file basis.hpp
 * @brief Alpha/beta string factorization of the determinant space.
 *
 * A determinant is the pair (alpha string, beta string). Its canonical
 * spin-orbital ordering places alpha orbitals 0..n_orb-1 first and beta
 * orbitals at n_orb..2n_orb-1, and the determinant is the product of
 * creation operators in that order acting on the vacuum. Every fermionic
 * sign in the library is counted in this ordering.
 */

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "orbent/error.hpp"

namespace orbent {

using Bits = std::uint64_t;

inline constexpr int kMaxOrbitals = 32;

inline int popcount(Bits b) noexcept { return std::popcount(b); }

inline Bits bit(int p) noexcept { return Bits{1} << p; }

inline Bits bits_below(int p) noexcept { return bit(p) - 1; }

/// Sign picked up by a creation or annihilation operator at position p.
inline int operator_sign(Bits occupation, int p) noexcept {
  return (popcount(occupation & bits_below(p)) & 1) ? -1 : 1;
}

inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
  return r;
}

/// All n_orb-bit masks with @p n_set bits, ascending.
inline std::vector<Bits> enumerate_strings(int n_orb, int n_set) {
  std::vector<Bits> out;
  if (n_set < 0 || n_set > n_orb) return out;
  out.reserve(binomial(n_orb, n_set));
  if (n_set == 0) {
    out.push_back(0);
    return out;
  }
  // Gosper's hack visits combinations in ascending numeric order.
  Bits s = bits_below(n_set);
  const Bits limit = bit(n_orb);
  while (s < limit) {
    out.push_back(s);
    const Bits c = s & (~s + 1);
    const Bits r = s + c;
    s = (((r ^ s) >> 2) / c) | r;
  }
  return out;
}

/// One entry of a single-excitation list: a†_p a_q |source> = sign |target>.
struct SingleExcitation {
  std::uint32_t target;
  std::uint8_t p;
  std::uint8_t q;
  std::int8_t sign;
};

/// For every string, all nonzero a†_p a_q images (including p == q).
inline std::vector<std::vector<SingleExcitation>> build_single_excitations(
    std::span<const Bits> strings, int n_orb) {
  std::vector<std::vector<SingleExcitation>> table(strings.size());
  for (std::size_t src = 0; src < strings.size(); ++src) {
    const Bits s = strings[src];
    for (int q = 0; q < n_orb; ++q) {
      if (!(s & bit(q))) continue;
      const int sign_q = operator_sign(s, q);
      const Bits removed = s ^ bit(q);
      for (int p = 0; p < n_orb; ++p) {
        if (removed & bit(p)) continue;
        const Bits t = removed | bit(p);
        const int sign = sign_q * operator_sign(removed, p);
        const auto it = std::lower_bound(strings.begin(), strings.end(), t);
        table[src].push_back({static_cast<std::uint32_t>(it - strings.begin()),
                              static_cast<std::uint8_t>(p),
                              static_cast<std::uint8_t>(q),
                              static_cast<std::int8_t>(sign)});
      }
    }
  }
  return table;
}

struct Determinant {
  Bits alpha;
  Bits beta;
};

class DeterminantBasis {
 public:
  DeterminantBasis(int n_orb, int n_alpha, int n_beta,
                   std::optional<std::vector<int>> orbsym = std::nullopt,
                   std::optional<int> isym = std::nullopt)
      : n_orb_(n_orb), n_alpha_(n_alpha), n_beta_(n_beta) {
    if (n_orb < 0 || n_orb > kMaxOrbitals)
      throw Error("orbital count must lie in 0.." + std::to_string(kMaxOrbitals));
    if (n_alpha < 0 || n_beta < 0)
      throw Error("electron counts must be non-negative");
    if (n_alpha > n_orb || n_beta > n_orb)
      throw Error("electron count exceeds orbital count");
    alpha_ = enumerate_strings(n_orb, n_alpha);
    beta_ = enumerate_strings(n_orb, n_beta);

    std::vector<int> alpha_irrep(alpha_.size(), 0);
    std::vector<int> beta_irrep(beta_.size(), 0);
    const bool filter = orbsym.has_value() && isym.has_value();
    if (filter) {
      if (static_cast<int>(orbsym->size()) != n_orb)
        throw Error("orbital symmetry list length differs from orbital count");
      target_irrep_ = *isym - 1;
      auto irrep_of = [&](Bits s) {
        int g = 0;
        for (int p = 0; p < n_orb; ++p)
          if (s & bit(p)) g ^= (*orbsym)[static_cast<std::size_t>(p)] - 1;
        return g;
      };
      for (std::size_t i = 0; i < alpha_.size(); ++i) alpha_irrep[i] = irrep_of(alpha_[i]);
      for (std::size_t i = 0; i < beta_.size(); ++i) beta_irrep[i] = irrep_of(beta_[i]);
    }

    grid_.assign(alpha_.size() * beta_.size(), -1);
    for (std::size_t ia = 0; ia < alpha_.size(); ++ia) {
      for (std::size_t ib = 0; ib < beta_.size(); ++ib) {
        if (filter && (alpha_irrep[ia] ^ beta_irrep[ib]) != *target_irrep_) continue;
        grid_[ia * beta_.size() + ib] = static_cast<std::int64_t>(pairs_.size());
        pairs_.push_back({static_cast<std::uint32_t>(ia), static_cast<std::uint32_t>(ib)});
      }
    }
    alpha_singles_ = build_single_excitations(alpha_, n_orb);
    beta_singles_ = build_single_excitations(beta_, n_orb);
  }

  struct StringPair {
    std::uint32_t alpha;
    std::uint32_t beta;
  };

  int n_orb() const noexcept { return n_orb_; }
  int n_alpha() const noexcept { return n_alpha_; }
  int n_beta() const noexcept { return n_beta_; }
  int n_elec() const noexcept { return n_alpha_ + n_beta_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  std::optional<int> target_irrep() const noexcept { return target_irrep_; }

  const std::vector<Bits>& alpha_strings() const noexcept { return alpha_; }
  const std::vector<Bits>& beta_strings() const noexcept { return beta_; }
  const std::vector<StringPair>& pairs() const noexcept { return pairs_; }

  const std::vector<std::vector<SingleExcitation>>& alpha_singles() const noexcept {
    return alpha_singles_;
  }
  const std::vector<std::vector<SingleExcitation>>& beta_singles() const noexcept {
    return beta_singles_;
  }

  Determinant determinant(std::size_t k) const {
    const auto& pr = pairs_.at(k);
    return {alpha_[pr.alpha], beta_[pr.beta]};
  }

  /// Occupation over the canonical spin-orbital ordering.
  Bits spin_orbital_mask(std::size_t k) const {
    const auto d = determinant(k);
    return d.alpha | (d.beta << n_orb_);
  }

  /// Basis position of the (alpha index, beta index) pair, or -1 when the
  /// pair is excluded by the symmetry filter.
  std::int64_t index_of(std::size_t ia, std::size_t ib) const noexcept {
    return grid_[ia * beta_.size() + ib];
  }

  /// Basis position of a determinant given by its strings, or -1.
  std::int64_t find(Bits alpha, Bits beta) const {
    const auto ia = std::lower_bound(alpha_.begin(), alpha_.end(), alpha);
    const auto ib = std::lower_bound(beta_.begin(), beta_.end(), beta);
    if (ia == alpha_.end() || *ia != alpha || ib == beta_.end() || *ib != beta) return -1;
    return index_of(static_cast<std::size_t>(ia - alpha_.begin()),
                    static_cast<std::size_t>(ib - beta_.begin()));
  }

  std::int64_t find_spin_orbital_mask(Bits mask) const {
    const Bits low = bits_below(n_orb_);
    return find(mask & low, (mask >> n_orb_) & low);
  }

 private:
  int n_orb_;
  int n_alpha_;
  int n_beta_;
  std::optional<int> target_irrep_;
  std::vector<Bits> alpha_;
  std::vector<Bits> beta_;
  std::vector<StringPair> pairs_;
  std::vector<std::int64_t> grid_;
  std::vector<std::vector<SingleExcitation>> alpha_singles_;
  std::vector<std::vector<SingleExcitation>> beta_singles_;
};

inline DeterminantBasis enumerate_basis(int n_orb, int n_alpha, int n_beta,
                                        std::optional<std::vector<int>> orbsym = std::nullopt,
                                        std::optional<int> isym = std::nullopt) {
  return DeterminantBasis(n_orb, n_alpha, n_beta, std::move(orbsym), isym);
}

/// Irrep of a spin-orbital occupation under XOR of (label - 1).
inline int determinant_irrep(Determinant d, std::span<const int> orbsym) {
  int g = 0;
  for (std::size_t p = 0; p < orbsym.size(); ++p) {
    if (d.alpha & bit(static_cast<int>(p))) g ^= orbsym[p] - 1;
    if (d.beta & bit(static_cast<int>(p))) g ^= orbsym[p] - 1;
  }
  return g;
}

}  // namespace orbent
