#pragma once

#include <unordered_map>

#include "orbent/civector.hpp"

namespace orbent {

/// <Ψ|S²|Ψ> from S² = S_z² + S_z + S₋S₊, using <S₋S₊> = ‖S₊Ψ‖².
inline double s_squared(const CIVector& psi) {
  const auto& basis = psi.basis();
  const int n = basis.n_orb();
  const double sz = 0.5 * (basis.n_alpha() - basis.n_beta());

  // S₊ = Σ_p a†_{p↑} a_{p↓}; images live in the (n_alpha+1, n_beta-1) sector.
  std::unordered_map<Bits, double> raised;
  for (std::size_t k = 0; k < psi.size(); ++k) {
    const double c = psi[k];
    if (c == 0.0) continue;
    const Bits mask = basis.spin_orbital_mask(k);
    for (int p = 0; p < n; ++p) {
      const int down = n + p;
      if (!(mask & bit(down)) || (mask & bit(p))) continue;
      const Bits mid = mask ^ bit(down);
      const int sign = operator_sign(mask, down) * operator_sign(mid, p);
      raised[mid | bit(p)] += sign * c;
    }
  }
  double lowering = 0.0;
  for (const auto& [mask, amp] : raised) lowering += amp * amp;
  return sz * sz + sz + lowering;
}

}  // namespace orbent
