#pragma once

/**
 * @file configurations.hpp
 * @brief Dominant determinants of a CI vector.
 */

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "orbent/civector.hpp"
#include "orbent/error.hpp"

namespace orbent {

struct ConfigurationEntry {
  std::string occupation;  // one character per orbital: '0', 'a', 'b' or '2'
  double coefficient;
  double weight;  // coefficient²
  std::size_t index;  // position in the basis
};

/// Occupation string of a determinant, orbital 0 first.
inline std::string occupation_string(const Determinant& d, int n_orb) {
  std::string out(static_cast<std::size_t>(n_orb), '0');
  for (int p = 0; p < n_orb; ++p) {
    const bool up = d.alpha & bit(p), down = d.beta & bit(p);
    out[static_cast<std::size_t>(p)] = up && down ? '2' : up ? 'a' : down ? 'b' : '0';
  }
  return out;
}

/**
 * @brief Determinants with weight ≥ @p cutoff, by descending weight.
 *
 * Equal weights keep basis order, so the listing is deterministic.
 * @throws Error unless 0 < cutoff ≤ 1.
 */
inline std::vector<ConfigurationEntry> leading_configurations(const CIVector& psi, double cutoff) {
  if (!(cutoff > 0.0 && cutoff <= 1.0))
    throw Error("configuration weight cutoff must lie in (0, 1]");
  const auto& basis = psi.basis();
  std::vector<std::size_t> picked;
  for (std::size_t k = 0; k < psi.size(); ++k)
    if (psi[k] * psi[k] >= cutoff) picked.push_back(k);
  std::stable_sort(picked.begin(), picked.end(), [&](std::size_t a, std::size_t b) {
    return psi[a] * psi[a] > psi[b] * psi[b];
  });
  std::vector<ConfigurationEntry> out;
  out.reserve(picked.size());
  for (std::size_t k : picked)
    out.push_back({occupation_string(basis.determinant(k), basis.n_orb()), psi[k], psi[k] * psi[k], k});
  return out;
}

}  // namespace orbent
