#pragma once

/**
 * @file entropy.hpp
 * @brief Orbital entropies, mutual information and correlation-regime
 *        classification. All entropies are in nats.
 */

#include <Eigen/Dense>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "orbent/civector.hpp"
#include "orbent/error.hpp"
#include "orbent/orbital_rdm.hpp"

namespace orbent {

/// Density-matrix eigenvalues below this are treated as exact zeros.
inline constexpr double kEigenvalueFloor = 1e-14;

/// -Σ ω ln ω with 0 ln 0 = 0. Weights are renormalized to unit sum.
inline double shannon_entropy(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (w < -1e-12) throw Error("shannon_entropy: negative weight " + std::to_string(w));
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-8)
    throw Error("shannon_entropy: weights sum to " + std::to_string(total));
  double s = 0.0;
  for (double w : weights) {
    const double p = w / total;
    if (p > 0.0) s -= p * std::log(p);
  }
  return s;
}

template <int Dim>
double rdm_entropy(const OrbitalRDM<Dim>& rdm) {
  auto values = rdm.eigenvalues();
  for (auto& v : values)
    if (v < kEigenvalueFloor) v = 0.0;
  return shannon_entropy(std::span<const double>(values.data(), Dim));
}

inline double one_orbital_entropy(const CIVector& psi, int i) {
  return rdm_entropy(one_orbital_rdm(psi, i));
}

inline double two_orbital_entropy(const CIVector& psi, int i, int j) {
  return i < j ? rdm_entropy(two_orbital_rdm(psi, i, j)) : rdm_entropy(two_orbital_rdm(psi, j, i));
}

struct OrbitalEntropies {
  Eigen::VectorXd s;   // one-orbital
  Eigen::MatrixXd s2;  // two-orbital, symmetric; diagonal holds s_i
  Eigen::MatrixXd mi;  // s_i + s_j - s_ij, zero diagonal
};

/// All one- and two-orbital entropies and the mutual information matrix.
inline OrbitalEntropies orbital_entropies(const CIVector& psi) {
  const int n = psi.basis().n_orb();
  OrbitalEntropies out{Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Zero(n, n),
                       Eigen::MatrixXd::Zero(n, n)};
  for (int i = 0; i < n; ++i) out.s(i) = one_orbital_entropy(psi, i);
  for (int i = 0; i < n; ++i) {
    out.s2(i, i) = out.s(i);
    for (int j = i + 1; j < n; ++j) {
      const double sij = rdm_entropy(two_orbital_rdm(psi, i, j));
      out.s2(i, j) = out.s2(j, i) = sij;
      out.mi(i, j) = out.mi(j, i) = out.s(i) + out.s(j) - sij;
    }
  }
  return out;
}

inline Eigen::MatrixXd mutual_information(const CIVector& psi) {
  return orbital_entropies(psi).mi;
}

enum class EntropyClass { small, moderate, large };
enum class MutualInfoClass { negligible, small, moderate, large };

inline std::string to_string(EntropyClass c) {
  switch (c) {
    case EntropyClass::large: return "large";
    case EntropyClass::moderate: return "moderate";
    default: return "small";
  }
}

inline std::string to_string(MutualInfoClass c) {
  switch (c) {
    case MutualInfoClass::large: return "large";
    case MutualInfoClass::moderate: return "moderate";
    case MutualInfoClass::small: return "small";
    default: return "negligible";
  }
}

/// Bin edges. Mutual information bins are closed at their lower edge;
/// one-orbital entropy is large only strictly above entropy_large and
/// moderate on the closed interval [entropy_moderate, entropy_large].
struct Thresholds {
  double mi_large = 1e-1;
  double mi_moderate = 1e-2;
  double mi_small = 1e-3;
  double entropy_large = 0.5;
  double entropy_moderate = 0.1;
};

inline EntropyClass classify_entropy(double s, const Thresholds& t = {}) {
  if (s > t.entropy_large) return EntropyClass::large;
  if (s >= t.entropy_moderate) return EntropyClass::moderate;
  return EntropyClass::small;
}

inline MutualInfoClass classify_mutual_information(double mi, const Thresholds& t = {}) {
  if (mi >= t.mi_large) return MutualInfoClass::large;
  if (mi >= t.mi_moderate) return MutualInfoClass::moderate;
  if (mi >= t.mi_small) return MutualInfoClass::small;
  return MutualInfoClass::negligible;
}

struct RegimeHint {
  int i;
  int j;
  std::string regime;  // "non-dynamic", "static" or "dynamic"
};

struct Classification {
  std::vector<EntropyClass> orbitals;
  // Upper triangle, row-major over i < j.
  std::vector<MutualInfoClass> pairs;
  std::vector<RegimeHint> hints;

  MutualInfoClass pair(int i, int j, int n) const {
    if (i > j) std::swap(i, j);
    return pairs[static_cast<std::size_t>(i * n - i * (i + 1) / 2 + (j - i - 1))];
  }
};

/**
 * @brief Label orbitals and pairs and emit regime hints.
 *
 * A pair gets a hint when both orbitals and their mutual information share a
 * class: large/large → non-dynamic, moderate/moderate → static,
 * small/small → dynamic.
 */
inline Classification classify(const Eigen::VectorXd& s, const Eigen::MatrixXd& mi,
                               const Thresholds& t = {}) {
  const auto n = static_cast<int>(s.size());
  if (mi.rows() != n || mi.cols() != n) throw DimensionError("classify: shape mismatch");
  Classification out;
  for (int i = 0; i < n; ++i) out.orbitals.push_back(classify_entropy(s(i), t));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const auto c = classify_mutual_information(mi(i, j), t);
      out.pairs.push_back(c);
      const auto ci = out.orbitals[static_cast<std::size_t>(i)];
      const auto cj = out.orbitals[static_cast<std::size_t>(j)];
      if (ci != cj) continue;
      if (ci == EntropyClass::large && c == MutualInfoClass::large)
        out.hints.push_back({i, j, "non-dynamic"});
      else if (ci == EntropyClass::moderate && c == MutualInfoClass::moderate)
        out.hints.push_back({i, j, "static"});
      else if (ci == EntropyClass::small && c == MutualInfoClass::small)
        out.hints.push_back({i, j, "dynamic"});
    }
  return out;
}

}  // namespace orbent
