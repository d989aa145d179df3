// Shared generators and oracles for the test binaries.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "boltzsyn/bitvec.hpp"
#include "boltzsyn/distribution.hpp"
#include "boltzsyn/model.hpp"

namespace testsupport {

using boltzsyn::BitVector;
using boltzsyn::DiscreteDistribution;

// Full-support target with exponential(1) weights.
inline DiscreteDistribution random_full_target(int n, std::mt19937_64& rng) {
  std::exponential_distribution<double> draw(1.0);
  std::vector<double> p(boltzsyn::state_count(n));
  for (auto& x : p) x = draw(rng) + 1e-3;
  return boltzsyn::normalize(DiscreteDistribution(n, std::move(p)));
}

inline std::vector<BitVector> random_support(int n, int size, std::mt19937_64& rng) {
  std::vector<std::uint32_t> all(boltzsyn::state_count(n));
  for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = i;
  std::shuffle(all.begin(), all.end(), rng);
  std::vector<BitVector> out;
  for (int i = 0; i < size; ++i) out.emplace_back(n, all[static_cast<std::size_t>(i)]);
  std::sort(out.begin(), out.end());
  return out;
}

inline DiscreteDistribution random_target_on(const std::vector<BitVector>& support,
                                             std::mt19937_64& rng) {
  std::uniform_real_distribution<double> draw(0.1, 1.0);
  std::vector<double> p(boltzsyn::state_count(support.front().n), 0.0);
  for (const auto& v : support) p[v.index] = draw(rng);
  return boltzsyn::normalize(DiscreteDistribution(support.front().n, std::move(p)));
}

inline boltzsyn::RbmModel random_rbm(int n, int m, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, scale);
  boltzsyn::Matrix w(static_cast<std::size_t>(m), static_cast<std::size_t>(n));
  for (std::size_t r = 0; r < w.rows(); ++r)
    for (std::size_t c = 0; c < w.cols(); ++c) w(r, c) = g(rng);
  std::vector<double> b(static_cast<std::size_t>(n)), c(static_cast<std::size_t>(m));
  for (auto& x : b) x = g(rng);
  for (auto& x : c) x = g(rng);
  return boltzsyn::RbmModel(n, std::move(w), std::move(b), std::move(c));
}

// Smallest number of hypercube edges whose endpoints contain `support`.
// Branches over the n edges at the lowest uncovered state.
inline int brute_force_cover_size(const std::vector<BitVector>& support) {
  const int n = support.front().n;
  std::vector<std::uint32_t> states;
  for (const auto& v : support) states.push_back(v.index);
  std::sort(states.begin(), states.end());
  int best = static_cast<int>(states.size());
  std::vector<bool> covered(states.size(), false);
  auto position = [&](std::uint32_t s) {
    auto it = std::lower_bound(states.begin(), states.end(), s);
    return (it != states.end() && *it == s) ? static_cast<int>(it - states.begin()) : -1;
  };
  std::function<void(int)> search = [&](int used) {
    if (used >= best) return;
    int first = -1;
    for (std::size_t i = 0; i < states.size(); ++i)
      if (!covered[i]) {
        first = static_cast<int>(i);
        break;
      }
    if (first < 0) {
      best = used;
      return;
    }
    covered[static_cast<std::size_t>(first)] = true;
    for (int j = 0; j < n; ++j) {
      const int other = position(states[static_cast<std::size_t>(first)] ^ (1u << j));
      const bool newly = other >= 0 && !covered[static_cast<std::size_t>(other)];
      if (newly) covered[static_cast<std::size_t>(other)] = true;
      search(used + 1);
      if (newly) covered[static_cast<std::size_t>(other)] = false;
    }
    covered[static_cast<std::size_t>(first)] = false;
  };
  search(0);
  return best;
}

// Binomial 5-sigma band check for empirical state frequencies.
inline bool within_binomial_bands(const std::vector<std::uint64_t>& counts,
                                  std::span<const double> probs, std::uint64_t draws,
                                  double sigmas = 5.0) {
  for (std::size_t s = 0; s < probs.size(); ++s) {
    const double mean = static_cast<double>(draws) * probs[s];
    const double sd = std::sqrt(static_cast<double>(draws) * probs[s] * (1.0 - probs[s]));
    if (std::abs(static_cast<double>(counts[s]) - mean) > sigmas * sd + 1e-9) return false;
  }
  return true;
}

}  // namespace testsupport
