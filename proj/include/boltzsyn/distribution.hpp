#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "boltzsyn/bitvec.hpp"

namespace boltzsyn {

/// Entries at or below this value are outside the support.
inline constexpr double kSupportEpsilon = 1e-12;

/// Dense table of non-negative weights over {0,1}^n, indexed by
/// BitVector::index. Not necessarily normalized; see normalize().
class DiscreteDistribution {
 public:
  DiscreteDistribution() = default;
  DiscreteDistribution(int n, std::vector<double> probs);

  static DiscreteDistribution uniform(int n);
  static DiscreteDistribution point_mass(int n, std::uint32_t index);

  int n() const noexcept { return n_; }
  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::uint32_t index) const { return probs_[index]; }
  double at(const BitVector& v) const;
  std::span<const double> probs() const noexcept { return probs_; }

  double sum() const;
  std::vector<BitVector> support() const;

  friend bool operator==(const DiscreteDistribution&,
                         const DiscreteDistribution&) = default;

 private:
  int n_ = 0;
  std::vector<double> probs_;
};

DiscreteDistribution normalize(const DiscreteDistribution& d);

/// Sum of p log(p/q) with 0 log 0 = 0. Returns +infinity when q vanishes
/// somewhere p does not.
double kl_divergence(const DiscreteDistribution& p,
                     const DiscreteDistribution& q);

double total_variation(const DiscreteDistribution& p,
                       const DiscreteDistribution& q);

}  // namespace boltzsyn
