#include "boltzsyn/distribution.hpp"

#include <cmath>
#include <limits>

#include "boltzsyn/error.hpp"

namespace boltzsyn {

DiscreteDistribution::DiscreteDistribution(int n, std::vector<double> probs)
    : n_(n), probs_(std::move(probs)) {
  check_width(n);
  require(probs_.size() == state_count(n), ErrorKind::Dimension,
          "distribution over width " + std::to_string(n) + " needs " +
              std::to_string(state_count(n)) + " entries, got " +
              std::to_string(probs_.size()));
  for (double p : probs_)
    require(std::isfinite(p) && p >= 0.0, ErrorKind::Argument,
            "distribution entries must be finite and non-negative");
}

DiscreteDistribution DiscreteDistribution::uniform(int n) {
  check_width(n);
  const auto size = state_count(n);
  return {n, std::vector<double>(size, 1.0 / static_cast<double>(size))};
}

DiscreteDistribution DiscreteDistribution::point_mass(int n, std::uint32_t index) {
  check_width(n);
  require(index < state_count(n), ErrorKind::Argument, "point mass index out of range");
  std::vector<double> p(state_count(n), 0.0);
  p[index] = 1.0;
  return {n, std::move(p)};
}

double DiscreteDistribution::at(const BitVector& v) const {
  require(v.n == n_, ErrorKind::Dimension, "state width does not match distribution");
  return probs_[v.index];
}

double DiscreteDistribution::sum() const {
  double s = 0.0;
  for (double p : probs_) s += p;
  return s;
}

std::vector<BitVector> DiscreteDistribution::support() const {
  std::vector<BitVector> out;
  for (std::uint32_t i = 0; i < probs_.size(); ++i)
    if (probs_[i] > kSupportEpsilon) out.emplace_back(n_, i);
  return out;
}

DiscreteDistribution normalize(const DiscreteDistribution& d) {
  const double total = d.sum();
  require(total > 0.0, ErrorKind::Degenerate,
          "cannot normalize an all-zero distribution");
  std::vector<double> p(d.probs().begin(), d.probs().end());
  for (double& x : p) x /= total;
  return {d.n(), std::move(p)};
}

namespace {

void check_same_width(const DiscreteDistribution& p, const DiscreteDistribution& q) {
  require(p.n() == q.n(), ErrorKind::Dimension,
          "distributions over widths " + std::to_string(p.n()) + " and " +
              std::to_string(q.n()));
}

}  // namespace

double kl_divergence(const DiscreteDistribution& p, const DiscreteDistribution& q) {
  check_same_width(p, q);
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi = p.probs()[i];
    if (pi <= 0.0) continue;
    const double qi = q.probs()[i];
    if (qi <= 0.0) return std::numeric_limits<double>::infinity();
    kl += pi * (std::log(pi) - std::log(qi));
  }
  // Rounding can leave a tiny negative sum when p and q nearly agree.
  return kl < 0.0 ? 0.0 : kl;
}

double total_variation(const DiscreteDistribution& p, const DiscreteDistribution& q) {
  check_same_width(p, q);
  double l1 = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    l1 += std::abs(p.probs()[i] - q.probs()[i]);
  return 0.5 * l1;
}

}  // namespace boltzsyn
