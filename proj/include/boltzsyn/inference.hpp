#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "boltzsyn/bitvec.hpp"
#include "boltzsyn/distribution.hpp"
#include "boltzsyn/model.hpp"

namespace boltzsyn {

double logistic(double x);
/// log(1 + e^x) without overflow.
double softplus(double x);
/// log(sum exp(values)) in index order. Empty input gives -infinity.
double log_sum_exp(std::span<const double> values);

/// log z(v) = B.v + sum_k softplus(w_k.v + c_k), the analytic hidden sum.
std::vector<double> rbm_log_unnormalized(const RbmModel& model);

/// Normalized log p(v).
std::vector<double> rbm_log_marginal(const RbmModel& model);

DiscreteDistribution rbm_marginal(const RbmModel& model);

/// Joint table over (v,h) with index v | (h << n_visible), computed by
/// summing exp(h'Wv + B.v + C.h) over every pair.
DiscreteDistribution rbm_joint_bruteforce(const RbmModel& model);

/// Marginalizes h out of a joint table laid out as rbm_joint_bruteforce.
DiscreteDistribution joint_visible_marginal(const DiscreteDistribution& joint,
                                            int n_visible);

/// Entry l is P(v_l = 1 | h).
std::vector<double> layer_conditional(const SigmoidLayer& layer,
                                      const BitVector& h);

/// Pre-sigmoid activation of output unit l for input h.
double layer_activation(const SigmoidLayer& layer, const BitVector& h, int l);

/// Pushes a distribution over the layer input through P(v | h).
DiscreteDistribution push_forward(const SigmoidLayer& layer,
                                  const DiscreteDistribution& input);

DiscreteDistribution dbn_marginal(const DbnModel& model);

inline constexpr std::string_view kSamplerName = "mt19937_64+splitmix64/v1";

/// Draws `count` visible states. The top layer is drawn by inverse CDF over
/// the exact top marginal; each directed layer is then sampled unit-wise.
std::vector<BitVector> ancestral_sample(const DbnModel& model,
                                        std::uint64_t count,
                                        std::uint64_t seed);

}  // namespace boltzsyn
