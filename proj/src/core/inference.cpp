#include "boltzsyn/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "boltzsyn/error.hpp"

namespace boltzsyn {

double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) return -std::numeric_limits<double>::infinity();
  const double top = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(top)) return top;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - top);
  return top + std::log(sum);
}

namespace {

double dot_state(std::span<const double> w, std::uint32_t v) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i)
    if ((v >> i) & 1u) s += w[i];
  return s;
}

std::vector<double> exp_normalized(const std::vector<double>& log_weights) {
  const double top = *std::max_element(log_weights.begin(), log_weights.end());
  std::vector<double> p(log_weights.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += (p[i] = std::exp(log_weights[i] - top));
  for (double& x : p) x /= sum;
  return p;
}

}  // namespace

std::vector<double> rbm_log_unnormalized(const RbmModel& model) {
  model.validate();
  const auto size = state_count(model.n_visible);
  std::vector<double> out(size);
  for (std::uint32_t v = 0; v < size; ++v) {
    double acc = dot_state(model.visible_bias, v);
    for (int k = 0; k < model.n_hidden(); ++k)
      acc += softplus(dot_state(model.weights.row(static_cast<std::size_t>(k)), v) +
                      model.hidden_bias[static_cast<std::size_t>(k)]);
    out[v] = acc;
  }
  return out;
}

std::vector<double> rbm_log_marginal(const RbmModel& model) {
  auto log_u = rbm_log_unnormalized(model);
  const double log_z = log_sum_exp(log_u);
  for (double& x : log_u) x -= log_z;
  return log_u;
}

DiscreteDistribution rbm_marginal(const RbmModel& model) {
  return {model.n_visible, exp_normalized(rbm_log_unnormalized(model))};
}

DiscreteDistribution rbm_joint_bruteforce(const RbmModel& model) {
  model.validate();
  const int n = model.n_visible;
  const int m = model.n_hidden();
  require(n + m <= kMaxUnits, ErrorKind::Size,
          "joint table over " + std::to_string(n + m) + " units exceeds the cap");
  const auto nv = state_count(n);
  const auto nh = std::uint64_t{1} << m;
  std::vector<double> energy(nv * nh);
  for (std::uint64_t h = 0; h < nh; ++h) {
    for (std::uint32_t v = 0; v < nv; ++v) {
      double e = dot_state(model.visible_bias, v);
      for (int k = 0; k < m; ++k) {
        if (!((h >> k) & 1u)) continue;
        e += model.hidden_bias[static_cast<std::size_t>(k)];
        e += dot_state(model.weights.row(static_cast<std::size_t>(k)), v);
      }
      energy[v | (h << n)] = e;
    }
  }
  return {n + m, exp_normalized(energy)};
}

DiscreteDistribution joint_visible_marginal(const DiscreteDistribution& joint,
                                            int n_visible) {
  require(n_visible >= 1 && n_visible <= joint.n(), ErrorKind::Dimension,
          "visible width exceeds joint width");
  const auto nv = state_count(n_visible);
  std::vector<double> p(nv, 0.0);
  for (std::uint64_t i = 0; i < joint.size(); ++i)
    p[i & (nv - 1)] += joint.probs()[i];
  return {n_visible, std::move(p)};
}

double layer_activation(const SigmoidLayer& layer, const BitVector& h, int l) {
  require(h.n == layer.n_in(), ErrorKind::Dimension, "input width does not match layer");
  require(l >= 1 && l <= layer.n_out(), ErrorKind::Argument, "output unit out of range");
  const auto col = static_cast<std::size_t>(l - 1);
  double act = layer.offsets[col];
  for (int k = 0; k < layer.n_in(); ++k)
    if ((h.index >> k) & 1u) act += layer.weights(static_cast<std::size_t>(k), col);
  return act;
}

std::vector<double> layer_conditional(const SigmoidLayer& layer, const BitVector& h) {
  std::vector<double> out(static_cast<std::size_t>(layer.n_out()));
  for (int l = 1; l <= layer.n_out(); ++l)
    out[static_cast<std::size_t>(l - 1)] = logistic(layer_activation(layer, h, l));
  return out;
}

DiscreteDistribution push_forward(const SigmoidLayer& layer,
                                  const DiscreteDistribution& input) {
  require(input.n() == layer.n_in(), ErrorKind::Dimension,
          "input distribution width does not match layer");
  const int n_out = layer.n_out();
  const auto out_size = state_count(n_out);
  std::vector<double> out(out_size, 0.0);
  std::vector<double> fire(static_cast<std::size_t>(n_out));
  std::vector<double> rest(static_cast<std::size_t>(n_out));
  std::vector<double> cond(out_size);
  for (std::uint32_t h = 0; h < input.size(); ++h) {
    const double mass = input[h];
    if (mass == 0.0) continue;
    const BitVector hv(input.n(), h);
    for (int l = 1; l <= n_out; ++l) {
      const double act = layer_activation(layer, hv, l);
      // Both tails from the activation directly; 1 - p loses them.
      fire[static_cast<std::size_t>(l - 1)] = logistic(act);
      rest[static_cast<std::size_t>(l - 1)] = logistic(-act);
    }
    // Product of independent Bernoullis, built one unit at a time.
    cond[0] = mass;
    std::uint64_t filled = 1;
    for (int l = 0; l < n_out; ++l) {
      const double p1 = fire[static_cast<std::size_t>(l)];
      const double p0 = rest[static_cast<std::size_t>(l)];
      for (std::uint64_t s = 0; s < filled; ++s) {
        cond[s | filled] = cond[s] * p1;
        cond[s] *= p0;
      }
      filled <<= 1;
    }
    for (std::uint64_t s = 0; s < out_size; ++s) out[s] += cond[s];
  }
  return {n_out, std::move(out)};
}

DiscreteDistribution dbn_marginal(const DbnModel& model) {
  model.validate();
  DiscreteDistribution d = rbm_marginal(model.top);
  if (model.directed_layers.empty()) return d;
  for (const auto& layer : model.directed_layers) d = push_forward(layer, d);
  return normalize(d);
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::vector<BitVector> ancestral_sample(const DbnModel& model, std::uint64_t count,
                                        std::uint64_t seed) {
  require(count >= 1, ErrorKind::Argument, "sample count must be at least 1");
  model.validate();
  const auto top = rbm_marginal(model.top);
  std::vector<double> cdf(top.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < cdf.size(); ++i) cdf[i] = (acc += top.probs()[i]);

  std::uint64_t state = seed;
  std::mt19937_64 rng(splitmix64(state));

  const int n = model.width();
  std::vector<BitVector> out;
  out.reserve(count);
  for (std::uint64_t draw = 0; draw < count; ++draw) {
    const double u = unit_uniform(rng) * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    BitVector h(n, static_cast<std::uint32_t>(it - cdf.begin()));
    for (const auto& layer : model.directed_layers) {
      std::uint32_t next = 0;
      for (int l = 1; l <= layer.n_out(); ++l)
        if (unit_uniform(rng) < logistic(layer_activation(layer, h, l)))
          next |= 1u << (l - 1);
      h = BitVector(layer.n_out(), next);
    }
    out.push_back(h);
  }
  return out;
}

}  // namespace boltzsyn
