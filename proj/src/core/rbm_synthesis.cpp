#include "boltzsyn/rbm_synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "boltzsyn/inference.hpp"
#include "json.hpp"

namespace boltzsyn {

OrientedPair OrientedPair::from(const BitVector& x, const BitVector& y) {
  OrientedPair p;
  p.unit = flipped_unit(x, y);
  p.upper = x.bit(p.unit) ? x : y;
  p.lower = x.bit(p.unit) ? y : x;
  return p;
}

namespace {

// a(lower - 1/2) on every unit except the pair's, zero on the pair's unit.
std::vector<double> selector(const OrientedPair& pair, double sharpness) {
  const int n = pair.lower.n;
  std::vector<double> s(static_cast<std::size_t>(n), 0.0);
  for (int i = 1; i <= n; ++i)
    if (i != pair.unit)
      s[static_cast<std::size_t>(i - 1)] = sharpness * (pair.lower.bit(i) - 0.5);
  return s;
}

void check_pair(const OrientedPair& pair) {
  require(hamming(pair.upper, pair.lower) == 1 && pair.upper.bit(pair.unit) == 1 &&
              pair.lower.bit(pair.unit) == 0,
          ErrorKind::Argument, "pair must be Hamming neighbours oriented on their split unit");
}

}  // namespace

PairUnitWeights make_pair_unit(const OrientedPair& pair, double sharpness,
                               double lambda1, double lambda2) {
  check_pair(pair);
  require(sharpness > 0.0 && std::isfinite(sharpness), ErrorKind::Argument,
          "sharpness must be positive and finite");
  require(std::isfinite(lambda1) && std::isfinite(lambda2), ErrorKind::Argument,
          "pair boosts must be finite");
  PairUnitWeights u;
  u.pair = pair;
  u.sharpness = sharpness;
  u.lambda1 = lambda1;
  u.lambda2 = lambda2;
  u.w = selector(pair, sharpness);
  double s_dot_lower = 0.0;
  for (int i = 1; i <= pair.lower.n; ++i)
    if (pair.lower.bit(i)) s_dot_lower += u.w[static_cast<std::size_t>(i - 1)];
  u.w[static_cast<std::size_t>(pair.unit - 1)] = lambda2 - lambda1;
  u.c = -s_dot_lower + lambda1;
  return u;
}

RbmModel init_rbm0(const OrientedPair& pair, double mass_ratio, double sharpness) {
  check_pair(pair);
  require(sharpness > 0.0 && std::isfinite(sharpness), ErrorKind::Argument,
          "sharpness must be positive and finite");
  require(mass_ratio > 0.0 && std::isfinite(mass_ratio), ErrorKind::Argument,
          "mass ratio must be positive and finite");
  RbmModel model(pair.lower.n);
  model.visible_bias = selector(pair, sharpness);
  model.visible_bias[static_cast<std::size_t>(pair.unit - 1)] = std::log(mass_ratio);
  return model;
}

RbmModel add_pair_unit(const RbmModel& model, const PairUnitWeights& unit) {
  require(unit.w.size() == static_cast<std::size_t>(model.n_visible), ErrorKind::Dimension,
          "pair unit width does not match the model");
  RbmModel out = model;
  out.weights.append_row(unit.w);
  out.hidden_bias.push_back(unit.c);
  out.validate();
  return out;
}

DiscreteDistribution floor_target(const DiscreteDistribution& target, const PairCover& cover) {
  require(target.n() == cover.n, ErrorKind::Dimension, "cover width does not match target");
  const auto base = normalize(target);
  std::vector<double> p(base.size(), 0.0);
  for (const auto& v : cover_states(cover)) p[v.index] = std::max(base[v.index], kMassFloor);
  return normalize(DiscreteDistribution(target.n(), std::move(p)));
}

namespace {

struct UnitState {
  OrientedPair pair;
  double sharpness = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  bool owns_lower = false;
  bool owns_upper = false;
};

double unit_activation(const PairUnitWeights& u, std::uint32_t v) {
  double act = u.c;
  for (std::size_t i = 0; i < u.w.size(); ++i)
    if ((v >> i) & 1u) act += u.w[i];
  return act;
}

void write_unit(RbmModel& model, std::size_t row, const PairUnitWeights& u) {
  auto r = model.weights.row(row);
  std::copy(u.w.begin(), u.w.end(), r.begin());
  model.hidden_bias[row] = u.c;
}

// lambda giving factor 1 + e^lambda = e^need; need <= 0 is unreachable.
double boost_for(double need) {
  if (need > 30.0) return need;
  if (need <= 0.0) return kNeutralLambda;
  return std::max(std::log(std::expm1(need)), kNeutralLambda);
}

double log_mass_on(const std::vector<double>& log_u, const std::vector<BitVector>& states) {
  std::vector<double> picked;
  picked.reserve(states.size());
  for (const auto& v : states) picked.push_back(log_u[v.index]);
  return log_sum_exp(picked);
}

// Residuals are taken on the marginal conditioned on the covered states:
// mass leaking outside the cover is the finite-sharpness error itself and
// no choice of boosts can remove it.
double max_residual(const std::vector<double>& log_u, const DiscreteDistribution& t,
                    const std::vector<BitVector>& states) {
  const double log_cover = log_mass_on(log_u, states);
  double worst = 0.0;
  for (const auto& v : states)
    worst = std::max(worst, std::abs(std::exp(log_u[v.index] - log_cover) - t[v.index]));
  return worst;
}

// Solves for the lambda of one member of hidden unit `row` so that the
// member's mass conditioned on the covered states equals `goal`. `rest` is
// log z(v) without the unit's factor.
double solve_member(const UnitState& unit, bool upper, double goal,
                    const std::vector<double>& rest, const std::vector<BitVector>& covered) {
  const auto member = upper ? unit.pair.upper.index : unit.pair.lower.index;
  const double log_goal = std::log(goal);
  std::vector<double> log_u(rest.size());
  auto excess = [&](double lambda) {
    const auto w = upper ? make_pair_unit(unit.pair, unit.sharpness, unit.lambda1, lambda)
                         : make_pair_unit(unit.pair, unit.sharpness, lambda, unit.lambda2);
    for (std::uint32_t v = 0; v < rest.size(); ++v)
      log_u[v] = rest[v] + softplus(unit_activation(w, v));
    return log_u[member] - log_mass_on(log_u, covered) - log_goal;
  };

  const double start = upper ? unit.lambda2 : unit.lambda1;
  const double f0 = excess(start);
  if (f0 == 0.0) return start;
  double lo = start, hi = start;
  double step = 1.0;
  if (f0 > 0.0) {
    // Mass too high: walk down until it drops below the goal.
    while (true) {
      lo = start - step;
      if (lo <= kNeutralLambda - 20.0) return kNeutralLambda - 20.0;
      if (excess(lo) <= 0.0) break;
      hi = lo;
      step *= 2.0;
    }
  } else {
    while (true) {
      hi = start + step;
      if (hi > 1e5) return hi;
      if (excess(hi) >= 0.0) break;
      lo = hi;
      step *= 2.0;
    }
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (excess(mid) > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

RbmSynthesis synthesize_rbm(const DiscreteDistribution& target, const PairCover& cover,
                            const RbmSynthesisOptions& options) {
  require(options.sharpness > 0.0 && std::isfinite(options.sharpness), ErrorKind::Argument,
          "sharpness must be positive and finite");
  require(cover.k() >= 1, ErrorKind::Argument, "cover has no pairs");
  require(target.n() == cover.n, ErrorKind::Dimension, "cover width does not match target");
  const auto covered = cover_states(cover);
  for (const auto& v : normalize(target).support())
    require(std::binary_search(covered.begin(), covered.end(), v), ErrorKind::Argument,
            "support state " + v.to_string() + " is not covered");

  const DiscreteDistribution t = floor_target(target, cover);
  const int n = t.n();

  std::vector<OrientedPair> order;
  for (const auto& [x, y] : cover.pairs) order.push_back(OrientedPair::from(x, y));
  std::stable_sort(order.begin(), order.end(), [&](const OrientedPair& p, const OrientedPair& q) {
    const double mp = t[p.lower.index] + t[p.upper.index];
    const double mq = t[q.lower.index] + t[q.upper.index];
    if (mp != mq) return mp > mq;
    return std::pair(p.lower.index, p.upper.index) < std::pair(q.lower.index, q.upper.index);
  });

  std::vector<int> owner(state_count(n), -1);
  for (int p = 0; p < static_cast<int>(order.size()); ++p)
    for (auto idx : {order[p].lower.index, order[p].upper.index})
      if (owner[idx] < 0) owner[idx] = p;

  const OrientedPair& base = order.front();
  RbmModel model = init_rbm0(base, t[base.upper.index] / t[base.lower.index], options.sharpness);
  const double log_base_mass = std::log(t[base.lower.index] + t[base.upper.index]);

  // Closed-form pass: each unit boosts its pair to the target relative to
  // the base pair, anchored to the exact current marginal.
  std::vector<UnitState> units;
  for (int p = 1; p < static_cast<int>(order.size()); ++p) {
    const auto log_u = rbm_log_unnormalized(model);
    const double pair_mass[] = {log_u[base.lower.index], log_u[base.upper.index]};
    const double log_ref = log_sum_exp(pair_mass) - log_base_mass;

    UnitState u;
    u.pair = order[p];
    u.owns_lower = owner[u.pair.lower.index] == p;
    u.owns_upper = owner[u.pair.upper.index] == p;
    auto boost = [&](const BitVector& x, bool owned) {
      if (!owned) return kNeutralLambda;
      return boost_for(std::log(t[x.index]) + log_ref - log_u[x.index]);
    };
    u.lambda1 = boost(u.pair.lower, u.owns_lower);
    u.lambda2 = boost(u.pair.upper, u.owns_upper);
    // Off-pair activations stay below -sharpness/2.
    u.sharpness = options.sharpness + 2.0 * std::max({0.0, u.lambda1, u.lambda2});
    model = add_pair_unit(model, make_pair_unit(u.pair, u.sharpness, u.lambda1, u.lambda2));
    units.push_back(u);
  }

  RbmSynthesisReport report;
  report.sharpness = options.sharpness;
  report.pairs = order;
  report.calibrated = options.calibrate;

  auto log_u = rbm_log_unnormalized(model);
  report.max_residual = max_residual(log_u, t, covered);

  if (options.calibrate) {
    const auto j0 = static_cast<std::size_t>(base.unit - 1);
    int sweep = 0;
    while (report.max_residual >= options.tolerance && sweep < options.max_sweeps) {
      ++sweep;
      // The base pair ratio depends on B at its unit alone.
      const auto log_u0 = rbm_log_unnormalized(model);
      model.visible_bias[j0] += std::log(t[base.upper.index] / t[base.lower.index]) -
                                (log_u0[base.upper.index] - log_u0[base.lower.index]);

      for (std::size_t row = 0; row < units.size(); ++row) {
        auto& u = units[row];
        for (bool upper : {false, true}) {
          if (!(upper ? u.owns_upper : u.owns_lower)) continue;
          auto rest = rbm_log_unnormalized(model);
          const auto current = make_pair_unit(u.pair, u.sharpness, u.lambda1, u.lambda2);
          for (std::uint32_t v = 0; v < rest.size(); ++v)
            rest[v] -= softplus(unit_activation(current, v));
          const auto goal = t[upper ? u.pair.upper.index : u.pair.lower.index];
          (upper ? u.lambda2 : u.lambda1) = solve_member(u, upper, goal, rest, covered);
          write_unit(model, row, make_pair_unit(u.pair, u.sharpness, u.lambda1, u.lambda2));
        }
      }
      log_u = rbm_log_unnormalized(model);
      report.max_residual = max_residual(log_u, t, covered);
    }
    report.calibration_sweeps = sweep;
    if (report.max_residual >= options.tolerance) {
      std::vector<CalibrationError::Residual> residuals;
      const double log_cover = log_mass_on(log_u, covered);
      for (const auto& v : covered)
        residuals.push_back({v.index, t[v.index], std::exp(log_u[v.index] - log_cover)});
      std::ostringstream ss;
      ss << "calibration did not converge after " << sweep << " sweeps; max residual "
         << report.max_residual << " (tolerance " << options.tolerance << ")";
      throw CalibrationError(ss.str(), std::move(residuals));
    }
  }

  model.validate();
  report.base_log_ratio = model.visible_bias[static_cast<std::size_t>(base.unit - 1)];
  for (const auto& u : units)
    report.units.push_back({u.pair, u.sharpness, u.lambda1, u.lambda2});
  report.achieved = rbm_marginal(model);
  report.target = t;
  report.kl = kl_divergence(t, report.achieved);
  report.tv = total_variation(t, report.achieved);
  return {std::move(model), std::move(report)};
}

std::string rbm_report_to_json(const RbmSynthesisReport& r) {
  using nlohmann::json;
  json pairs = json::array();
  for (const auto& p : r.pairs) pairs.push_back({p.lower.index, p.upper.index});
  json lambdas = json::array();
  json unit_sharpness = json::array();
  for (const auto& u : r.units) {
    lambdas.push_back({u.lambda1, u.lambda2});
    unit_sharpness.push_back(u.sharpness);
  }
  return json{{"kl", r.kl},
              {"tv", r.tv},
              {"sharpness", r.sharpness},
              {"hidden_units", r.units.size()},
              {"pairs", pairs},
              {"base_log_ratio", r.base_log_ratio},
              {"lambdas", lambdas},
              {"unit_sharpness", unit_sharpness},
              {"calibrated", r.calibrated},
              {"calibration_sweeps", r.calibration_sweeps},
              {"max_residual", r.max_residual}}
      .dump();
}

}  // namespace boltzsyn
