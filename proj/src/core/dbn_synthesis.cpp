#include "boltzsyn/dbn_synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "boltzsyn/inference.hpp"
#include "boltzsyn/pair_cover.hpp"
#include "json.hpp"

namespace boltzsyn {

TransferSchedule build_schedule(const DiscreteDistribution& p_star,
                                const SequenceFamily& family) {
  require(p_star.n() == family.n, ErrorKind::Dimension,
          "target width " + std::to_string(p_star.n()) + " does not match family width " +
              std::to_string(family.n));
  const auto p = normalize(p_star);
  TransferSchedule s;
  s.family = family;
  const auto a = static_cast<std::size_t>(family.a);
  const auto len = static_cast<std::size_t>(family.length);
  s.stay.assign(a, std::vector<double>(len - 1));
  s.move.assign(a, std::vector<double>(len - 1));
  s.top_masses.assign(a, 0.0);
  std::vector<double> tail(len + 1);
  for (std::size_t i = 0; i < a; ++i) {
    const auto& seq = family.sequences[i];
    tail[len] = 0.0;
    for (std::size_t k = len; k-- > 0;) tail[k] = tail[k + 1] + p[seq[k].index];
    s.top_masses[i] = tail[0];
    for (std::size_t k = 0; k + 1 < len; ++k) {
      if (tail[k] > 0.0) {
        s.move[i][k] = tail[k + 1] / tail[k];
        s.stay[i][k] = p[seq[k].index] / tail[k];
      } else {
        s.move[i][k] = 1.0;
        s.stay[i][k] = 0.0;
      }
    }
  }
  return s;
}

DiscreteDistribution schedule_top_distribution(const TransferSchedule& s) {
  std::vector<double> p(state_count(s.family.n), 0.0);
  for (std::size_t i = 0; i < s.top_masses.size(); ++i)
    p[s.family.sequences[i][0].index] = s.top_masses[i];
  return {s.family.n, std::move(p)};
}

DiscreteDistribution ideal_pushforward(const TransferSchedule& schedule,
                                       std::vector<TraceRow>* trace) {
  const auto& f = schedule.family;
  const auto top = schedule_top_distribution(schedule);
  std::vector<double> m(top.probs().begin(), top.probs().end());
  for (int k = 0; k < schedule.transitions(); ++k) {
    for (int i = 0; i < f.a; ++i) {
      const auto from = f.at(i, k).index;
      const auto to = f.at(i, k + 1).index;
      const double before_from = m[from];
      const double before_to = m[to];
      m[from] = before_from * schedule.stay[i][k];
      m[to] += before_from * schedule.move[i][k];
      if (trace) {
        trace->push_back({k + 1, from, before_from, m[from]});
        trace->push_back({k + 1, to, before_to, m[to]});
      }
    }
  }
  return {f.n, std::move(m)};
}

std::string trace_to_csv(const std::vector<TraceRow>& trace) {
  std::ostringstream ss;
  ss.precision(17);
  ss << "row,state,mass_before,mass_after\n";
  for (const auto& r : trace)
    ss << r.row << ',' << r.state << ',' << r.before << ',' << r.after << '\n';
  return ss.str();
}

namespace {

double logit(double p) { return std::log(p) - std::log1p(-p); }

double clamp_target(double p) { return std::clamp(p, kTargetClamp, 1.0 - kTargetClamp); }

}  // namespace

SharingColumn realize_sharing_unit(const SharingUnitSpec& spec) {
  require(spec.sharpness > 0.0 && std::isfinite(spec.sharpness), ErrorKind::Argument,
          "copy sharpness must be positive and finite");
  require(spec.a_vec.n == spec.n && spec.b_vec.n == spec.n, ErrorKind::Dimension,
          "exception states must match the layer width");
  require(spec.unit >= 1 && spec.unit <= spec.n, ErrorKind::Argument, "unit out of range");
  const int split = flipped_unit(spec.a_vec, spec.b_vec);
  require(split != spec.unit, ErrorKind::Argument,
          "exception states may not differ at the sharing unit itself");
  require(spec.p_a >= 0.0 && spec.p_a <= 1.0 && spec.p_b >= 0.0 && spec.p_b <= 1.0,
          ErrorKind::Argument, "exception probabilities must lie in [0,1]");

  SharingColumn col;
  col.split = split;
  col.p_a = clamp_target(spec.p_a);
  col.p_b = clamp_target(spec.p_b);
  const double ga = logit(col.p_a);
  const double gb = logit(col.p_b);
  const double T = spec.sharpness;
  const int n = spec.n;
  const double orient = 2.0 * spec.a_vec.bit(spec.unit) - 1.0;

  col.penalty = T + std::abs(ga) + std::abs(gb) + std::abs(gb - ga);
  col.diagonal = T + (n - 2) * col.penalty + std::abs(ga) + std::abs(gb);
  col.weights.assign(static_cast<std::size_t>(n), 0.0);
  for (int m = 1; m <= n; ++m) {
    if (m == spec.unit || m == split) continue;
    // Every disagreement with a_vec pushes the activation by orient * Q.
    col.weights[static_cast<std::size_t>(m - 1)] =
        orient * col.penalty * (1.0 - 2.0 * spec.a_vec.bit(m));
  }
  col.weights[static_cast<std::size_t>(spec.unit - 1)] = col.diagonal;
  col.weights[static_cast<std::size_t>(split - 1)] =
      (gb - ga) / (spec.b_vec.bit(split) - spec.a_vec.bit(split));

  double at_a = 0.0;
  for (int m = 1; m <= n; ++m)
    if (spec.a_vec.bit(m)) at_a += col.weights[static_cast<std::size_t>(m - 1)];
  col.offset = ga - at_a;
  return col;
}

std::vector<SharingUnitSpec> layer_sharing_specs(int row, const TransferSchedule& schedule,
                                                 double sharpness) {
  const auto& f = schedule.family;
  require(row >= 1 && row <= schedule.transitions(), ErrorKind::Argument,
          "layer row " + std::to_string(row) + " outside 1.." +
              std::to_string(schedule.transitions()));
  require(schedule.move.size() == static_cast<std::size_t>(f.a), ErrorKind::Dimension,
          "schedule does not match its family");
  const int k = row - 1;
  const int half = f.a / 2;
  std::vector<SharingUnitSpec> specs;
  for (int i = 0; i < half; ++i) {
    const int partner = i + half;
    const int unit = f.flips[i][k];
    require(f.flips[partner][k] == unit, ErrorKind::Argument,
            "sequences " + std::to_string(i) + " and " + std::to_string(partner) +
                " do not share a flip at row " + std::to_string(row));
    SharingUnitSpec spec;
    spec.n = f.n;
    spec.unit = unit;
    spec.a_vec = f.at(i, k);
    spec.b_vec = f.at(partner, k);
    spec.sharpness = sharpness;
    const bool set = spec.a_vec.bit(unit) == 1;
    spec.p_a = set ? schedule.stay[i][k] : schedule.move[i][k];
    spec.p_b = set ? schedule.stay[partner][k] : schedule.move[partner][k];
    specs.push_back(spec);
  }
  return specs;
}

SigmoidLayer build_layer(int row, const TransferSchedule& schedule, double sharpness) {
  const int n = schedule.family.n;
  const auto specs = layer_sharing_specs(row, schedule, sharpness);
  SigmoidLayer layer(n, n);
  std::vector<bool> sharing(static_cast<std::size_t>(n), false);
  double widest = 0.0;
  for (const auto& spec : specs) {
    auto taken = sharing[static_cast<std::size_t>(spec.unit - 1)];
    require(!taken, ErrorKind::Argument,
            "two sharing units target unit " + std::to_string(spec.unit) + " at row " +
                std::to_string(row));
    taken = true;
    const auto col = realize_sharing_unit(spec);
    for (int k = 0; k < n; ++k)
      layer.weights(static_cast<std::size_t>(k), static_cast<std::size_t>(spec.unit - 1)) =
          col.weights[static_cast<std::size_t>(k)];
    layer.offsets[static_cast<std::size_t>(spec.unit - 1)] = col.offset;
    widest = std::max(widest, col.diagonal);
  }
  const double copy = widest + sharpness;
  for (int l = 1; l <= n; ++l) {
    if (sharing[static_cast<std::size_t>(l - 1)]) continue;
    layer.weights(static_cast<std::size_t>(l - 1), static_cast<std::size_t>(l - 1)) = 2.0 * copy;
    layer.offsets[static_cast<std::size_t>(l - 1)] = -copy;
  }
  layer.validate();
  return layer;
}

DbnSynthesis synthesize_dbn(const DiscreteDistribution& p_star, int b,
                            const DbnSynthesisOptions& options) {
  const auto prefix = family_prefix_for_width(p_star.n());
  if (!prefix || *prefix != b) {
    std::ostringstream ss;
    ss << "width " << p_star.n() << " with b=" << b
       << " is not of the form 2^(b-1)+b; admissible widths:";
    for (int w : admissible_widths()) ss << ' ' << w;
    fail(ErrorKind::Domain, ss.str());
  }
  require(options.copy_sharpness > 0.0 && std::isfinite(options.copy_sharpness),
          ErrorKind::Argument, "copy sharpness must be positive and finite");

  const auto p = normalize(p_star);
  DbnSynthesis out;
  out.schedule = build_schedule(p, build_family(b));
  const int n = p.n();

  const auto top_target = schedule_top_distribution(out.schedule);
  RbmSynthesisOptions top_options;
  top_options.sharpness = options.top_sharpness;
  auto top = synthesize_rbm(top_target, minimal_pair_cover(top_target), top_options);

  out.report.top_hidden_units = top.model.n_hidden();
  // Surplus hidden units get zero weights; they scale every state by 2.
  const std::vector<double> zeros(static_cast<std::size_t>(n), 0.0);
  while (top.model.n_hidden() < n) {
    top.model.weights.append_row(zeros);
    top.model.hidden_bias.push_back(0.0);
  }
  out.model.top = std::move(top.model);
  for (int row = 1; row <= out.schedule.transitions(); ++row)
    out.model.directed_layers.push_back(build_layer(row, out.schedule, options.copy_sharpness));
  out.model.validate();

  const auto marginal = dbn_marginal(out.model);
  out.report.n = n;
  out.report.b = b;
  out.report.tv = total_variation(p, marginal);
  out.report.kl = kl_divergence(p, marginal);
  out.report.hidden_layers = out.model.hidden_layers();
  out.report.directed_layers = static_cast<int>(out.model.directed_layers.size());
  out.report.copy_sharpness = options.copy_sharpness;
  out.report.top = std::move(top.report);
  return out;
}

std::string dbn_report_to_json(const DbnSynthesisReport& r) {
  using nlohmann::json;
  return json{{"tv", r.tv},
              {"kl", r.kl},
              {"layers", r.hidden_layers},
              {"directed_layers", r.directed_layers},
              {"T", r.copy_sharpness},
              {"top_hidden_units", r.top_hidden_units},
              {"n", r.n},
              {"b", r.b},
              {"top", json::parse(rbm_report_to_json(r.top))}}
      .dump();
}

}  // namespace boltzsyn
