#pragma once

#include <string>
#include <vector>

#include "boltzsyn/distribution.hpp"
#include "boltzsyn/gray.hpp"
#include "boltzsyn/model.hpp"
#include "boltzsyn/rbm_synthesis.hpp"

namespace boltzsyn {

/// Exception targets are clamped to [kTargetClamp, 1 - kTargetClamp].
inline constexpr double kTargetClamp = 1e-9;

/// Mass transfers along each sequence of a family. Rows are 0-based here:
/// move[i][k] is the probability of stepping from S_i[k] to S_i[k+1].
struct TransferSchedule {
  SequenceFamily family;
  std::vector<std::vector<double>> stay;
  std::vector<std::vector<double>> move;
  std::vector<double> top_masses;  // total target mass of each sequence

  int transitions() const noexcept { return family.length - 1; }
};

/// Tail ratios of p_star along every sequence. A row whose tail mass is zero
/// gets move = 1, stay = 0.
TransferSchedule build_schedule(const DiscreteDistribution& p_star,
                                const SequenceFamily& family);

/// Distribution over the top directed-layer input: top_masses[i] on S_i[0].
DiscreteDistribution schedule_top_distribution(const TransferSchedule& s);

struct TraceRow {
  int row;  // 1-based transition index
  std::uint32_t state;
  double before;
  double after;
};

/// Applies the schedule as exact stay/move arithmetic, leaving states off
/// the active row untouched. `trace`, when given, receives the states each
/// transition touches.
DiscreteDistribution ideal_pushforward(const TransferSchedule& schedule,
                                       std::vector<TraceRow>* trace = nullptr);

std::string trace_to_csv(const std::vector<TraceRow>& trace);

/// One output unit that copies its input bit except at two Hamming-1
/// neighbours a_vec and b_vec (differing at unit `split`), where it fires
/// with probabilities p_a and p_b.
struct SharingUnitSpec {
  int n = 0;
  int unit = 0;  // l, 1-based
  BitVector a_vec;
  BitVector b_vec;
  double p_a = 0.5;
  double p_b = 0.5;
  double sharpness = 40.0;  // T
};

struct SharingColumn {
  std::vector<double> weights;  // weight from each input unit, 0-based
  double offset = 0.0;
  int split = 0;        // unit where a_vec and b_vec differ
  double penalty = 0.0; // Q
  double diagonal = 0.0; // P
  double p_a = 0.0;     // clamped targets actually realized
  double p_b = 0.0;
};

SharingColumn realize_sharing_unit(const SharingUnitSpec& spec);

/// Directed layer for transition `row` (1-based, 1..length-1), mapping the
/// row-th entries of the family toward the next ones.
SigmoidLayer build_layer(int row, const TransferSchedule& schedule,
                         double sharpness);

/// Sharing-unit specs of layer `row`, one per flipped unit.
std::vector<SharingUnitSpec> layer_sharing_specs(int row,
                                                 const TransferSchedule& schedule,
                                                 double sharpness);

struct DbnSynthesisOptions {
  double copy_sharpness = 40.0;  // T
  double top_sharpness = kDefaultSharpness;
};

struct DbnSynthesisReport {
  int n = 0;
  int b = 0;
  double tv = 0.0;
  double kl = 0.0;
  int hidden_layers = 0;
  int directed_layers = 0;
  double copy_sharpness = 0.0;
  int top_hidden_units = 0;  // hidden units carrying pair boosts
  RbmSynthesisReport top;
};

struct DbnSynthesis {
  DbnModel model;
  DbnSynthesisReport report;
  TransferSchedule schedule;
};

DbnSynthesis synthesize_dbn(const DiscreteDistribution& p_star, int b,
                            const DbnSynthesisOptions& options = {});

std::string dbn_report_to_json(const DbnSynthesisReport& report);

}  // namespace boltzsyn
