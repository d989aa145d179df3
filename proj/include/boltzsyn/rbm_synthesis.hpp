#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "boltzsyn/distribution.hpp"
#include "boltzsyn/error.hpp"
#include "boltzsyn/model.hpp"
#include "boltzsyn/pair_cover.hpp"

namespace boltzsyn {

/// 30 ln 10: off-pair factors at Hamming distance two sit near 1e-15.
inline const double kDefaultSharpness = 30.0 * std::log(10.0);
/// Covered states with less target mass are raised to this value.
inline constexpr double kMassFloor = 1e-9;
/// Lambda given to a pair member owned by an earlier pair; its factor
/// 1 + e^lambda is 1 to double precision.
inline constexpr double kNeutralLambda = -40.0;

/// A Hamming-1 pair oriented so that `upper` has unit `unit` set and
/// `lower` has it cleared.
struct OrientedPair {
  BitVector upper;
  BitVector lower;
  int unit = 0;

  static OrientedPair from(const BitVector& x, const BitVector& y);
};

/// Hidden unit boosting one pair: with s = a(lower - 1/2 off `unit`),
///   w = s + (lambda2 - lambda1) e_unit,   c = -s.lower + lambda1,
/// so w.v + c = -a/2 * (mismatches off `unit`) + lambda1 + (lambda2 - lambda1) v_unit.
struct PairUnitWeights {
  OrientedPair pair;
  double sharpness = 0.0;
  double lambda1 = 0.0;  // log-boost of pair.lower
  double lambda2 = 0.0;  // log-boost of pair.upper
  std::vector<double> w;
  double c = 0.0;
};

PairUnitWeights make_pair_unit(const OrientedPair& pair, double sharpness,
                               double lambda1, double lambda2);

/// Zero-hidden-unit RBM concentrated on `pair` with p(upper)/p(lower) equal
/// to `mass_ratio` for every sharpness.
RbmModel init_rbm0(const OrientedPair& pair, double mass_ratio,
                   double sharpness);

RbmModel add_pair_unit(const RbmModel& model, const PairUnitWeights& unit);

struct RbmSynthesisOptions {
  double sharpness = kDefaultSharpness;
  bool calibrate = true;
  int max_sweeps = 100;
  double tolerance = 1e-10;
};

struct UnitReport {
  OrientedPair pair;
  double sharpness = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
};

struct RbmSynthesisReport {
  DiscreteDistribution target;  // floored and renormalized
  DiscreteDistribution achieved;
  double kl = 0.0;
  double tv = 0.0;
  double sharpness = 0.0;
  double base_log_ratio = 0.0;  // lambda2 - lambda1 of the RBM0 pair
  std::vector<OrientedPair> pairs;  // synthesis order, first is RBM0's
  std::vector<UnitReport> units;
  int calibration_sweeps = 0;
  double max_residual = 0.0;
  bool calibrated = false;
};

struct RbmSynthesis {
  RbmModel model;
  RbmSynthesisReport report;
};

/// Target masses floored to kMassFloor on the cover's states, zero
/// elsewhere, renormalized.
DiscreteDistribution floor_target(const DiscreteDistribution& target,
                                  const PairCover& cover);

/// RBM with cover.k() - 1 hidden units approximating `target`.
RbmSynthesis synthesize_rbm(const DiscreteDistribution& target,
                            const PairCover& cover,
                            const RbmSynthesisOptions& options = {});

std::string rbm_report_to_json(const RbmSynthesisReport& report);

}  // namespace boltzsyn

namespace boltzsyn {

/// Raised when calibration cannot bring every covered state within
/// tolerance. Carries the final per-state residuals (achieved - target).
class CalibrationError : public Error {
 public:
  struct Residual {
    std::uint32_t state;
    double target;
    double achieved;
  };

  CalibrationError(const std::string& what, std::vector<Residual> residuals)
      : Error(ErrorKind::Calibration, what), residuals_(std::move(residuals)) {}

  const std::vector<Residual>& residuals() const noexcept { return residuals_; }

 private:
  std::vector<Residual> residuals_;
};

}  // namespace boltzsyn
