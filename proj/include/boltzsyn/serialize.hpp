#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "boltzsyn/distribution.hpp"
#include "boltzsyn/model.hpp"

// JSON file formats. Doubles are written in shortest round-trip form, so
// write-then-read reproduces every value bit for bit.
//
//   {"schema":"dist/1","n":N,"probs":[...2^N values in index order...]}
//   {"schema":"support/1","n":N,"states":[indices...]}
//   {"schema":"rbm/1","n_visible":N,"n_hidden":M,
//    "W":{"rows":M,"cols":N,"layout":"row-major","data":[...]},
//    "B":[...N...],"C":[...M...]}
//   {"schema":"dbn/1","n":N,"top":{rbm/1 object},
//    "directed_layers":[{"n_in":N,"n_out":N,
//       "weights":{"rows":N,"cols":N,"layout":"row-major","data":[...]},
//       "offsets":[...N...]}, ...]}

namespace boltzsyn {

std::string dist_to_json(const DiscreteDistribution& d);
DiscreteDistribution dist_from_json(std::string_view text);

/// Reads a support/1 file as the uniform distribution over its states.
DiscreteDistribution support_from_json(std::string_view text);

std::string rbm_to_json(const RbmModel& m);
RbmModel rbm_from_json(std::string_view text);

std::string dbn_to_json(const DbnModel& m);
DbnModel dbn_from_json(std::string_view text);

using AnyModel = std::variant<RbmModel, DbnModel>;

/// Dispatches on the schema tag (rbm/1 or dbn/1).
AnyModel model_from_json(std::string_view text);
std::string model_to_json(const AnyModel& m);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace boltzsyn
