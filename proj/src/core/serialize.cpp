#include "boltzsyn/serialize.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "boltzsyn/error.hpp"

namespace boltzsyn {

using nlohmann::json;

namespace {

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::Schema, std::string("malformed JSON: ") + e.what());
  }
}

template <typename T>
T field(const json& j, const char* key) {
  require(j.is_object() && j.contains(key), ErrorKind::Schema,
          std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(ErrorKind::Schema, std::string("field '") + key + "': " + e.what());
  }
}

void expect_schema(const json& j, std::string_view tag) {
  const auto schema = field<std::string>(j, "schema");
  require(schema == tag, ErrorKind::Schema,
          "unknown schema '" + schema + "', expected '" + std::string(tag) + "'");
}

json matrix_to_json(const Matrix& m) {
  return json{{"rows", m.rows()},
              {"cols", m.cols()},
              {"layout", "row-major"},
              {"data", std::vector<double>(m.data().begin(), m.data().end())}};
}

Matrix matrix_from_json(const json& j) {
  require(field<std::string>(j, "layout") == "row-major", ErrorKind::Schema,
          "matrix layout must be row-major");
  return Matrix(field<std::size_t>(j, "rows"), field<std::size_t>(j, "cols"),
                field<std::vector<double>>(j, "data"));
}

json rbm_body(const RbmModel& m) {
  return json{{"schema", "rbm/1"},
              {"n_visible", m.n_visible},
              {"n_hidden", m.n_hidden()},
              {"W", matrix_to_json(m.weights)},
              {"B", m.visible_bias},
              {"C", m.hidden_bias}};
}

RbmModel rbm_from(const json& j) {
  expect_schema(j, "rbm/1");
  const int n = field<int>(j, "n_visible");
  const int m = field<int>(j, "n_hidden");
  check_width(n);
  Matrix w = matrix_from_json(field<json>(j, "W"));
  require(w.rows() == static_cast<std::size_t>(m), ErrorKind::Schema,
          "W rows disagree with n_hidden");
  if (m == 0) w = Matrix(0, static_cast<std::size_t>(n));
  require(w.cols() == static_cast<std::size_t>(n), ErrorKind::Schema,
          "W cols disagree with n_visible");
  try {
    return RbmModel(n, std::move(w), field<std::vector<double>>(j, "B"),
                    field<std::vector<double>>(j, "C"));
  } catch (const Error& e) {
    fail(ErrorKind::Schema, std::string("invalid rbm/1 model: ") + e.what());
  }
}

json dbn_body(const DbnModel& m) {
  json layers = json::array();
  for (const auto& l : m.directed_layers)
    layers.push_back(json{{"n_in", l.n_in()},
                          {"n_out", l.n_out()},
                          {"weights", matrix_to_json(l.weights)},
                          {"offsets", l.offsets}});
  return json{{"schema", "dbn/1"},
              {"n", m.width()},
              {"top", rbm_body(m.top)},
              {"directed_layers", layers}};
}

DbnModel dbn_from(const json& j) {
  expect_schema(j, "dbn/1");
  DbnModel model;
  model.top = rbm_from(field<json>(j, "top"));
  require(field<int>(j, "n") == model.top.n_visible, ErrorKind::Schema,
          "dbn width disagrees with top RBM");
  for (const auto& lj : field<json>(j, "directed_layers")) {
    try {
      SigmoidLayer layer(matrix_from_json(field<json>(lj, "weights")),
                         field<std::vector<double>>(lj, "offsets"));
      require(layer.n_in() == field<int>(lj, "n_in") &&
                  layer.n_out() == field<int>(lj, "n_out"),
              ErrorKind::Schema, "layer shape disagrees with n_in/n_out");
      model.directed_layers.push_back(std::move(layer));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Schema) throw;
      fail(ErrorKind::Schema, std::string("invalid dbn/1 layer: ") + e.what());
    }
  }
  try {
    model.validate();
  } catch (const Error& e) {
    fail(ErrorKind::Schema, std::string("invalid dbn/1 model: ") + e.what());
  }
  return model;
}

}  // namespace

std::string dist_to_json(const DiscreteDistribution& d) {
  json j{{"schema", "dist/1"},
         {"n", d.n()},
         {"probs", std::vector<double>(d.probs().begin(), d.probs().end())}};
  return j.dump();
}

DiscreteDistribution dist_from_json(std::string_view text) {
  const json j = parse(text);
  expect_schema(j, "dist/1");
  try {
    return DiscreteDistribution(field<int>(j, "n"), field<std::vector<double>>(j, "probs"));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Schema) throw;
    fail(ErrorKind::Schema, std::string("invalid dist/1 file: ") + e.what());
  }
}

DiscreteDistribution support_from_json(std::string_view text) {
  const json j = parse(text);
  expect_schema(j, "support/1");
  const int n = field<int>(j, "n");
  try {
    check_width(n);
  } catch (const Error& e) {
    fail(ErrorKind::Schema, std::string("invalid support/1 file: ") + e.what());
  }
  std::vector<double> p(state_count(n), 0.0);
  for (auto idx : field<std::vector<std::uint64_t>>(j, "states")) {
    require(idx < state_count(n), ErrorKind::Schema,
            "support state " + std::to_string(idx) + " out of range");
    p[idx] = 1.0;
  }
  const DiscreteDistribution d(n, std::move(p));
  // An empty support is well-formed input but degenerate.
  return normalize(d);
}

std::string rbm_to_json(const RbmModel& m) { return rbm_body(m).dump(); }
RbmModel rbm_from_json(std::string_view text) { return rbm_from(parse(text)); }

std::string dbn_to_json(const DbnModel& m) { return dbn_body(m).dump(); }
DbnModel dbn_from_json(std::string_view text) { return dbn_from(parse(text)); }

AnyModel model_from_json(std::string_view text) {
  const json j = parse(text);
  const auto schema = field<std::string>(j, "schema");
  if (schema == "rbm/1") return rbm_from(j);
  if (schema == "dbn/1") return dbn_from(j);
  fail(ErrorKind::Schema, "unknown model schema '" + schema + "'");
}

std::string model_to_json(const AnyModel& m) {
  return std::visit(
      [](const auto& model) -> std::string {
        if constexpr (std::is_same_v<std::decay_t<decltype(model)>, RbmModel>)
          return rbm_to_json(model);
        else
          return dbn_to_json(model);
      },
      m);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot write '" + path + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  require(static_cast<bool>(out), ErrorKind::Io, "short write to '" + path + "'");
}

}  // namespace boltzsyn
