#include "boltzsyn/model.hpp"

#include <cmath>
#include <string>

#include "boltzsyn/bitvec.hpp"
#include "boltzsyn/error.hpp"

namespace boltzsyn {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  require(data_.size() == rows * cols, ErrorKind::Dimension,
          "matrix data has " + std::to_string(data_.size()) + " entries, expected " +
              std::to_string(rows * cols));
}

void Matrix::append_row(std::span<const double> values) {
  if (rows_ == 0 && cols_ == 0) cols_ = values.size();
  require(values.size() == cols_, ErrorKind::Dimension, "row length mismatch");
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

namespace {

void check_finite(std::span<const double> values, const char* what) {
  for (double x : values)
    require(std::isfinite(x), ErrorKind::Argument,
            std::string(what) + " contains a non-finite value");
}

}  // namespace

RbmModel::RbmModel(int n_visible_units)
    : n_visible(n_visible_units),
      weights(0, static_cast<std::size_t>(n_visible_units)),
      visible_bias(static_cast<std::size_t>(n_visible_units), 0.0) {
  check_width(n_visible_units);
}

RbmModel::RbmModel(int n_visible_units, Matrix w, std::vector<double> b,
                   std::vector<double> c)
    : n_visible(n_visible_units),
      weights(std::move(w)),
      visible_bias(std::move(b)),
      hidden_bias(std::move(c)) {
  validate();
}

void RbmModel::validate() const {
  check_width(n_visible);
  require(visible_bias.size() == static_cast<std::size_t>(n_visible),
          ErrorKind::Dimension, "visible bias length must equal n_visible");
  require(weights.rows() == hidden_bias.size(), ErrorKind::Dimension,
          "weight rows must equal the number of hidden biases");
  require(weights.cols() == static_cast<std::size_t>(n_visible) || weights.rows() == 0,
          ErrorKind::Dimension, "weight columns must equal n_visible");
  check_finite(weights.data(), "RBM weights");
  check_finite(visible_bias, "RBM visible bias");
  check_finite(hidden_bias, "RBM hidden bias");
}

SigmoidLayer::SigmoidLayer(int n_in, int n_out)
    : weights(static_cast<std::size_t>(n_in), static_cast<std::size_t>(n_out)),
      offsets(static_cast<std::size_t>(n_out), 0.0) {
  validate();
}

SigmoidLayer::SigmoidLayer(Matrix w, std::vector<double> c)
    : weights(std::move(w)), offsets(std::move(c)) {
  validate();
}

void SigmoidLayer::validate() const {
  check_width(n_in());
  check_width(n_out());
  require(offsets.size() == weights.cols(), ErrorKind::Dimension,
          "layer offsets must match output width");
  check_finite(weights.data(), "layer weights");
  check_finite(offsets, "layer offsets");
}

void DbnModel::validate() const {
  top.validate();
  for (const auto& layer : directed_layers) {
    layer.validate();
    require(layer.n_in() == width() && layer.n_out() == width(), ErrorKind::Dimension,
            "every DBN layer must have width " + std::to_string(width()));
  }
}

}  // namespace boltzsyn
