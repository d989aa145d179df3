#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace boltzsyn {

/// Row-major dense matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> data() const noexcept { return data_; }

  void append_row(std::span<const double> values);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// p(v,h) proportional to exp(h'Wv + B.v + C.h). W is n_hidden x n_visible;
/// row k holds the couplings of hidden unit k. Zero hidden units is valid.
struct RbmModel {
  int n_visible = 0;
  Matrix weights;                   // n_hidden x n_visible
  std::vector<double> visible_bias; // B
  std::vector<double> hidden_bias;  // C

  RbmModel() = default;
  explicit RbmModel(int n_visible_units);
  RbmModel(int n_visible_units, Matrix w, std::vector<double> b,
           std::vector<double> c);

  int n_hidden() const noexcept { return static_cast<int>(hidden_bias.size()); }
  void validate() const;

  friend bool operator==(const RbmModel&, const RbmModel&) = default;
};

/// Directed layer: P(v_l = 1 | h) = logistic(offsets_l + sum_k weights(k,l) h_k).
struct SigmoidLayer {
  Matrix weights;  // n_in x n_out
  std::vector<double> offsets;

  SigmoidLayer() = default;
  SigmoidLayer(int n_in, int n_out);
  SigmoidLayer(Matrix w, std::vector<double> c);

  int n_in() const noexcept { return static_cast<int>(weights.rows()); }
  int n_out() const noexcept { return static_cast<int>(weights.cols()); }
  void validate() const;

  friend bool operator==(const SigmoidLayer&, const SigmoidLayer&) = default;
};

/// Top RBM over the deepest pair of layers plus directed layers applied
/// from the top toward the visible layer.
struct DbnModel {
  RbmModel top;
  std::vector<SigmoidLayer> directed_layers;

  int width() const noexcept { return top.n_visible; }
  int hidden_layers() const noexcept {
    return static_cast<int>(directed_layers.size()) + 1;
  }
  void validate() const;

  friend bool operator==(const DbnModel&, const DbnModel&) = default;
};

}  // namespace boltzsyn
