#include "boltzsyn/bounds.hpp"

#include <algorithm>
#include <sstream>

#include "boltzsyn/error.hpp"

namespace boltzsyn {

namespace {

BigInt pow2(int n) { return BigInt(1) << n; }

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::optional<int> prefix_for(int n) {
  for (int b = 1; (1 << (b - 1)) + b <= kMaxFormulaWidth; ++b)
    if ((1 << (b - 1)) + b == n) return b;
  return std::nullopt;
}

void check_formula_width(int n) {
  require(n >= 1 && n <= kMaxFormulaWidth, ErrorKind::Argument,
          "width " + std::to_string(n) + " outside 1.." + std::to_string(kMaxFormulaWidth));
}

std::string str(const BigInt& x) { return x.str(); }
std::string str(const std::optional<BigInt>& x) { return x ? x->str() : "-"; }

}  // namespace

std::string Rational::to_string() const { return num.str() + "/" + den.str(); }

Rational dbn_lower_bound_rational(int n) {
  check_formula_width(n);
  return {pow2(n) - 1 - n, BigInt(n) * (n + 1)};
}

BigInt dbn_lower_bound(int n) {
  const auto r = dbn_lower_bound_rational(n);
  if (r.num <= 0) return 0;
  return (r.num + r.den - 1) / r.den;
}

BigInt dbn_param_count(int n, const BigInt& hidden_layers) {
  require(n >= 0 && hidden_layers >= 0, ErrorKind::Argument,
          "parameter count needs non-negative width and depth");
  return hidden_layers * (BigInt(n) * n + n) + n;
}

SizeTable size_summary(int n, std::optional<int> b, std::optional<BigInt> s) {
  check_formula_width(n);
  const BigInt states = pow2(n);
  SizeTable t;
  t.n = n;
  t.support_size = s.value_or(states);
  require(t.support_size >= 1 && t.support_size <= states, ErrorKind::Argument,
          "support size must lie in 1..2^n");

  const BigInt half = states / 2;
  t.rbm_hidden_full = half - 1;
  t.rbm_hidden_support = t.support_size + 1;
  t.rbm_params_estimate = half * n + half;
  const BigInt m = t.rbm_hidden_full;
  t.rbm_params_exact = BigInt(n) * m + n + m;

  const auto inferred = prefix_for(n);
  if (b ? (inferred && *inferred == *b) : inferred.has_value()) {
    t.b = inferred;
    t.dbn_layers_gray = states / (BigInt(2) * (n - *inferred));
    t.dbn_params_gray = dbn_param_count(n, *t.dbn_layers_gray);
  }
  if (is_power_of_two(n)) {
    t.dbn_layers_pow2 = states / n;
    t.dbn_params_pow2 = dbn_param_count(n, *t.dbn_layers_pow2);
  }
  t.dbn_lower_bound = dbn_lower_bound(n);
  t.dbn_lower_bound_exact = dbn_lower_bound_rational(n);
  return t;
}

std::vector<std::string> size_table_columns() {
  return {"n",
          "s",
          "b",
          "rbm_hidden_full",
          "rbm_hidden_support",
          "rbm_params_estimate",
          "rbm_params_exact",
          "dbn_layers_gray",
          "dbn_params_gray",
          "dbn_layers_pow2",
          "dbn_params_pow2",
          "dbn_lower_bound",
          "dbn_lower_bound_exact"};
}

std::vector<std::string> size_table_fields(const SizeTable& t) {
  return {std::to_string(t.n),
          str(t.support_size),
          t.b ? std::to_string(*t.b) : "-",
          str(t.rbm_hidden_full),
          str(t.rbm_hidden_support),
          str(t.rbm_params_estimate),
          str(t.rbm_params_exact),
          str(t.dbn_layers_gray),
          str(t.dbn_params_gray),
          str(t.dbn_layers_pow2),
          str(t.dbn_params_pow2),
          str(t.dbn_lower_bound),
          t.dbn_lower_bound_exact.to_string()};
}

std::string size_tables_csv(const std::vector<SizeTable>& rows) {
  std::ostringstream ss;
  auto emit = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) ss << (i ? "," : "") << fields[i];
    ss << '\n';
  };
  emit(size_table_columns());
  for (const auto& r : rows) emit(size_table_fields(r));
  return ss.str();
}

std::string size_tables_text(const std::vector<SizeTable>& rows) {
  std::vector<std::vector<std::string>> cells{size_table_columns()};
  for (const auto& r : rows) cells.push_back(size_table_fields(r));
  std::vector<std::size_t> width(cells.front().size(), 0);
  for (const auto& line : cells)
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  std::ostringstream ss;
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i) ss << "  ";
      ss << std::string(width[i] - line[i].size(), ' ') << line[i];
    }
    ss << '\n';
  }
  return ss.str();
}

}  // namespace boltzsyn
