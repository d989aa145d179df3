#pragma once

#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace boltzsyn {

using BigInt = boost::multiprecision::cpp_int;

/// Largest n the size formulas accept.
inline constexpr int kMaxFormulaWidth = 64;

struct Rational {
  BigInt num;
  BigInt den;
  std::string to_string() const;
};

/// (2^n - 1 - n) / (n(n+1)), unreduced.
Rational dbn_lower_bound_rational(int n);
/// Ceiling of dbn_lower_bound_rational.
BigInt dbn_lower_bound(int n);

/// k(n^2 + n) + n.
BigInt dbn_param_count(int n, const BigInt& hidden_layers);

struct SizeTable {
  int n = 0;
  BigInt support_size;                     // s
  std::optional<int> b;                    // set when n = 2^(b-1) + b
  BigInt rbm_hidden_full;                  // 2^n/2 - 1
  BigInt rbm_hidden_support;               // s + 1
  BigInt rbm_params_estimate;              // (2^n/2) n + 2^n/2
  BigInt rbm_params_exact;                 // n m + n + m, m = 2^n/2 - 1
  std::optional<BigInt> dbn_layers_gray;   // 2^n / (2(n-b))
  std::optional<BigInt> dbn_params_gray;
  std::optional<BigInt> dbn_layers_pow2;   // 2^n / n, n = 2^t
  std::optional<BigInt> dbn_params_pow2;
  BigInt dbn_lower_bound;
  Rational dbn_lower_bound_exact;
};

/// `s` defaults to 2^n. `b`, when given, must satisfy n = 2^(b-1) + b for
/// the Gray-family DBN entries to apply; otherwise b is inferred from n.
SizeTable size_summary(int n, std::optional<int> b = std::nullopt,
                       std::optional<BigInt> s = std::nullopt);

std::vector<std::string> size_table_columns();
std::vector<std::string> size_table_fields(const SizeTable& t);

std::string size_tables_csv(const std::vector<SizeTable>& rows);
std::string size_tables_text(const std::vector<SizeTable>& rows);

}  // namespace boltzsyn
