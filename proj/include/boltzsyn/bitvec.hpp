#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace boltzsyn {

/// Largest supported layer width; dense tables hold 2^kMaxUnits entries.
inline constexpr int kMaxUnits = 24;

/// A point of {0,1}^n. Unit i (1-based) is bit (i-1) of `index`.
///
/// The text form lists units left to right, so "01" is unit 1 = 0 and
/// unit 2 = 1, i.e. index 2.
struct BitVector {
  int n = 0;
  std::uint32_t index = 0;

  BitVector() = default;
  BitVector(int width, std::uint32_t idx);

  /// Value (0 or 1) of unit `unit`, 1-based.
  int bit(int unit) const;
  BitVector flip(int unit) const;
  BitVector with_bit(int unit, int value) const;
  int popcount() const;

  std::string to_string() const;
  static BitVector parse(std::string_view bits);

  friend bool operator==(const BitVector&, const BitVector&) = default;
  friend auto operator<=>(const BitVector&, const BitVector&) = default;
};

inline std::uint64_t state_count(int n) { return std::uint64_t{1} << n; }

void check_width(int n);

int hamming(const BitVector& u, const BitVector& v);

/// 1-based unit where `u` and `v` differ; both must be at Hamming distance 1.
int flipped_unit(const BitVector& u, const BitVector& v);

}  // namespace boltzsyn
