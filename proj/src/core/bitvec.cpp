#include "boltzsyn/bitvec.hpp"

#include <bit>

#include "boltzsyn/error.hpp"

namespace boltzsyn {

void check_width(int n) {
  require(n >= 1 && n <= kMaxUnits, ErrorKind::Size,
          "width " + std::to_string(n) + " outside 1.." +
              std::to_string(kMaxUnits));
}

BitVector::BitVector(int width, std::uint32_t idx) : n(width), index(idx) {
  check_width(width);
  require(idx < state_count(width), ErrorKind::Argument,
          "state index " + std::to_string(idx) + " out of range for width " +
              std::to_string(width));
}

int BitVector::bit(int unit) const {
  require(unit >= 1 && unit <= n, ErrorKind::Argument,
          "unit " + std::to_string(unit) + " out of range");
  return static_cast<int>((index >> (unit - 1)) & 1u);
}

BitVector BitVector::flip(int unit) const {
  require(unit >= 1 && unit <= n, ErrorKind::Argument,
          "unit " + std::to_string(unit) + " out of range");
  BitVector out = *this;
  out.index ^= 1u << (unit - 1);
  return out;
}

BitVector BitVector::with_bit(int unit, int value) const {
  return bit(unit) == value ? *this : flip(unit);
}

int BitVector::popcount() const { return std::popcount(index); }

std::string BitVector::to_string() const {
  std::string s(static_cast<std::size_t>(n), '0');
  for (int i = 0; i < n; ++i)
    if ((index >> i) & 1u) s[static_cast<std::size_t>(i)] = '1';
  return s;
}

BitVector BitVector::parse(std::string_view bits) {
  const int n = static_cast<int>(bits.size());
  check_width(n);
  std::uint32_t idx = 0;
  for (int i = 0; i < n; ++i) {
    const char c = bits[static_cast<std::size_t>(i)];
    require(c == '0' || c == '1', ErrorKind::Argument,
            "bit string may contain only 0 and 1");
    if (c == '1') idx |= 1u << i;
  }
  return BitVector(n, idx);
}

int hamming(const BitVector& u, const BitVector& v) {
  require(u.n == v.n, ErrorKind::Dimension,
          "hamming: widths " + std::to_string(u.n) + " and " +
              std::to_string(v.n) + " differ");
  return std::popcount(u.index ^ v.index);
}

int flipped_unit(const BitVector& u, const BitVector& v) {
  require(hamming(u, v) == 1, ErrorKind::Argument,
          "states " + u.to_string() + " and " + v.to_string() +
              " are not Hamming neighbours");
  return std::countr_zero(u.index ^ v.index) + 1;
}

}  // namespace boltzsyn
