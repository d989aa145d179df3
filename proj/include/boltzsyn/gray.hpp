#pragma once

#include <optional>
#include <string>
#include <vector>

#include "boltzsyn/bitvec.hpp"

namespace boltzsyn {

/// Rows of a Gray code over {0,1}^width. Column c of a row is unit c+1.
struct GrayCode {
  int width = 0;
  std::vector<BitVector> rows;
};

/// Reflected binary Gray code starting at all-zeros; in text form width 2
/// reads 00, 01, 11, 10.
GrayCode reflected_gray(int width);

/// Column c of the result is column (c + shift) mod width of `code`.
GrayCode rotate_columns(const GrayCode& code, int shift);

bool is_gray_code(const GrayCode& code);

/// a = 2^b sequences S_i partitioning {0,1}^n with n = 2^(b-1) + b. Units
/// 1..b of every S_i entry hold i in binary, most significant bit in unit 1;
/// units b+1..n hold the reflected Gray code rotated by i mod (n-b).
struct SequenceFamily {
  int b = 0;
  int n = 0;
  int a = 0;
  int length = 0;  // 2^(n-b) rows per sequence
  std::vector<std::vector<BitVector>> sequences;
  /// flips[i][k] is the 1-based unit changed between rows k and k+1 of S_i.
  std::vector<std::vector<int>> flips;

  const BitVector& at(int seq, int row) const { return sequences[seq][row]; }
};

/// Admissible widths 2^(b-1) + b for b in 1..5.
std::vector<int> admissible_widths();
int family_width(int b);
/// b with family_width(b) == n, if any.
std::optional<int> family_prefix_for_width(int n);

SequenceFamily build_family(int b);

struct FamilyCheck {
  bool partition = false;
  bool chained = false;
  bool distinct_flips = false;
  bool balanced_flips = false;
  bool prefix = false;
  std::string partition_witness;
  std::string chained_witness;
  std::string distinct_flips_witness;
  std::string balanced_flips_witness;
  std::string prefix_witness;

  bool all() const {
    return partition && chained && distinct_flips && balanced_flips && prefix;
  }
};

/// Exhaustive check of the family properties:
///   partition       - entries cover {0,1}^n exactly once;
///   chained         - consecutive entries of a sequence differ in one unit;
///   distinct_flips  - at every row, two sequences flip the same unit only
///                     if their entries in that row are Hamming neighbours;
///   balanced_flips  - at every row, each of n-b units is flipped by exactly
///                     two sequences;
///   prefix          - units 1..b of S_i spell i.
/// Checks use the recorded entries, not the flip table, except where the
/// flip table itself is under test.
FamilyCheck verify_family(const SequenceFamily& family);

std::string family_to_csv(const SequenceFamily& family);
std::string family_check_report(const FamilyCheck& check);

}  // namespace boltzsyn
