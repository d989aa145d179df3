#include "boltzsyn/gray.hpp"

#include <map>
#include <sstream>

#include "boltzsyn/error.hpp"

namespace boltzsyn {

namespace {

constexpr int kMaxPrefix = 5;

std::uint32_t reverse_bits(std::uint32_t x, int width) {
  std::uint32_t out = 0;
  for (int i = 0; i < width; ++i)
    if ((x >> i) & 1u) out |= 1u << (width - 1 - i);
  return out;
}

std::string at_label(int seq, int row) {
  return "S_" + std::to_string(seq) + "[" + std::to_string(row + 1) + "]";
}

}  // namespace

GrayCode reflected_gray(int width) {
  require(width >= 1, ErrorKind::Argument, "Gray code width must be at least 1");
  check_width(width);
  GrayCode code;
  code.width = width;
  const auto rows = state_count(width);
  code.rows.reserve(rows);
  for (std::uint32_t k = 0; k < rows; ++k)
    code.rows.emplace_back(width, reverse_bits(k ^ (k >> 1), width));
  return code;
}

GrayCode rotate_columns(const GrayCode& code, int shift) {
  require(shift >= 0 && shift < code.width, ErrorKind::Argument,
          "shift " + std::to_string(shift) + " outside 0.." + std::to_string(code.width - 1));
  GrayCode out;
  out.width = code.width;
  out.rows.reserve(code.rows.size());
  for (const auto& row : code.rows) {
    std::uint32_t idx = 0;
    for (int c = 0; c < code.width; ++c)
      if ((row.index >> ((c + shift) % code.width)) & 1u) idx |= 1u << c;
    out.rows.emplace_back(code.width, idx);
  }
  return out;
}

bool is_gray_code(const GrayCode& code) {
  if (code.rows.size() != state_count(code.width)) return false;
  std::vector<bool> seen(code.rows.size(), false);
  for (std::size_t k = 0; k < code.rows.size(); ++k) {
    if (code.rows[k].n != code.width || seen[code.rows[k].index]) return false;
    seen[code.rows[k].index] = true;
    if (k > 0 && hamming(code.rows[k - 1], code.rows[k]) != 1) return false;
  }
  return true;
}

int family_width(int b) {
  require(b >= 1 && b <= kMaxPrefix, ErrorKind::Argument,
          "prefix width b=" + std::to_string(b) + " outside 1.." + std::to_string(kMaxPrefix));
  return (1 << (b - 1)) + b;
}

std::vector<int> admissible_widths() {
  std::vector<int> out;
  for (int b = 1; b <= kMaxPrefix; ++b) out.push_back(family_width(b));
  return out;
}

std::optional<int> family_prefix_for_width(int n) {
  for (int b = 1; b <= kMaxPrefix; ++b)
    if (family_width(b) == n) return b;
  return std::nullopt;
}

SequenceFamily build_family(int b) {
  SequenceFamily f;
  f.b = b;
  f.n = family_width(b);
  f.a = 1 << b;
  const int suffix = f.n - b;
  f.length = 1 << suffix;
  const GrayCode base = reflected_gray(suffix);

  f.sequences.resize(static_cast<std::size_t>(f.a));
  f.flips.resize(static_cast<std::size_t>(f.a));
  for (int i = 0; i < f.a; ++i) {
    std::uint32_t prefix = 0;
    for (int t = 1; t <= b; ++t)
      if ((i >> (b - t)) & 1) prefix |= 1u << (t - 1);
    const GrayCode rotated = rotate_columns(base, i % suffix);
    auto& seq = f.sequences[static_cast<std::size_t>(i)];
    seq.reserve(rotated.rows.size());
    for (const auto& row : rotated.rows)
      seq.emplace_back(f.n, prefix | (row.index << b));
    auto& flips = f.flips[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k + 1 < seq.size(); ++k)
      flips.push_back(flipped_unit(seq[k], seq[k + 1]));
  }
  return f;
}

FamilyCheck verify_family(const SequenceFamily& f) {
  FamilyCheck out;
  const int a = static_cast<int>(f.sequences.size());

  // Partition of {0,1}^n.
  out.partition = true;
  std::map<std::uint32_t, std::pair<int, int>> first_seen;
  std::size_t entries = 0;
  for (int i = 0; i < a && out.partition; ++i) {
    for (int k = 0; k < static_cast<int>(f.sequences[i].size()); ++k) {
      const auto& v = f.sequences[i][k];
      ++entries;
      auto [it, fresh] = first_seen.emplace(v.index, std::make_pair(i, k));
      if (!fresh) {
        out.partition = false;
        out.partition_witness = "state " + v.to_string() + " appears at " +
                                at_label(it->second.first, it->second.second) + " and " +
                                at_label(i, k);
        break;
      }
    }
  }
  if (out.partition && (first_seen.size() != state_count(f.n) || entries != state_count(f.n))) {
    out.partition = false;
    for (std::uint32_t s = 0; s < state_count(f.n); ++s) {
      if (!first_seen.contains(s)) {
        out.partition_witness = "state " + BitVector(f.n, s).to_string() + " is missing";
        break;
      }
    }
  }

  // Hamming chaining, with the flip table derived from the entries.
  out.chained = true;
  std::vector<std::vector<int>> flips(static_cast<std::size_t>(a));
  for (int i = 0; i < a; ++i) {
    const auto& seq = f.sequences[i];
    for (int k = 0; k + 1 < static_cast<int>(seq.size()); ++k) {
      const int d = hamming(seq[k], seq[k + 1]);
      if (d != 1) {
        if (out.chained)
          out.chained_witness = at_label(i, k) + " -> " + at_label(i, k + 1) +
                                " at Hamming distance " + std::to_string(d);
        out.chained = false;
        flips[i].push_back(0);
      } else {
        flips[i].push_back(flipped_unit(seq[k], seq[k + 1]));
      }
    }
  }

  // Shared flips only between Hamming neighbours; n-b units, two each.
  out.distinct_flips = true;
  out.balanced_flips = true;
  const int rows = a > 0 ? static_cast<int>(flips[0].size()) : 0;
  for (int k = 0; k < rows; ++k) {
    std::map<int, int> counts;
    for (int i = 0; i < a; ++i) {
      if (k >= static_cast<int>(flips[i].size())) continue;
      ++counts[flips[i][k]];
      for (int j = i + 1; j < a && out.distinct_flips; ++j) {
        if (k >= static_cast<int>(flips[j].size())) continue;
        if (flips[i][k] == flips[j][k] &&
            hamming(f.sequences[i][k], f.sequences[j][k]) != 1) {
          out.distinct_flips = false;
          out.distinct_flips_witness =
              "S_" + std::to_string(i) + " and S_" + std::to_string(j) + " both flip unit " +
              std::to_string(flips[i][k]) + " at row " + std::to_string(k + 1) +
              " but " + at_label(i, k) + " and " + at_label(j, k) + " are at distance " +
              std::to_string(hamming(f.sequences[i][k], f.sequences[j][k]));
        }
      }
    }
    bool ok = static_cast<int>(counts.size()) == f.n - f.b;
    for (const auto& [unit, c] : counts) ok = ok && c == 2 && unit != 0;
    if (!ok && out.balanced_flips) {
      out.balanced_flips = false;
      std::ostringstream ss;
      ss << "row " << (k + 1) << " flips";
      for (const auto& [unit, c] : counts) ss << " unit " << unit << " x" << c;
      out.balanced_flips_witness = ss.str();
    }
  }

  // Prefix spells the sequence number.
  out.prefix = true;
  for (int i = 0; i < a && out.prefix; ++i) {
    for (int k = 0; k < static_cast<int>(f.sequences[i].size()); ++k) {
      int value = 0;
      for (int t = 1; t <= f.b; ++t) value = (value << 1) | f.sequences[i][k].bit(t);
      if (value != i) {
        out.prefix = false;
        out.prefix_witness = at_label(i, k) + " carries prefix " + std::to_string(value);
        break;
      }
    }
  }
  return out;
}

std::string family_to_csv(const SequenceFamily& f) {
  std::ostringstream ss;
  ss << "sequence,row,state_bits,flipped_coordinate\n";
  for (int i = 0; i < static_cast<int>(f.sequences.size()); ++i) {
    const auto& seq = f.sequences[i];
    for (int k = 0; k < static_cast<int>(seq.size()); ++k) {
      ss << i << ',' << (k + 1) << ',' << seq[k].to_string() << ',';
      if (k < static_cast<int>(f.flips[i].size())) ss << f.flips[i][k];
      ss << '\n';
    }
  }
  return ss.str();
}

std::string family_check_report(const FamilyCheck& c) {
  std::ostringstream ss;
  auto line = [&](const char* name, bool ok, const std::string& witness) {
    ss << name << ": " << (ok ? "pass" : "FAIL");
    if (!ok) ss << " (" << witness << ")";
    ss << '\n';
  };
  line("partition", c.partition, c.partition_witness);
  line("chained", c.chained, c.chained_witness);
  line("distinct_flips", c.distinct_flips, c.distinct_flips_witness);
  line("balanced_flips", c.balanced_flips, c.balanced_flips_witness);
  line("prefix", c.prefix, c.prefix_witness);
  return ss.str();
}

}  // namespace boltzsyn
