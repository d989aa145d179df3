#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "boltzsyn/bitvec.hpp"
#include "boltzsyn/distribution.hpp"

namespace boltzsyn {

/// Subgraph of the n-cube induced by a vertex set. Vertices are stored in
/// ascending index order; edges join states at Hamming distance one.
struct HypercubeGraph {
  int n = 0;
  std::vector<BitVector> vertices;
  std::vector<std::vector<int>> adjacency;  // positions into `vertices`

  std::size_t edge_count() const;
  /// Popcount parity; edges always join opposite parities.
  static int side(const BitVector& v) { return v.popcount() & 1; }
};

using Edge = std::pair<BitVector, BitVector>;

HypercubeGraph induced_hypercube_graph(std::vector<BitVector> support);

/// Maximum-cardinality matching (Hopcroft-Karp over the parity
/// bipartition). Each edge is reported as (even side, odd side), sorted by
/// the even-side index.
std::vector<Edge> max_matching(const HypercubeGraph& graph);

struct PairCover {
  int n = 0;
  std::vector<Edge> pairs;
  int k() const noexcept { return static_cast<int>(pairs.size()); }
};

/// Fewest Hamming-1 pairs whose union contains the support. Matched
/// support vertices are paired together; every unmatched one is paired with
/// its neighbour across the lowest unit.
PairCover minimal_pair_cover(const DiscreteDistribution& p);
PairCover minimal_pair_cover(const std::vector<BitVector>& support);

/// Every member state of the cover, ascending, without duplicates.
std::vector<BitVector> cover_states(const PairCover& cover);

std::string cover_to_json(const PairCover& cover);

}  // namespace boltzsyn
