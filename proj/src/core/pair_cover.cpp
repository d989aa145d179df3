#include "boltzsyn/pair_cover.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <unordered_map>

#include "boltzsyn/error.hpp"
#include "json.hpp"

namespace boltzsyn {

std::size_t HypercubeGraph::edge_count() const {
  std::size_t deg = 0;
  for (const auto& a : adjacency) deg += a.size();
  return deg / 2;
}

HypercubeGraph induced_hypercube_graph(std::vector<BitVector> support) {
  require(!support.empty(), ErrorKind::Degenerate, "empty support");
  const int n = support.front().n;
  for (const auto& v : support)
    require(v.n == n, ErrorKind::Dimension, "support states have mixed widths");
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());

  HypercubeGraph g;
  g.n = n;
  g.vertices = std::move(support);
  g.adjacency.resize(g.vertices.size());
  std::unordered_map<std::uint32_t, int> position;
  for (std::size_t i = 0; i < g.vertices.size(); ++i)
    position.emplace(g.vertices[i].index, static_cast<int>(i));
  for (std::size_t i = 0; i < g.vertices.size(); ++i) {
    for (int unit = 1; unit <= n; ++unit) {
      auto it = position.find(g.vertices[i].flip(unit).index);
      if (it != position.end()) g.adjacency[i].push_back(it->second);
    }
    std::sort(g.adjacency[i].begin(), g.adjacency[i].end());
  }
  return g;
}

namespace {

constexpr int kUnmatched = -1;
constexpr int kInf = std::numeric_limits<int>::max();

// Hopcroft-Karp with the even-parity vertices on the left.
class Matcher {
 public:
  explicit Matcher(const HypercubeGraph& g)
      : g_(g), mate_(g.vertices.size(), kUnmatched), dist_(g.vertices.size(), kInf) {
    for (std::size_t i = 0; i < g.vertices.size(); ++i) {
      if (HypercubeGraph::side(g.vertices[i]) == 0) left_.push_back(static_cast<int>(i));
      for (int j : g.adjacency[i])
        require(HypercubeGraph::side(g.vertices[i]) != HypercubeGraph::side(g.vertices[j]),
                ErrorKind::Argument, "graph is not bipartite by parity");
    }
  }

  void run() {
    while (layer()) {
      for (int u : left_)
        if (mate_[u] == kUnmatched) augment(u);
    }
  }

  const std::vector<int>& mates() const { return mate_; }

 private:
  bool layer() {
    std::queue<int> q;
    for (int u : left_) {
      if (mate_[u] == kUnmatched) {
        dist_[u] = 0;
        q.push(u);
      } else {
        dist_[u] = kInf;
      }
    }
    bool found = false;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int v : g_.adjacency[u]) {
        const int w = mate_[v];
        if (w == kUnmatched) {
          found = true;
        } else if (dist_[w] == kInf) {
          dist_[w] = dist_[u] + 1;
          q.push(w);
        }
      }
    }
    return found;
  }

  bool augment(int u) {
    for (int v : g_.adjacency[u]) {
      const int w = mate_[v];
      if (w == kUnmatched || (dist_[w] == dist_[u] + 1 && augment(w))) {
        mate_[u] = v;
        mate_[v] = u;
        return true;
      }
    }
    dist_[u] = kInf;
    return false;
  }

  const HypercubeGraph& g_;
  std::vector<int> left_;
  std::vector<int> mate_;
  std::vector<int> dist_;
};

}  // namespace

std::vector<Edge> max_matching(const HypercubeGraph& graph) {
  Matcher m(graph);
  m.run();
  std::vector<Edge> out;
  for (std::size_t i = 0; i < graph.vertices.size(); ++i) {
    const int j = m.mates()[i];
    if (j != kUnmatched && HypercubeGraph::side(graph.vertices[i]) == 0)
      out.emplace_back(graph.vertices[i], graph.vertices[static_cast<std::size_t>(j)]);
  }
  return out;
}

PairCover minimal_pair_cover(const std::vector<BitVector>& support) {
  const HypercubeGraph g = induced_hypercube_graph(support);
  const auto matching = max_matching(g);

  std::vector<bool> matched(state_count(g.n), false);
  PairCover cover;
  cover.n = g.n;
  for (const auto& e : matching) {
    matched[e.first.index] = matched[e.second.index] = true;
    cover.pairs.push_back(e);
  }
  for (const auto& v : g.vertices)
    if (!matched[v.index]) cover.pairs.emplace_back(v, v.flip(1));
  return cover;
}

PairCover minimal_pair_cover(const DiscreteDistribution& p) {
  auto support = p.support();
  require(!support.empty(), ErrorKind::Degenerate, "distribution has empty support");
  return minimal_pair_cover(support);
}

std::vector<BitVector> cover_states(const PairCover& cover) {
  std::vector<BitVector> out;
  for (const auto& [x, y] : cover.pairs) {
    out.push_back(x);
    out.push_back(y);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string cover_to_json(const PairCover& cover) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& [x, y] : cover.pairs)
    pairs.push_back({{"states", {x.index, y.index}},
                     {"bits", {x.to_string(), y.to_string()}},
                     {"unit", flipped_unit(x, y)}});
  return nlohmann::json{{"schema", "cover/1"}, {"n", cover.n}, {"k", cover.k()}, {"pairs", pairs}}
      .dump();
}

}  // namespace boltzsyn
