#include <algorithm>
#include <numeric>
#include <queue>

#include "prefrules/error.hpp"
#include "prefrules/ranking.hpp"

namespace prefrules {
namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), LabelId{0}); }

  LabelId find(LabelId x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  // Keeps the smaller id as representative.
  void unite(LabelId x, LabelId y) {
    x = find(x);
    y = find(y);
    if (x == y) return;
    if (y < x) std::swap(x, y);
    parent_[y] = x;
  }

 private:
  std::vector<LabelId> parent_;
};

}  // namespace

Consolidation consolidate_pairwise(std::span<const PairwiseRelation> relations, std::size_t k) {
  Consolidation out;
  DisjointSets sets(k);
  std::vector<char> mentioned(k, 0);
  for (const auto& rel : relations) {
    if (rel.a >= k || rel.b >= k || rel.a == rel.b) {
      throw ArgumentError("pairwise relation outside the label range");
    }
    if (rel.kind == PairKind::incomparable) {
      out.incomparable.push_back(rel);
      continue;
    }
    mentioned[rel.a] = mentioned[rel.b] = 1;
    if (rel.kind == PairKind::tie) sets.unite(rel.a, rel.b);
  }
  std::sort(out.incomparable.begin(), out.incomparable.end());
  out.incomparable.erase(std::unique(out.incomparable.begin(), out.incomparable.end()), out.incomparable.end());

  // Nodes are tie groups, indexed by their smallest label.
  std::vector<std::vector<LabelId>> members(k);
  std::vector<LabelId> nodes;
  for (LabelId label = 0; label < k; ++label) {
    if (!mentioned[label]) continue;
    const auto root = sets.find(label);
    if (members[root].empty()) nodes.push_back(root);
    members[root].push_back(label);
  }

  std::vector<std::vector<char>> edge(k, std::vector<char>(k, 0));
  for (const auto& rel : relations) {
    if (rel.kind != PairKind::a_precedes && rel.kind != PairKind::b_precedes) continue;
    auto from = sets.find(rel.a);
    auto to = sets.find(rel.b);
    if (rel.kind == PairKind::b_precedes) std::swap(from, to);
    if (from == to) throw CycleError("a label is both tied with and preferred to another");
    edge[from][to] = 1;
  }

  // Kahn's algorithm, smallest group first for a deterministic order.
  std::vector<int> indegree(k, 0);
  for (const auto u : nodes) {
    for (const auto v : nodes) indegree[v] += edge[u][v];
  }
  std::priority_queue<LabelId, std::vector<LabelId>, std::greater<>> ready;
  for (const auto v : nodes) {
    if (indegree[v] == 0) ready.push(v);
  }
  std::vector<LabelId> topo;
  while (!ready.empty()) {
    const auto u = ready.top();
    ready.pop();
    topo.push_back(u);
    for (const auto v : nodes) {
      if (edge[u][v] && --indegree[v] == 0) ready.push(v);
    }
  }
  if (topo.size() != nodes.size()) throw CycleError("pairwise preferences contain a cycle");

  std::vector<std::size_t> position(k, 0);
  for (std::size_t i = 0; i < topo.size(); ++i) position[topo[i]] = i;

  // reach[u][v]: v reachable from u by a non-empty path.
  std::vector<std::vector<char>> reach(k, std::vector<char>(k, 0));
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    const auto u = *it;
    for (const auto v : nodes) {
      if (!edge[u][v]) continue;
      reach[u][v] = 1;
      for (const auto w : nodes) reach[u][w] |= reach[v][w];
    }
  }

  std::vector<std::vector<char>> reduced(k, std::vector<char>(k, 0));
  std::size_t reduced_edges = 0;
  for (const auto u : nodes) {
    for (const auto v : nodes) {
      if (!edge[u][v]) continue;
      bool redundant = false;
      for (const auto w : nodes) {
        if (w != v && edge[u][w] && reach[w][v]) {
          redundant = true;
          break;
        }
      }
      if (!redundant) {
        reduced[u][v] = 1;
        ++reduced_edges;
      }
    }
  }

  bool chain = !topo.empty() && reduced_edges + 1 == topo.size();
  for (std::size_t i = 0; chain && i + 1 < topo.size(); ++i) chain = reduced[topo[i]][topo[i + 1]];
  if (chain) {
    std::vector<int> ranks(k, 0);
    for (std::size_t i = 0; i < topo.size(); ++i) {
      for (const auto label : members[topo[i]]) ranks[label] = static_cast<int>(i + 1);
    }
    out.subranking = Ranking(std::move(ranks));
  }

  // Cover the reduction by maximal paths, longest first.
  auto remaining = reduced;
  std::size_t left = reduced_edges;
  std::vector<char> on_path(k, 0);
  while (left > 0) {
    std::vector<int> length(k, 0);
    std::vector<LabelId> prev(k, static_cast<LabelId>(k));
    for (const auto v : topo) {
      for (const auto u : topo) {
        if (position[u] >= position[v]) break;
        if (remaining[u][v] && length[u] + 1 > length[v]) {
          length[v] = length[u] + 1;
          prev[v] = u;
        }
      }
    }
    LabelId end = topo.front();
    for (const auto v : topo) {
      if (length[v] > length[end]) end = v;
    }
    std::vector<LabelId> nodes_on_path{end};
    while (prev[nodes_on_path.back()] != k) nodes_on_path.push_back(prev[nodes_on_path.back()]);
    std::reverse(nodes_on_path.begin(), nodes_on_path.end());

    auto& path = out.paths.emplace_back();
    for (std::size_t i = 0; i < nodes_on_path.size(); ++i) {
      path.push_back(members[nodes_on_path[i]]);
      on_path[nodes_on_path[i]] = 1;
      if (i + 1 < nodes_on_path.size()) {
        remaining[nodes_on_path[i]][nodes_on_path[i + 1]] = 0;
        --left;
      }
    }
  }
  for (const auto v : topo) {
    if (!on_path[v]) out.paths.push_back({members[v]});
  }
  return out;
}

}  // namespace prefrules
