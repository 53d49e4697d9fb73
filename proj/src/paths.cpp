#include "ixpsim/paths.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

#include "ixpsim/rng.hpp"

namespace ixpsim {

namespace {

constexpr Millisec kInfLatency = std::numeric_limits<Millisec>::max();
constexpr PathletId kNoEdge = -1;

using DistNode = std::pair<Millisec, NodeIndex>;
using MinHeap = std::priority_queue<DistNode, std::vector<DistNode>, std::greater<DistNode>>;

NodeIndex endpoint_index(const Multigraph& graph, const std::string& name) {
  if (!graph.has_node(name)) throw std::invalid_argument("unknown endpoint: " + name);
  const NodeIndex idx = graph.node_index(name);
  if (graph.node(idx).kind != NodeKind::endpoint)
    throw std::invalid_argument("node is not an endpoint: " + name);
  return idx;
}

std::pair<NodeIndex, NodeIndex> endpoint_pair(const Multigraph& graph, const std::string& src,
                                              const std::string& dst) {
  const NodeIndex s = endpoint_index(graph, src);
  const NodeIndex d = endpoint_index(graph, dst);
  if (s == d) throw std::invalid_argument("src and dst endpoints must differ");
  return {s, d};
}

// Transit pathlet sequence between two anchor IXPs.
struct TransitPath {
  std::vector<PathletId> edges;
  Millisec latency = 0;
};

// Min-latency transit-only search between IXPs. `excluded_nodes` and
// `excluded_edges` are the spur-search restrictions layered on top of the
// feasibility view; either may be null.
std::optional<TransitPath> dijkstra_transit(const FeasibleView& view, NodeIndex from,
                                            NodeIndex to, const std::vector<bool>* excluded_nodes,
                                            const std::set<PathletId>* excluded_edges) {
  const Multigraph& graph = view.graph();
  const std::size_t n = graph.node_count();
  std::vector<Millisec> dist(n, kInfLatency);
  std::vector<PathletId> pred_edge(n, kNoEdge);
  std::vector<NodeIndex> pred_node(n, 0);
  std::vector<char> settled(n, 0);

  MinHeap heap;
  dist[from] = 0;
  heap.push({0, from});
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (settled[u]) continue;
    settled[u] = 1;
    if (u == to) break;
    view.for_each_feasible(u, [&](const Pathlet& p) {
      if (p.kind != PathletKind::transit) return;
      if (excluded_edges && excluded_edges->count(p.id)) return;
      const NodeIndex w = p.other(u);
      if (settled[w]) return;
      if (excluded_nodes && (*excluded_nodes)[w]) return;
      const Millisec nd = d + p.latency_ms;
      // Among parallel edges only the minimum-latency feasible one survives
      // as predecessor; latency ties go to the smaller pathlet id.
      if (nd < dist[w] || (nd == dist[w] && p.id < pred_edge[w])) {
        dist[w] = nd;
        pred_edge[w] = p.id;
        pred_node[w] = u;
        heap.push({nd, w});
      }
    });
  }
  if (!settled[to]) return std::nullopt;

  TransitPath out;
  out.latency = dist[to];
  for (NodeIndex cur = to; cur != from; cur = pred_node[cur])
    out.edges.push_back(pred_edge[cur]);
  std::reverse(out.edges.begin(), out.edges.end());
  return out;
}

// Node sequence visited by a transit path starting at `from`.
std::vector<NodeIndex> transit_nodes(const Multigraph& graph, NodeIndex from,
                                     const std::vector<PathletId>& edges) {
  std::vector<NodeIndex> nodes{from};
  NodeIndex cur = from;
  for (const PathletId id : edges) {
    cur = graph.pathlet(id).other(cur);
    nodes.push_back(cur);
  }
  return nodes;
}

// Yen's algorithm over the transit graph, generalized to parallel edges by
// matching known paths on their edge (not node) prefix. Enumerates
// node-simple paths in non-decreasing latency until k paths are found, the
// budget is exceeded, or the deviation set runs dry.
std::vector<TransitPath> yen_transit(const FeasibleView& view, NodeIndex from, NodeIndex to,
                                     Millisec budget, std::size_t k) {
  std::vector<TransitPath> found;
  if (k == 0 || budget < 0) return found;

  const Multigraph& graph = view.graph();
  const auto first = dijkstra_transit(view, from, to, nullptr, nullptr);
  if (!first || first->latency > budget) return found;
  found.push_back(*first);

  std::set<std::vector<PathletId>> accepted{first->edges};
  std::set<std::pair<Millisec, std::vector<PathletId>>> candidates;

  while (found.size() < k) {
    const TransitPath prev = found.back();
    const std::vector<NodeIndex> prev_nodes = transit_nodes(graph, from, prev.edges);

    std::vector<bool> excluded_nodes(graph.node_count(), false);
    Millisec root_latency = 0;
    for (std::size_t spur = 0; spur < prev.edges.size(); ++spur) {
      const std::vector<PathletId> root(prev.edges.begin(),
                                        prev.edges.begin() + static_cast<std::ptrdiff_t>(spur));
      std::set<PathletId> excluded_edges;
      for (const auto& path : accepted) {
        if (path.size() > spur &&
            std::equal(root.begin(), root.end(), path.begin(), path.begin() + spur))
          excluded_edges.insert(path[spur]);
      }
      const auto spur_path = dijkstra_transit(view, prev_nodes[spur], to,
                                              spur == 0 ? nullptr : &excluded_nodes,
                                              &excluded_edges);
      if (spur_path) {
        std::vector<PathletId> edges = root;
        edges.insert(edges.end(), spur_path->edges.begin(), spur_path->edges.end());
        const Millisec latency = root_latency + spur_path->latency;
        if (!accepted.count(edges)) candidates.insert({latency, std::move(edges)});
      }
      // The spur node of round j becomes a forbidden root node of round j+1.
      excluded_nodes[prev_nodes[spur]] = true;
      root_latency += graph.pathlet(prev.edges[spur]).latency_ms;
    }

    if (candidates.empty()) break;
    auto best = candidates.begin();
    if (best->first > budget) break;
    found.push_back({best->second, best->first});
    accepted.insert(best->second);
    candidates.erase(best);
  }
  return found;
}

struct AccessCombo {
  PathletId src_access = 0;
  PathletId dst_access = 0;
  NodeIndex anchor_src = 0;
  NodeIndex anchor_dst = 0;
  Millisec access_latency = 0;
};

std::vector<AccessCombo> feasible_combos(const FeasibleView& view, NodeIndex src, NodeIndex dst) {
  const Multigraph& graph = view.graph();
  const auto feasible_access = [&](NodeIndex endpoint) {
    std::vector<PathletId> out;
    for (const PathletId id : graph.access_pathlets(endpoint))
      if (view.admits(graph.pathlet(id))) out.push_back(id);
    return out;
  };
  std::vector<AccessCombo> combos;
  for (const PathletId s : feasible_access(src)) {
    for (const PathletId d : feasible_access(dst)) {
      const Pathlet& ps = graph.pathlet(s);
      const Pathlet& pd = graph.pathlet(d);
      combos.push_back({s, d, ps.other(src), pd.other(dst), ps.latency_ms + pd.latency_ms});
    }
  }
  return combos;
}

Path assemble(const AccessCombo& combo, const TransitPath& transit) {
  Path path;
  path.pathlets.reserve(transit.edges.size() + 2);
  path.pathlets.push_back(combo.src_access);
  path.pathlets.insert(path.pathlets.end(), transit.edges.begin(), transit.edges.end());
  path.pathlets.push_back(combo.dst_access);
  path.latency_ms = combo.access_latency + transit.latency;
  return path;
}

// Per-anchor-pair candidate generation shared by the parallel and serial ksp
// drivers.
std::vector<Path> ksp_combo(const FeasibleView& view, const AccessCombo& combo,
                            Millisec latency_bound, std::size_t k) {
  std::vector<Path> out;
  if (combo.access_latency > latency_bound) return out;
  if (combo.anchor_src == combo.anchor_dst) {
    out.push_back(assemble(combo, TransitPath{}));
    return out;
  }
  const Millisec budget = latency_bound - combo.access_latency;
  for (const TransitPath& t : yen_transit(view, combo.anchor_src, combo.anchor_dst, budget, k))
    out.push_back(assemble(combo, t));
  return out;
}

std::vector<Path> merge_combo_results(std::vector<std::vector<Path>>& per_combo, std::size_t k) {
  std::vector<Path> all;
  for (auto& chunk : per_combo)
    all.insert(all.end(), std::make_move_iterator(chunk.begin()),
               std::make_move_iterator(chunk.end()));
  std::sort(all.begin(), all.end(), latency_lex_less);
  if (all.size() > k) all.resize(k);
  return all;
}

// One seeded walk. Steps only to unvisited IXPs (or dst), so successful
// walks always have the access/transit/access shape.
std::optional<Path> single_walk(const FeasibleView& view, NodeIndex src, NodeIndex dst,
                                Millisec latency_bound, std::size_t max_len, Rng& rng) {
  const Multigraph& graph = view.graph();
  std::vector<char> visited(graph.node_count(), 0);
  visited[src] = 1;
  Path path;
  NodeIndex cur = src;
  std::vector<const Pathlet*> options;
  while (cur != dst) {
    if (path.pathlets.size() >= max_len) return std::nullopt;
    options.clear();
    view.for_each_feasible(cur, [&](const Pathlet& p) {
      const NodeIndex w = p.other(cur);
      if (visited[w]) return;
      if (graph.node(w).kind == NodeKind::endpoint && w != dst) return;
      options.push_back(&p);
    });
    if (options.empty()) return std::nullopt;
    const Pathlet& pick = *options[rng.below(options.size())];
    path.pathlets.push_back(pick.id);
    path.latency_ms += pick.latency_ms;
    cur = pick.other(cur);
    visited[cur] = 1;
  }
  if (path.latency_ms > latency_bound) return std::nullopt;
  return path;
}

std::vector<Path> dedup_walks(std::vector<std::optional<Path>>& outcomes) {
  std::vector<Path> unique;
  std::set<std::vector<PathletId>> seen;
  for (auto& outcome : outcomes) {
    if (!outcome) continue;
    if (seen.insert(outcome->pathlets).second) unique.push_back(std::move(*outcome));
  }
  return unique;
}

using boost::multiprecision::cpp_int;

// Sum of demand/residual terms kept as an exact rational.
struct StressSum {
  cpp_int num{0};
  cpp_int den{1};

  void add(Mbps demand, Mbps residual) {
    num = num * residual + cpp_int(demand) * den;
    den *= residual;
  }

  bool less_than(const StressSum& other) const { return num * other.den < other.num * den; }
  bool equals(const StressSum& other) const { return num * other.den == other.num * den; }
};

StressSum path_stress(const Multigraph& graph, const Path& path, Mbps demand) {
  StressSum s;
  for (const PathletId id : path.pathlets) s.add(demand, graph.pathlet(id).residual());
  return s;
}

Mbps path_bottleneck(const Multigraph& graph, const Path& path) {
  Mbps bottleneck = std::numeric_limits<Mbps>::max();
  for (const PathletId id : path.pathlets)
    bottleneck = std::min(bottleneck, graph.pathlet(id).residual());
  return bottleneck;
}

}  // namespace

bool latency_lex_less(const Path& a, const Path& b) {
  if (a.latency_ms != b.latency_ms) return a.latency_ms < b.latency_ms;
  return a.pathlets < b.pathlets;
}

bool canonical_less(const Path& a, const Path& b) {
  if (a.latency_ms != b.latency_ms) return a.latency_ms < b.latency_ms;
  if (a.hops() != b.hops()) return a.hops() < b.hops();
  return a.pathlets < b.pathlets;
}

SampleMethod parse_sample_method(const std::string& text) {
  if (text == "dijkstra") return SampleMethod::dijkstra;
  if (text == "ksp") return SampleMethod::ksp;
  if (text == "random_walk") return SampleMethod::random_walk;
  throw std::invalid_argument("unknown sample method: " + text);
}

SelectionPolicy parse_selection_policy(const std::string& text) {
  if (text == "min_latency") return SelectionPolicy::min_latency;
  if (text == "min_hops") return SelectionPolicy::min_hops;
  if (text == "widest") return SelectionPolicy::widest;
  if (text == "least_stress") return SelectionPolicy::least_stress;
  throw std::invalid_argument("unknown selection policy: " + text);
}

std::string to_string(SampleMethod method) {
  switch (method) {
    case SampleMethod::dijkstra: return "dijkstra";
    case SampleMethod::ksp: return "ksp";
    case SampleMethod::random_walk: return "random_walk";
  }
  return "?";
}

std::string to_string(SelectionPolicy policy) {
  switch (policy) {
    case SelectionPolicy::min_latency: return "min_latency";
    case SelectionPolicy::min_hops: return "min_hops";
    case SelectionPolicy::widest: return "widest";
    case SelectionPolicy::least_stress: return "least_stress";
  }
  return "?";
}

std::optional<Path> min_latency_on_view(const FeasibleView& view, NodeIndex src, NodeIndex dst,
                                        Millisec latency_bound) {
  const Multigraph& graph = view.graph();
  const std::size_t n = graph.node_count();
  std::vector<Millisec> dist(n, kInfLatency);
  std::vector<PathletId> pred_edge(n, kNoEdge);
  std::vector<NodeIndex> pred_node(n, 0);
  std::vector<char> settled(n, 0);

  MinHeap heap;
  dist[src] = 0;
  heap.push({0, src});
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (settled[u]) continue;
    settled[u] = 1;
    if (u == dst) break;
    if (graph.node(u).kind == NodeKind::endpoint && u != src) continue;
    view.for_each_feasible(u, [&](const Pathlet& p) {
      const NodeIndex w = p.other(u);
      if (settled[w]) return;
      if (graph.node(w).kind == NodeKind::endpoint && w != dst) return;
      const Millisec nd = d + p.latency_ms;
      if (nd < dist[w] || (nd == dist[w] && p.id < pred_edge[w])) {
        dist[w] = nd;
        pred_edge[w] = p.id;
        pred_node[w] = u;
        heap.push({nd, w});
      }
    });
  }
  if (!settled[dst] || dist[dst] > latency_bound) return std::nullopt;

  Path path;
  path.latency_ms = dist[dst];
  for (NodeIndex cur = dst; cur != src; cur = pred_node[cur])
    path.pathlets.push_back(pred_edge[cur]);
  std::reverse(path.pathlets.begin(), path.pathlets.end());
  return path;
}

std::vector<Path> ksp_on_view(const FeasibleView& view, NodeIndex src, NodeIndex dst,
                              Millisec latency_bound, std::size_t k) {
  const std::vector<AccessCombo> combos = feasible_combos(view, src, dst);
  std::vector<std::vector<Path>> per_combo(combos.size());
#pragma omp parallel for schedule(dynamic) if (combos.size() > 1)
  for (std::size_t i = 0; i < combos.size(); ++i)
    per_combo[i] = ksp_combo(view, combos[i], latency_bound, k);
  return merge_combo_results(per_combo, k);
}

std::vector<Path> random_walks_on_view(const FeasibleView& view, NodeIndex src, NodeIndex dst,
                                       Millisec latency_bound, std::size_t walks,
                                       std::size_t max_len, std::uint64_t seed) {
  std::vector<std::optional<Path>> outcomes(walks);
#pragma omp parallel for schedule(static)
  for (std::size_t w = 0; w < walks; ++w) {
    Rng rng(derive_seed(seed, w));
    outcomes[w] = single_walk(view, src, dst, latency_bound, max_len, rng);
  }
  return dedup_walks(outcomes);
}

namespace reference {

std::vector<Path> ksp_on_view(const FeasibleView& view, NodeIndex src, NodeIndex dst,
                              Millisec latency_bound, std::size_t k) {
  const std::vector<AccessCombo> combos = feasible_combos(view, src, dst);
  std::vector<std::vector<Path>> per_combo(combos.size());
  for (std::size_t i = 0; i < combos.size(); ++i)
    per_combo[i] = ksp_combo(view, combos[i], latency_bound, k);
  return merge_combo_results(per_combo, k);
}

std::vector<Path> random_walks_on_view(const FeasibleView& view, NodeIndex src, NodeIndex dst,
                                       Millisec latency_bound, std::size_t walks,
                                       std::size_t max_len, std::uint64_t seed) {
  std::vector<std::optional<Path>> outcomes(walks);
  for (std::size_t w = 0; w < walks; ++w) {
    Rng rng(derive_seed(seed, w));
    outcomes[w] = single_walk(view, src, dst, latency_bound, max_len, rng);
  }
  return dedup_walks(outcomes);
}

}  // namespace reference

std::vector<Path> sample_on_view(const FeasibleView& view, NodeIndex src, NodeIndex dst,
                                 Millisec latency_bound, const SamplerConfig& config) {
  std::vector<Path> candidates;
  switch (config.method) {
    case SampleMethod::dijkstra: {
      if (auto best = min_latency_on_view(view, src, dst, latency_bound))
        candidates.push_back(std::move(*best));
      break;
    }
    case SampleMethod::ksp:
      candidates = ksp_on_view(view, src, dst, latency_bound, config.k);
      break;
    case SampleMethod::random_walk:
      candidates = random_walks_on_view(view, src, dst, latency_bound, config.walks,
                                        config.max_len, config.seed);
      break;
  }
  std::sort(candidates.begin(), candidates.end(), canonical_less);
  return candidates;
}

std::optional<Path> min_latency_path(const Multigraph& graph, const std::string& src,
                                     const std::string& dst, Mbps demand, Millisec latency_bound,
                                     const std::unordered_set<PathletId>& excluded) {
  const auto [s, d] = endpoint_pair(graph, src, dst);
  const FeasibleView view(graph, demand, excluded);
  return min_latency_on_view(view, s, d, latency_bound);
}

std::vector<Path> k_shortest_paths(const Multigraph& graph, const std::string& src,
                                   const std::string& dst, Mbps demand, Millisec latency_bound,
                                   std::size_t k) {
  if (k < 1) throw std::invalid_argument("k_shortest_paths: k must be >= 1");
  const auto [s, d] = endpoint_pair(graph, src, dst);
  const FeasibleView view(graph, demand);
  return ksp_on_view(view, s, d, latency_bound, k);
}

std::vector<Path> random_walk_paths(const Multigraph& graph, const std::string& src,
                                    const std::string& dst, Mbps demand, Millisec latency_bound,
                                    std::size_t walks, std::size_t max_len, std::uint64_t seed) {
  const auto [s, d] = endpoint_pair(graph, src, dst);
  const FeasibleView view(graph, demand);
  return random_walks_on_view(view, s, d, latency_bound, walks, max_len, seed);
}

std::vector<Path> sample_paths(const Multigraph& graph, const std::string& src,
                               const std::string& dst, Mbps demand, Millisec latency_bound,
                               const SamplerConfig& config) {
  const auto [s, d] = endpoint_pair(graph, src, dst);
  const FeasibleView view(graph, demand);
  return sample_on_view(view, s, d, latency_bound, config);
}

bool policy_less(const Multigraph& graph, const Path& a, const Path& b, SelectionPolicy policy,
                 Mbps demand) {
  bool better = false;
  bool tied = false;
  switch (policy) {
    case SelectionPolicy::min_latency:
      better = a.latency_ms < b.latency_ms;
      tied = a.latency_ms == b.latency_ms;
      break;
    case SelectionPolicy::min_hops:
      better = a.hops() < b.hops();
      tied = a.hops() == b.hops();
      break;
    case SelectionPolicy::widest: {
      const Mbps ba = path_bottleneck(graph, a);
      const Mbps bb = path_bottleneck(graph, b);
      better = ba > bb;
      tied = ba == bb;
      break;
    }
    case SelectionPolicy::least_stress: {
      const StressSum sa = path_stress(graph, a, demand);
      const StressSum sb = path_stress(graph, b, demand);
      better = sa.less_than(sb);
      tied = sa.equals(sb);
      break;
    }
  }
  return better || (tied && canonical_less(a, b));
}

const Path& select_path(const Multigraph& graph, const std::vector<Path>& candidates,
                        SelectionPolicy policy, Mbps demand) {
  if (candidates.empty()) throw std::invalid_argument("select_path: no candidates");
  return *std::min_element(candidates.begin(), candidates.end(),
                           [&](const Path& a, const Path& b) {
                             return policy_less(graph, a, b, policy, demand);
                           });
}

}  // namespace ixpsim
