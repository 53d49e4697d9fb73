#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ixpsim/multigraph.hpp"

namespace ixpsim {

// An end-to-end route: source access pathlet, zero or more transit pathlets,
// destination access pathlet. Node-simple by construction; latency is the
// sum over pathlets and is cached.
struct Path {
  std::vector<PathletId> pathlets;
  Millisec latency_ms = 0;

  std::size_t hops() const { return pathlets.size(); }

  bool operator==(const Path&) const = default;
};

// Order used by k-shortest-path output: latency, then lexicographic pathlet
// id sequence.
bool latency_lex_less(const Path& a, const Path& b);

// Total candidate order used when pooling and tie-breaking selections:
// latency, then hop count, then lexicographic pathlet id sequence.
bool canonical_less(const Path& a, const Path& b);

enum class SampleMethod { dijkstra, ksp, random_walk };

struct SamplerConfig {
  SampleMethod method = SampleMethod::ksp;
  std::size_t k = 4;           // ksp
  std::size_t walks = 100;     // random_walk
  std::size_t max_len = 10;    // random_walk: max pathlets per walk
  std::uint64_t seed = 0;
};

enum class SelectionPolicy { min_latency, min_hops, widest, least_stress };

SampleMethod parse_sample_method(const std::string& text);
SelectionPolicy parse_selection_policy(const std::string& text);
std::string to_string(SampleMethod method);
std::string to_string(SelectionPolicy policy);

// --- view-level kernels -----------------------------------------------------
// The engine composes these over feasibility views (which may exclude
// pathlets and nodes, e.g. for disjoint backup sampling). src/dst are
// endpoint node indices. Sampling only ever walks src -> IXPs -> dst; other
// endpoints are never traversed.

std::optional<Path> min_latency_on_view(const FeasibleView& view, NodeIndex src, NodeIndex dst,
                                        Millisec latency_bound);

std::vector<Path> ksp_on_view(const FeasibleView& view, NodeIndex src, NodeIndex dst,
                              Millisec latency_bound, std::size_t k);

std::vector<Path> random_walks_on_view(const FeasibleView& view, NodeIndex src, NodeIndex dst,
                                       Millisec latency_bound, std::size_t walks,
                                       std::size_t max_len, std::uint64_t seed);

std::vector<Path> sample_on_view(const FeasibleView& view, NodeIndex src, NodeIndex dst,
                                 Millisec latency_bound, const SamplerConfig& config);

namespace reference {
// Serial baselines for the parallel kernels (identical results by contract).
std::vector<Path> ksp_on_view(const FeasibleView& view, NodeIndex src, NodeIndex dst,
                              Millisec latency_bound, std::size_t k);
std::vector<Path> random_walks_on_view(const FeasibleView& view, NodeIndex src, NodeIndex dst,
                                       Millisec latency_bound, std::size_t walks,
                                       std::size_t max_len, std::uint64_t seed);
}  // namespace reference

// --- endpoint-level operations ----------------------------------------------

// Minimum-total-latency feasible node-simple path, or nullopt when none meets
// the bound. Among parallel edges only the minimum-latency feasible one is
// relaxed (ties to the smaller pathlet id).
std::optional<Path> min_latency_path(const Multigraph& graph, const std::string& src,
                                     const std::string& dst, Mbps demand, Millisec latency_bound,
                                     const std::unordered_set<PathletId>& excluded = {});

// The k feasible node-simple paths of smallest latency, non-decreasing, ties
// by lexicographic pathlet id sequence. Parallel edges are distinct choices.
std::vector<Path> k_shortest_paths(const Multigraph& graph, const std::string& src,
                                   const std::string& dst, Mbps demand, Millisec latency_bound,
                                   std::size_t k);

// `walks` independent seeded random walks; returns the deduplicated walks
// that reached dst within the bound, in first-discovery order.
std::vector<Path> random_walk_paths(const Multigraph& graph, const std::string& src,
                                    const std::string& dst, Mbps demand, Millisec latency_bound,
                                    std::size_t walks, std::size_t max_len, std::uint64_t seed);

// Dispatches on config.method; output sorted by the canonical candidate
// order. The dijkstra method yields at most one candidate.
std::vector<Path> sample_paths(const Multigraph& graph, const std::string& src,
                               const std::string& dst, Mbps demand, Millisec latency_bound,
                               const SamplerConfig& config);

// Strict weak order "a is preferred to b" under the policy. widest maximizes
// the bottleneck residual; least_stress minimizes the sum of demand/residual
// compared exactly (no floating point). Every policy breaks ties by latency,
// then hop count, then lexicographic pathlet ids.
bool policy_less(const Multigraph& graph, const Path& a, const Path& b, SelectionPolicy policy,
                 Mbps demand);

// Applies the selection policy over non-empty candidates.
const Path& select_path(const Multigraph& graph, const std::vector<Path>& candidates,
                        SelectionPolicy policy, Mbps demand);

}  // namespace ixpsim
