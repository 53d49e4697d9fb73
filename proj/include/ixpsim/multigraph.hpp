#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace ixpsim {

using NodeIndex = std::uint32_t;
using PathletId = std::int64_t;
using Asn = std::uint32_t;
using Mbps = std::int64_t;
using Millisec = std::int64_t;

enum class PathletKind { transit, access };
enum class NodeKind { ixp, endpoint };

// A capacitated, latency-annotated edge of the substrate. Transit pathlets
// cross an ISP between two IXPs; access pathlets tie a client endpoint to an
// IXP anchor. Capacity is a single bidirectional pool.
struct Pathlet {
  PathletId id = 0;
  PathletKind kind = PathletKind::transit;
  NodeIndex a = 0;  // access: the endpoint side
  NodeIndex b = 0;  // access: the IXP side
  Asn asn = 0;
  Mbps capacity_mbps = 0;
  Millisec latency_ms = 0;
  Mbps reserved_mbps = 0;

  Mbps residual() const { return capacity_mbps - reserved_mbps; }

  NodeIndex other(NodeIndex n) const { return n == a ? b : a; }

  bool connects(NodeIndex x, NodeIndex y) const {
    return (a == x && b == y) || (a == y && b == x);
  }
};

struct Node {
  std::string name;
  NodeKind kind = NodeKind::ixp;
  std::vector<std::string> prefixes;     // endpoints only; IPv4 CIDR strings
  std::vector<std::uint32_t> adjacency;  // slots into the pathlet store
};

// IXPs and client endpoints with parallel pathlet edges between them.
// Pathlets are id-addressed; slots stay stable across removals so that
// adjacency lists and outstanding views never dangle.
class Multigraph {
 public:
  NodeIndex add_ixp(const std::string& id);
  NodeIndex add_endpoint(const std::string& id, std::vector<std::string> prefixes);

  // Errors (std::invalid_argument): duplicate pathlet id, unknown node,
  // non-positive capacity/latency, self-loop, node-kind mismatch for `kind`.
  PathletId add_transit(PathletId id, const std::string& ixp_a, const std::string& ixp_b,
                        Asn asn, Mbps capacity, Millisec latency);
  PathletId add_access(PathletId id, const std::string& endpoint, const std::string& ixp,
                       Asn asn, Mbps capacity, Millisec latency);

  void reserve(PathletId id, Mbps demand);
  void release(PathletId id, Mbps demand);

  // Removes the pathlet from the substrate (adjacency and id index). Any
  // reservation it carried disappears with it.
  void remove_pathlet(PathletId id);

  std::size_t parallel_edge_count(const std::string& node_a, const std::string& node_b) const;

  bool has_node(const std::string& id) const { return node_index_.count(id) > 0; }
  NodeIndex node_index(const std::string& id) const;
  const Node& node(NodeIndex idx) const { return nodes_[idx]; }
  std::size_t node_count() const { return nodes_.size(); }

  bool has_pathlet(PathletId id) const { return id_to_slot_.count(id) > 0; }
  const Pathlet& pathlet(PathletId id) const;

  // Access pathlet ids of an endpoint, ascending.
  std::vector<PathletId> access_pathlets(NodeIndex endpoint) const;

  std::vector<NodeIndex> ixps() const;
  std::vector<NodeIndex> endpoints() const;

  // Live pathlets in ascending id order (canonical iteration order).
  std::vector<PathletId> pathlet_ids() const;
  std::size_t pathlet_count() const { return live_count_; }
  std::size_t transit_count() const;

  template <typename F>
  void for_each_incident(NodeIndex n, F&& fn) const {
    for (const std::uint32_t slot : nodes_[n].adjacency) fn(slots_[slot]);
  }

  // Full consistency check: adjacency mirrors pathlet endpoints exactly,
  // ids unique, reservations within bounds, endpoints have access pathlets.
  void validate() const;

  // Persistent-structure equality; reservations are ignored.
  bool structurally_equal(const Multigraph& other) const;

  // Snapshot of (pathlet id, reserved) pairs, ascending by id. Used for
  // atomicity checks and undo-free rollback.
  std::vector<std::pair<PathletId, Mbps>> reservation_state() const;

 private:
  friend class FeasibleView;

  NodeIndex add_node(const std::string& id, NodeKind kind, std::vector<std::string> prefixes);
  PathletId add_pathlet_impl(PathletId id, PathletKind kind, const std::string& end_a,
                             const std::string& end_b, Asn asn, Mbps capacity, Millisec latency);
  Pathlet& pathlet_mut(PathletId id);

  std::vector<Node> nodes_;
  std::unordered_map<std::string, NodeIndex> node_index_;
  std::vector<Pathlet> slots_;
  std::vector<bool> removed_;
  std::unordered_map<PathletId, std::uint32_t> id_to_slot_;
  std::size_t live_count_ = 0;
};

// Read-only feasibility filter over a multigraph: keeps exactly the pathlets
// with residual >= demand whose id is not excluded (and, optionally, that do
// not touch an excluded node). Safe to share across threads while no
// mutation is in flight.
class FeasibleView {
 public:
  FeasibleView(const Multigraph& graph, Mbps demand,
               std::unordered_set<PathletId> excluded_pathlets = {});

  void exclude_node(NodeIndex n);

  bool admits(const Pathlet& p) const {
    if (p.residual() < demand_) return false;
    if (!excluded_pathlets_.empty() && excluded_pathlets_.count(p.id)) return false;
    if (!excluded_nodes_.empty() && (node_excluded(p.a) || node_excluded(p.b))) return false;
    return true;
  }

  bool node_excluded(NodeIndex n) const {
    return n < excluded_nodes_.size() && excluded_nodes_[n];
  }

  // Admitted pathlets incident to n, in adjacency (construction) order.
  template <typename F>
  void for_each_feasible(NodeIndex n, F&& fn) const {
    graph_->for_each_incident(n, [&](const Pathlet& p) {
      if (admits(p)) fn(p);
    });
  }

  // All admitted pathlet ids, ascending.
  std::vector<PathletId> pathlets() const;

  const Multigraph& graph() const { return *graph_; }
  Mbps demand() const { return demand_; }

 private:
  const Multigraph* graph_;
  Mbps demand_;
  std::unordered_set<PathletId> excluded_pathlets_;
  std::vector<bool> excluded_nodes_;
};

inline FeasibleView feasible_view(const Multigraph& graph, Mbps demand,
                                  std::unordered_set<PathletId> excluded = {}) {
  return FeasibleView(graph, demand, std::move(excluded));
}

}  // namespace ixpsim
