#include "ixpsim/multigraph.hpp"

#include <algorithm>
#include <stdexcept>

namespace ixpsim {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

}  // namespace

NodeIndex Multigraph::add_node(const std::string& id, NodeKind kind,
                               std::vector<std::string> prefixes) {
  if (id.empty()) fail("node id must be non-empty");
  if (node_index_.count(id)) fail("duplicate node id: " + id);
  const NodeIndex idx = static_cast<NodeIndex>(nodes_.size());
  nodes_.push_back(Node{id, kind, std::move(prefixes), {}});
  node_index_.emplace(id, idx);
  return idx;
}

NodeIndex Multigraph::add_ixp(const std::string& id) {
  return add_node(id, NodeKind::ixp, {});
}

NodeIndex Multigraph::add_endpoint(const std::string& id, std::vector<std::string> prefixes) {
  return add_node(id, NodeKind::endpoint, std::move(prefixes));
}

PathletId Multigraph::add_pathlet_impl(PathletId id, PathletKind kind, const std::string& end_a,
                                       const std::string& end_b, Asn asn, Mbps capacity,
                                       Millisec latency) {
  if (id < 0) fail("pathlet id must be non-negative");
  if (id_to_slot_.count(id)) fail("duplicate pathlet id: " + std::to_string(id));
  const auto it_a = node_index_.find(end_a);
  const auto it_b = node_index_.find(end_b);
  if (it_a == node_index_.end()) fail("unknown node: " + end_a);
  if (it_b == node_index_.end()) fail("unknown node: " + end_b);
  if (it_a->second == it_b->second) fail("self-loop pathlet rejected: " + end_a);
  if (capacity <= 0) fail("capacity must be positive");
  if (latency <= 0) fail("latency must be positive");
  if (asn == 0) fail("asn must be positive");

  const NodeIndex na = it_a->second;
  const NodeIndex nb = it_b->second;
  if (kind == PathletKind::transit) {
    if (nodes_[na].kind != NodeKind::ixp || nodes_[nb].kind != NodeKind::ixp)
      fail("transit pathlet must connect two IXPs");
  } else {
    if (nodes_[na].kind != NodeKind::endpoint || nodes_[nb].kind != NodeKind::ixp)
      fail("access pathlet must connect an endpoint and an IXP");
  }

  const std::uint32_t slot = static_cast<std::uint32_t>(slots_.size());
  slots_.push_back(Pathlet{id, kind, na, nb, asn, capacity, latency, 0});
  removed_.push_back(false);
  id_to_slot_.emplace(id, slot);
  nodes_[na].adjacency.push_back(slot);
  nodes_[nb].adjacency.push_back(slot);
  ++live_count_;
  return id;
}

PathletId Multigraph::add_transit(PathletId id, const std::string& ixp_a, const std::string& ixp_b,
                                  Asn asn, Mbps capacity, Millisec latency) {
  return add_pathlet_impl(id, PathletKind::transit, ixp_a, ixp_b, asn, capacity, latency);
}

PathletId Multigraph::add_access(PathletId id, const std::string& endpoint, const std::string& ixp,
                                 Asn asn, Mbps capacity, Millisec latency) {
  return add_pathlet_impl(id, PathletKind::access, endpoint, ixp, asn, capacity, latency);
}

Pathlet& Multigraph::pathlet_mut(PathletId id) {
  const auto it = id_to_slot_.find(id);
  if (it == id_to_slot_.end()) fail("unknown pathlet id: " + std::to_string(id));
  return slots_[it->second];
}

const Pathlet& Multigraph::pathlet(PathletId id) const {
  const auto it = id_to_slot_.find(id);
  if (it == id_to_slot_.end()) fail("unknown pathlet id: " + std::to_string(id));
  return slots_[it->second];
}

void Multigraph::reserve(PathletId id, Mbps demand) {
  Pathlet& p = pathlet_mut(id);
  if (demand <= 0) fail("reserve demand must be positive");
  if (p.residual() < demand)
    fail("insufficient residual on pathlet " + std::to_string(id) + ": residual " +
         std::to_string(p.residual()) + " < demand " + std::to_string(demand));
  p.reserved_mbps += demand;
}

void Multigraph::release(PathletId id, Mbps demand) {
  Pathlet& p = pathlet_mut(id);
  if (demand <= 0) fail("release demand must be positive");
  if (p.reserved_mbps < demand)
    fail("release exceeds reservation on pathlet " + std::to_string(id));
  p.reserved_mbps -= demand;
}

void Multigraph::remove_pathlet(PathletId id) {
  const auto it = id_to_slot_.find(id);
  if (it == id_to_slot_.end()) fail("unknown pathlet id: " + std::to_string(id));
  const std::uint32_t slot = it->second;
  for (const NodeIndex n : {slots_[slot].a, slots_[slot].b}) {
    auto& adj = nodes_[n].adjacency;
    adj.erase(std::remove(adj.begin(), adj.end(), slot), adj.end());
  }
  removed_[slot] = true;
  id_to_slot_.erase(it);
  --live_count_;
}

NodeIndex Multigraph::node_index(const std::string& id) const {
  const auto it = node_index_.find(id);
  if (it == node_index_.end()) fail("unknown node: " + id);
  return it->second;
}

std::size_t Multigraph::parallel_edge_count(const std::string& node_a,
                                            const std::string& node_b) const {
  const NodeIndex na = node_index(node_a);
  const NodeIndex nb = node_index(node_b);
  if (na == nb) return 0;
  std::size_t count = 0;
  for (const std::uint32_t slot : nodes_[na].adjacency)
    if (slots_[slot].connects(na, nb)) ++count;
  return count;
}

std::vector<PathletId> Multigraph::access_pathlets(NodeIndex endpoint) const {
  std::vector<PathletId> out;
  for (const std::uint32_t slot : nodes_[endpoint].adjacency)
    if (slots_[slot].kind == PathletKind::access) out.push_back(slots_[slot].id);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<NodeIndex> Multigraph::ixps() const {
  std::vector<NodeIndex> out;
  for (NodeIndex i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].kind == NodeKind::ixp) out.push_back(i);
  return out;
}

std::vector<NodeIndex> Multigraph::endpoints() const {
  std::vector<NodeIndex> out;
  for (NodeIndex i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].kind == NodeKind::endpoint) out.push_back(i);
  return out;
}

std::vector<PathletId> Multigraph::pathlet_ids() const {
  std::vector<PathletId> out;
  out.reserve(live_count_);
  for (std::size_t s = 0; s < slots_.size(); ++s)
    if (!removed_[s]) out.push_back(slots_[s].id);
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t Multigraph::transit_count() const {
  std::size_t count = 0;
  for (std::size_t s = 0; s < slots_.size(); ++s)
    if (!removed_[s] && slots_[s].kind == PathletKind::transit) ++count;
  return count;
}

void Multigraph::validate() const {
  // Adjacency lists must mirror pathlet endpoints exactly.
  std::vector<std::size_t> seen(slots_.size(), 0);
  for (NodeIndex n = 0; n < nodes_.size(); ++n) {
    for (const std::uint32_t slot : nodes_[n].adjacency) {
      if (slot >= slots_.size() || removed_[slot])
        throw std::logic_error("adjacency references a removed pathlet");
      const Pathlet& p = slots_[slot];
      if (p.a != n && p.b != n)
        throw std::logic_error("adjacency references a pathlet of another node");
      ++seen[slot];
    }
  }
  for (std::size_t s = 0; s < slots_.size(); ++s) {
    if (removed_[s]) {
      if (seen[s] != 0) throw std::logic_error("removed pathlet still adjacent");
      continue;
    }
    if (seen[s] != 2) throw std::logic_error("pathlet not adjacent to exactly its two endpoints");
    const Pathlet& p = slots_[s];
    if (p.reserved_mbps < 0 || p.reserved_mbps > p.capacity_mbps)
      throw std::logic_error("reservation outside [0, capacity]");
    if (p.a == p.b) throw std::logic_error("self-loop pathlet");
  }
  for (const Node& node : nodes_) {
    if (node.kind == NodeKind::endpoint) {
      const bool has_access = std::any_of(
          node.adjacency.begin(), node.adjacency.end(),
          [&](std::uint32_t s) { return slots_[s].kind == PathletKind::access; });
      if (!has_access) throw std::logic_error("endpoint without access pathlet: " + node.name);
    }
  }
}

bool Multigraph::structurally_equal(const Multigraph& other) const {
  if (nodes_.size() != other.nodes_.size()) return false;
  for (const Node& n : nodes_) {
    const auto it = other.node_index_.find(n.name);
    if (it == other.node_index_.end()) return false;
    const Node& o = other.nodes_[it->second];
    if (n.kind != o.kind) return false;
    auto sorted = [](std::vector<std::string> v) {
      std::sort(v.begin(), v.end());
      return v;
    };
    if (sorted(n.prefixes) != sorted(o.prefixes)) return false;
  }
  if (live_count_ != other.live_count_) return false;
  for (const PathletId id : pathlet_ids()) {
    if (!other.has_pathlet(id)) return false;
    const Pathlet& p = pathlet(id);
    const Pathlet& q = other.pathlet(id);
    if (p.kind != q.kind || p.asn != q.asn || p.capacity_mbps != q.capacity_mbps ||
        p.latency_ms != q.latency_ms)
      return false;
    const std::string& pa = nodes_[p.a].name;
    const std::string& pb = nodes_[p.b].name;
    const std::string& qa = other.nodes_[q.a].name;
    const std::string& qb = other.nodes_[q.b].name;
    if (!((pa == qa && pb == qb) || (pa == qb && pb == qa))) return false;
  }
  return true;
}

std::vector<std::pair<PathletId, Mbps>> Multigraph::reservation_state() const {
  std::vector<std::pair<PathletId, Mbps>> out;
  out.reserve(live_count_);
  for (std::size_t s = 0; s < slots_.size(); ++s)
    if (!removed_[s]) out.emplace_back(slots_[s].id, slots_[s].reserved_mbps);
  std::sort(out.begin(), out.end());
  return out;
}

FeasibleView::FeasibleView(const Multigraph& graph, Mbps demand,
                           std::unordered_set<PathletId> excluded_pathlets)
    : graph_(&graph), demand_(demand), excluded_pathlets_(std::move(excluded_pathlets)) {
  if (demand <= 0) throw std::invalid_argument("view demand must be positive");
}

void FeasibleView::exclude_node(NodeIndex n) {
  if (excluded_nodes_.size() < graph_->node_count())
    excluded_nodes_.resize(graph_->node_count(), false);
  excluded_nodes_[n] = true;
}

std::vector<PathletId> FeasibleView::pathlets() const {
  std::vector<PathletId> out;
  for (const PathletId id : graph_->pathlet_ids())
    if (admits(graph_->pathlet(id))) out.push_back(id);
  return out;
}

}  // namespace ixpsim
