#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ixpsim/multigraph.hpp"

namespace ixpsim {

// IXP id -> member ASNs. Ordered containers keep every traversal canonical.
using MembershipTable = std::map<std::string, std::set<Asn>>;

// Attribute model for synthesized pathlets: a constant or an inclusive
// integer range drawn uniformly.
struct AttributeModel {
  std::int64_t lo = 0;
  std::int64_t hi = 0;

  static AttributeModel constant(std::int64_t c) { return {c, c}; }
  static AttributeModel uniform(std::int64_t lo, std::int64_t hi);

  // "constant:N" or "uniform:LO:HI"
  static AttributeModel parse(const std::string& text);

  bool is_constant() const { return lo == hi; }
};

struct PathletSynthesisPolicy {
  AttributeModel capacity = AttributeModel::uniform(100, 1000);  // Mbps
  AttributeModel latency = AttributeModel::uniform(5, 50);       // ms
  std::uint64_t seed = 0;
};

// Parses membership CSV (header "ixp_id,asn", one membership per row,
// duplicates collapsed). Throws DataError with a line number on malformed
// rows. `source` names the input in error messages.
MembershipTable parse_membership(std::istream& in, const std::string& source = "<membership>");
MembershipTable parse_membership_file(const std::string& path);

// One transit pathlet per (unordered IXP pair, shared member ASN).
// Attributes are drawn deterministically under the policy seed after sorting
// pathlets by (min node id, max node id, asn), so the result is independent
// of input row order. Pathlet ids are assigned 0..n-1 in that same order.
// The result carries no endpoints; scenarios attach them separately.
Multigraph build_multigraph(const MembershipTable& table, const PathletSynthesisPolicy& policy);

// Brute-force transit-edge count: sum of |members(A) ∩ members(B)| over
// unordered IXP pairs. Independent of build_multigraph's construction route.
std::size_t pairwise_intersection_count(const MembershipTable& table);

// Attaches `count` synthetic endpoints ("E0".."E<count-1>") for simulation
// scenarios. Each endpoint gets one access pathlet to a seeded-random IXP and
// one synthetic IPv4 prefix (random /12../22) so that prefix-weighted draws
// have mass. Access attributes come from the policy models; ids continue
// after the current maximum pathlet id.
void attach_synthetic_endpoints(Multigraph& graph, std::size_t count,
                                const PathletSynthesisPolicy& policy);

}  // namespace ixpsim
