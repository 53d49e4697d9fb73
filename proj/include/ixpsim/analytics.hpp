#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ixpsim/ingest.hpp"
#include "ixpsim/multigraph.hpp"
#include "ixpsim/prefix_set.hpp"

namespace ixpsim {

// Complementary CDF with the ">=" convention: for each distinct value v,
// fraction of samples >= v. Values strictly increasing, fractions
// non-increasing, first fraction 1.0 when the input is non-empty.
struct CcdfPoint {
  double value = 0;
  double fraction = 0;

  bool operator==(const CcdfPoint&) const = default;
};

using Ccdf = std::vector<CcdfPoint>;

Ccdf ccdf(std::vector<double> values);

struct PairMultiplicity {
  std::string ixp_a, ixp_b;  // ixp_a < ixp_b
  std::size_t multiplicity = 0;
};

struct PairStats {
  std::vector<PairMultiplicity> pairs;  // sorted by (ixp_a, ixp_b)
  Ccdf multiplicity_ccdf;
  // Collapsed simple graph, for the baseline: per-pair direct connectivity is
  // the indicator 1, so the interesting companion is the degree distribution.
  Ccdf degree_ccdf;
  double median_multiplicity = 0;
};

// Requires at least one transit pathlet.
PairStats pair_multiplicity_stats(const Multigraph& graph);

// ASN -> announced prefixes.
using AsPrefixes = std::map<Asn, std::vector<std::string>>;

// provider ASN -> direct customers.
using AsRelationships = std::map<Asn, std::set<Asn>>;

// CSV with header "asn,prefix", one announcement per row.
AsPrefixes parse_as_prefixes(std::istream& in, const std::string& source = "<prefixes>");
AsPrefixes parse_as_prefixes_file(const std::string& path);

// "provider|customer|-1" lines; '#' comments ignored; relation codes other
// than -1 ignored. Self-edges are rejected.
AsRelationships parse_as_relationships(std::istream& in, const std::string& source = "<rel>");
AsRelationships parse_as_relationships_file(const std::string& path);

struct CoverageReport {
  PrefixSet covered;
  double fraction_of_ipv4 = 0;
  double fraction_of_announced = 0;
};

// Address space covered by the members of the anchor IXPs (plus, with
// cone=true, their direct customers). fraction_of_announced is relative to
// the union of every prefix in as_prefixes.
CoverageReport coverage(const MembershipTable& table, const AsPrefixes& as_prefixes,
                        const AsRelationships* relationships,
                        const std::set<std::string>& anchors, bool cone);

struct GreedyPick {
  std::string ixp;
  std::uint64_t covered_addresses = 0;  // cumulative after this pick
  double fraction_of_ipv4 = 0;
  double fraction_of_announced = 0;
};

// Greedy max-marginal-coverage anchor selection; ties go to the
// lexicographically smallest IXP id, zero-gain picks still fill k.
std::vector<GreedyPick> greedy_anchors(const MembershipTable& table,
                                       const AsPrefixes& as_prefixes,
                                       const AsRelationships* relationships, std::size_t k,
                                       bool cone);

namespace reference {
// Serial implementation kept as the baseline for the parallel kernel.
std::vector<GreedyPick> greedy_anchors(const MembershipTable& table,
                                       const AsPrefixes& as_prefixes,
                                       const AsRelationships* relationships, std::size_t k,
                                       bool cone);
}  // namespace reference

struct IngestSummary {
  std::size_t ixps = 0;
  std::size_t interconnections = 0;
  // Set when the snapshot is at the scale where the expected interconnection
  // count (~49k at 229 IXPs) applies and the observed count deviates by more
  // than 10%: a sign of snapshot drift, not an error.
  bool snapshot_drift = false;
};

IngestSummary summarize_ingest(const MembershipTable& table, std::size_t transit_count);

// Writers for the stats CLI outputs; deterministic formatting.
void write_pairs_csv(const PairStats& stats, std::ostream& out);
void write_ccdf_csv(const Ccdf& curve, std::ostream& out);
void write_greedy_csv(const std::vector<GreedyPick>& picks, std::ostream& out);

}  // namespace ixpsim
