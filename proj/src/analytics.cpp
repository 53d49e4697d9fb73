#include "ixpsim/analytics.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "ixpsim/errors.hpp"

namespace ixpsim {

namespace {

constexpr double kIpv4Space = 4294967296.0;  // 2^32

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::int64_t parse_int_field(const std::string& text, const std::string& source,
                             std::size_t line_no, const std::string& what) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw DataError(source, line_no, what + " is not an integer: '" + text + "'");
  return value;
}

// Deterministic decimal formatting for CSV output.
std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// The covered AS set for a given anchor selection.
std::set<Asn> covered_ases(const MembershipTable& table, const AsRelationships* relationships,
                           const std::set<std::string>& anchors, bool cone) {
  std::set<Asn> ases;
  for (const std::string& anchor : anchors) {
    const auto it = table.find(anchor);
    if (it == table.end()) throw std::invalid_argument("unknown anchor IXP: " + anchor);
    ases.insert(it->second.begin(), it->second.end());
  }
  if (cone && relationships) {
    std::set<Asn> customers;
    for (const Asn asn : ases) {
      const auto it = relationships->find(asn);
      if (it != relationships->end()) customers.insert(it->second.begin(), it->second.end());
    }
    ases.insert(customers.begin(), customers.end());
  }
  return ases;
}

PrefixSet prefixes_of(const std::set<Asn>& ases, const AsPrefixes& as_prefixes) {
  std::vector<AddrInterval> intervals;
  for (const Asn asn : ases) {
    const auto it = as_prefixes.find(asn);
    if (it == as_prefixes.end()) continue;
    for (const std::string& cidr : it->second) intervals.push_back(parse_cidr(cidr));
  }
  return PrefixSet(std::move(intervals));
}

std::uint64_t announced_size(const AsPrefixes& as_prefixes) {
  std::vector<AddrInterval> intervals;
  for (const auto& [asn, cidrs] : as_prefixes)
    for (const std::string& cidr : cidrs) intervals.push_back(parse_cidr(cidr));
  return PrefixSet(std::move(intervals)).size();
}

// Per-IXP prefix set of its members (plus 1-hop customers when cone=true),
// precomputed once so greedy steps only merge interval lists.
std::vector<std::pair<std::string, PrefixSet>> per_ixp_sets(const MembershipTable& table,
                                                            const AsPrefixes& as_prefixes,
                                                            const AsRelationships* relationships,
                                                            bool cone) {
  std::vector<std::pair<std::string, PrefixSet>> out;
  out.reserve(table.size());
  for (const auto& [ixp, members] : table) {
    const std::set<Asn> ases = covered_ases(table, relationships, {ixp}, cone);
    out.emplace_back(ixp, prefixes_of(ases, as_prefixes));
  }
  return out;
}

template <typename GainLoop>
std::vector<GreedyPick> greedy_anchor_loop(const MembershipTable& table,
                                           const AsPrefixes& as_prefixes,
                                           const AsRelationships* relationships, std::size_t k,
                                           bool cone, GainLoop&& compute_gains) {
  if (k < 1 || k > table.size())
    throw std::invalid_argument("greedy_anchors: k out of range [1, #IXPs]");

  const auto candidates = per_ixp_sets(table, as_prefixes, relationships, cone);
  const std::uint64_t announced = announced_size(as_prefixes);

  std::vector<GreedyPick> picks;
  std::vector<bool> taken(candidates.size(), false);
  PrefixSet covered;
  for (std::size_t round = 0; round < k; ++round) {
    std::vector<std::int64_t> gains(candidates.size(), -1);
    compute_gains(candidates, taken, covered, gains);

    // Deterministic argmax: highest gain, ties to the lexicographically
    // smallest IXP id (candidates are already sorted by id).
    std::size_t best = candidates.size();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (taken[i]) continue;
      if (best == candidates.size() || gains[i] > gains[best]) best = i;
    }
    taken[best] = true;
    covered.merge(candidates[best].second);
    const std::uint64_t size = covered.size();
    picks.push_back({candidates[best].first, size, static_cast<double>(size) / kIpv4Space,
                     announced == 0 ? 0.0
                                    : static_cast<double>(size) / static_cast<double>(announced)});
  }
  return picks;
}

}  // namespace

Ccdf ccdf(std::vector<double> values) {
  Ccdf out;
  if (values.empty()) return out;
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  std::size_t i = 0;
  while (i < values.size()) {
    std::size_t j = i;
    while (j < values.size() && values[j] == values[i]) ++j;
    // Everything at index >= i is >= values[i].
    out.push_back({values[i], static_cast<double>(values.size() - i) / n});
    i = j;
  }
  return out;
}

PairStats pair_multiplicity_stats(const Multigraph& graph) {
  std::map<std::pair<std::string, std::string>, std::size_t> counts;
  for (const PathletId id : graph.pathlet_ids()) {
    const Pathlet& p = graph.pathlet(id);
    if (p.kind != PathletKind::transit) continue;
    std::string a = graph.node(p.a).name;
    std::string b = graph.node(p.b).name;
    if (b < a) std::swap(a, b);
    ++counts[{a, b}];
  }
  if (counts.empty())
    throw std::invalid_argument("pair_multiplicity_stats: graph has no transit pathlets");

  PairStats stats;
  std::vector<double> multiplicities;
  std::map<std::string, std::size_t> degree;
  for (const auto& [pair, count] : counts) {
    stats.pairs.push_back({pair.first, pair.second, count});
    multiplicities.push_back(static_cast<double>(count));
    ++degree[pair.first];
    ++degree[pair.second];
  }
  stats.multiplicity_ccdf = ccdf(multiplicities);

  std::vector<double> degrees;
  for (const auto& [ixp, d] : degree) degrees.push_back(static_cast<double>(d));
  stats.degree_ccdf = ccdf(degrees);

  std::sort(multiplicities.begin(), multiplicities.end());
  const std::size_t n = multiplicities.size();
  stats.median_multiplicity =
      n % 2 == 1 ? multiplicities[n / 2] : (multiplicities[n / 2 - 1] + multiplicities[n / 2]) / 2;
  return stats;
}

AsPrefixes parse_as_prefixes(std::istream& in, const std::string& source) {
  AsPrefixes table;
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != "asn,prefix")
        throw DataError(source, line_no, "expected header 'asn,prefix', got '" + line + "'");
      saw_header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
      throw DataError(source, line_no, "expected 2 columns");
    const std::int64_t asn = parse_int_field(line.substr(0, comma), source, line_no, "asn");
    if (asn <= 0 || asn > 0xFFFFFFFFLL) throw DataError(source, line_no, "asn out of range");
    const std::string prefix = line.substr(comma + 1);
    try {
      parse_cidr(prefix);
    } catch (const DataError& e) {
      throw DataError(source, line_no, e.what());
    }
    table[static_cast<Asn>(asn)].push_back(prefix);
  }
  if (!saw_header) throw DataError(source, 1, "missing header 'asn,prefix'");
  return table;
}

AsPrefixes parse_as_prefixes_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open prefix file: " + path);
  return parse_as_prefixes(in, path);
}

AsRelationships parse_as_relationships(std::istream& in, const std::string& source) {
  AsRelationships rel;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty() || line[0] == '#') continue;
    const auto bar1 = line.find('|');
    const auto bar2 = bar1 == std::string::npos ? std::string::npos : line.find('|', bar1 + 1);
    if (bar1 == std::string::npos || bar2 == std::string::npos)
      throw DataError(source, line_no, "expected 'provider|customer|code'");
    const std::int64_t provider =
        parse_int_field(line.substr(0, bar1), source, line_no, "provider asn");
    const std::int64_t customer =
        parse_int_field(line.substr(bar1 + 1, bar2 - bar1 - 1), source, line_no, "customer asn");
    const std::int64_t code =
        parse_int_field(line.substr(bar2 + 1), source, line_no, "relation code");
    if (code != -1) continue;  // only provider-to-customer edges matter here
    if (provider <= 0 || customer <= 0 || provider > 0xFFFFFFFFLL || customer > 0xFFFFFFFFLL)
      throw DataError(source, line_no, "asn out of range");
    if (provider == customer) throw DataError(source, line_no, "self-edge rejected");
    rel[static_cast<Asn>(provider)].insert(static_cast<Asn>(customer));
  }
  return rel;
}

AsRelationships parse_as_relationships_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open relationships file: " + path);
  return parse_as_relationships(in, path);
}

CoverageReport coverage(const MembershipTable& table, const AsPrefixes& as_prefixes,
                        const AsRelationships* relationships,
                        const std::set<std::string>& anchors, bool cone) {
  const std::set<Asn> ases = covered_ases(table, relationships, anchors, cone);
  CoverageReport report;
  report.covered = prefixes_of(ases, as_prefixes);
  const std::uint64_t size = report.covered.size();
  report.fraction_of_ipv4 = static_cast<double>(size) / kIpv4Space;
  const std::uint64_t announced = announced_size(as_prefixes);
  report.fraction_of_announced =
      announced == 0 ? 0.0 : static_cast<double>(size) / static_cast<double>(announced);
  return report;
}

std::vector<GreedyPick> greedy_anchors(const MembershipTable& table, const AsPrefixes& as_prefixes,
                                       const AsRelationships* relationships, std::size_t k,
                                       bool cone) {
  return greedy_anchor_loop(
      table, as_prefixes, relationships, k, cone,
      [](const auto& candidates, const std::vector<bool>& taken, const PrefixSet& covered,
         std::vector<std::int64_t>& gains) {
        const std::int64_t base = static_cast<std::int64_t>(covered.size());
#pragma omp parallel for schedule(dynamic)
        for (std::size_t i = 0; i < candidates.size(); ++i) {
          if (taken[i]) continue;
          PrefixSet merged = covered;
          merged.merge(candidates[i].second);
          gains[i] = static_cast<std::int64_t>(merged.size()) - base;
        }
      });
}

namespace reference {

std::vector<GreedyPick> greedy_anchors(const MembershipTable& table, const AsPrefixes& as_prefixes,
                                       const AsRelationships* relationships, std::size_t k,
                                       bool cone) {
  return greedy_anchor_loop(
      table, as_prefixes, relationships, k, cone,
      [](const auto& candidates, const std::vector<bool>& taken, const PrefixSet& covered,
         std::vector<std::int64_t>& gains) {
        const std::int64_t base = static_cast<std::int64_t>(covered.size());
        for (std::size_t i = 0; i < candidates.size(); ++i) {
          if (taken[i]) continue;
          PrefixSet merged = covered;
          merged.merge(candidates[i].second);
          gains[i] = static_cast<std::int64_t>(merged.size()) - base;
        }
      });
}

}  // namespace reference

IngestSummary summarize_ingest(const MembershipTable& table, std::size_t transit_count) {
  IngestSummary summary;
  summary.ixps = table.size();
  summary.interconnections = transit_count;
  // Published EuroIX-derived snapshots at 229 IXPs carry ~49k
  // interconnections; beyond +-10% of that we flag drift so users compare
  // snapshots, not correctness.
  if (summary.ixps >= 200) {
    constexpr double kExpected = 49000.0;
    const double deviation =
        (static_cast<double>(transit_count) - kExpected) / kExpected;
    summary.snapshot_drift = deviation > 0.10 || deviation < -0.10;
  }
  return summary;
}

void write_pairs_csv(const PairStats& stats, std::ostream& out) {
  out << "ixp_a,ixp_b,multiplicity\n";
  for (const PairMultiplicity& p : stats.pairs)
    out << p.ixp_a << ',' << p.ixp_b << ',' << p.multiplicity << '\n';
}

void write_ccdf_csv(const Ccdf& curve, std::ostream& out) {
  out << "value,fraction\n";
  for (const CcdfPoint& point : curve)
    out << format_double(point.value) << ',' << format_double(point.fraction) << '\n';
}

void write_greedy_csv(const std::vector<GreedyPick>& picks, std::ostream& out) {
  out << "rank,ixp,covered_addresses,fraction_ipv4,fraction_announced\n";
  for (std::size_t i = 0; i < picks.size(); ++i)
    out << (i + 1) << ',' << picks[i].ixp << ',' << picks[i].covered_addresses << ','
        << format_double(picks[i].fraction_of_ipv4) << ','
        << format_double(picks[i].fraction_of_announced) << '\n';
}

}  // namespace ixpsim
