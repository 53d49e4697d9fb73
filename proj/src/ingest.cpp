#include "ixpsim/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>
#include <tuple>

#include "ixpsim/errors.hpp"
#include "ixpsim/rng.hpp"

namespace ixpsim {

namespace {

// Splits one CSV line on commas. No quoting: the formats here carry opaque
// tokens and integers only.
std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (const char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  fields.push_back(field);
  return fields;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::int64_t parse_positive_int(const std::string& text, const std::string& source,
                                std::size_t line_no, const std::string& what) {
  std::int64_t value = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw DataError(source, line_no, what + " is not an integer: '" + text + "'");
  if (value <= 0) throw DataError(source, line_no, what + " must be positive: '" + text + "'");
  return value;
}

}  // namespace

AttributeModel AttributeModel::uniform(std::int64_t lo, std::int64_t hi) {
  if (lo <= 0 || hi < lo)
    throw std::invalid_argument("uniform attribute range requires 0 < lo <= hi");
  return {lo, hi};
}

AttributeModel AttributeModel::parse(const std::string& text) {
  const auto bad = [&] {
    return DataError("attribute model must be 'constant:N' or 'uniform:LO:HI', got '" + text +
                     "'");
  };
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw bad();
  const std::string kind = text.substr(0, colon);
  const std::string rest = text.substr(colon + 1);
  const auto to_int = [&](const std::string& s) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || v <= 0) throw bad();
    return v;
  };
  if (kind == "constant") {
    if (rest.find(':') != std::string::npos) throw bad();
    return constant(to_int(rest));
  }
  if (kind == "uniform") {
    const auto colon2 = rest.find(':');
    if (colon2 == std::string::npos) throw bad();
    const std::int64_t lo = to_int(rest.substr(0, colon2));
    const std::int64_t hi = to_int(rest.substr(colon2 + 1));
    if (hi < lo) throw bad();
    return {lo, hi};
  }
  throw bad();
}

MembershipTable parse_membership(std::istream& in, const std::string& source) {
  MembershipTable table;
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != "ixp_id,asn")
        throw DataError(source, line_no, "expected header 'ixp_id,asn', got '" + line + "'");
      saw_header = true;
      continue;
    }
    const auto fields = split_csv(line);
    if (fields.size() != 2)
      throw DataError(source, line_no,
                      "expected 2 columns, got " + std::to_string(fields.size()));
    if (fields[0].empty()) throw DataError(source, line_no, "empty ixp_id");
    const std::int64_t asn = parse_positive_int(fields[1], source, line_no, "asn");
    if (asn > 0xFFFFFFFFLL) throw DataError(source, line_no, "asn out of range: " + fields[1]);
    table[fields[0]].insert(static_cast<Asn>(asn));
  }
  if (!saw_header) throw DataError(source, 1, "missing header 'ixp_id,asn'");
  return table;
}

MembershipTable parse_membership_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open membership file: " + path);
  return parse_membership(in, path);
}

Multigraph build_multigraph(const MembershipTable& table, const PathletSynthesisPolicy& policy) {
  if (table.empty()) throw std::invalid_argument("membership table is empty");

  Multigraph graph;
  for (const auto& [ixp, members] : table) graph.add_ixp(ixp);

  // Invert the table: for each ASN, the sorted list of IXPs it belongs to.
  // Every pair within one ASN's list yields one transit pathlet.
  std::map<Asn, std::vector<std::string>> asn_to_ixps;
  for (const auto& [ixp, members] : table)
    for (const Asn asn : members) asn_to_ixps[asn].push_back(ixp);

  struct Planned {
    std::string a, b;  // a < b
    Asn asn;
  };
  std::vector<Planned> planned;
  for (const auto& [asn, ixps] : asn_to_ixps) {
    for (std::size_t i = 0; i < ixps.size(); ++i)
      for (std::size_t j = i + 1; j < ixps.size(); ++j)
        planned.push_back({ixps[i], ixps[j], asn});
  }
  std::sort(planned.begin(), planned.end(), [](const Planned& x, const Planned& y) {
    return std::tie(x.a, x.b, x.asn) < std::tie(y.a, y.b, y.asn);
  });

  Rng rng(derive_seed(policy.seed, rng_stream::attribute_synthesis));
  PathletId next_id = 0;
  for (const Planned& p : planned) {
    const Mbps capacity = rng.uniform_int(policy.capacity.lo, policy.capacity.hi);
    const Millisec latency = rng.uniform_int(policy.latency.lo, policy.latency.hi);
    graph.add_transit(next_id++, p.a, p.b, p.asn, capacity, latency);
  }
  return graph;
}

std::size_t pairwise_intersection_count(const MembershipTable& table) {
  std::size_t total = 0;
  for (auto it_a = table.begin(); it_a != table.end(); ++it_a) {
    for (auto it_b = std::next(it_a); it_b != table.end(); ++it_b) {
      const auto& small = it_a->second.size() <= it_b->second.size() ? it_a->second : it_b->second;
      const auto& large = it_a->second.size() <= it_b->second.size() ? it_b->second : it_a->second;
      for (const Asn asn : small)
        if (large.count(asn)) ++total;
    }
  }
  return total;
}

void attach_synthetic_endpoints(Multigraph& graph, std::size_t count,
                                const PathletSynthesisPolicy& policy) {
  const auto ixps = graph.ixps();
  if (ixps.empty()) throw std::invalid_argument("cannot attach endpoints: graph has no IXPs");

  PathletId next_id = 0;
  for (const PathletId id : graph.pathlet_ids()) next_id = std::max(next_id, id + 1);

  Rng rng(derive_seed(policy.seed, rng_stream::endpoint_synthesis));
  for (std::size_t i = 0; i < count; ++i) {
    // One prefix per endpoint, length 12..22, out of 10.0.0.0/8-ish space.
    const int len = static_cast<int>(rng.uniform_int(12, 22));
    const std::uint32_t base =
        (10u << 24) | (static_cast<std::uint32_t>(rng.below(1u << 16)) << 8);
    const std::uint32_t mask = len == 0 ? 0 : ~std::uint32_t{0} << (32 - len);
    const std::uint32_t addr = base & mask;
    std::ostringstream prefix;
    prefix << ((addr >> 24) & 0xFF) << '.' << ((addr >> 16) & 0xFF) << '.' << ((addr >> 8) & 0xFF)
           << '.' << (addr & 0xFF) << '/' << len;

    const std::string name = "E" + std::to_string(i);
    graph.add_endpoint(name, {prefix.str()});
    const NodeIndex anchor = ixps[rng.below(ixps.size())];
    const Mbps capacity = rng.uniform_int(policy.capacity.lo, policy.capacity.hi);
    const Millisec latency = rng.uniform_int(policy.latency.lo, policy.latency.hi);
    // Synthetic access ASN: distinct per endpoint, outside the transit range
    // is not required, only positivity.
    graph.add_access(next_id++, name, graph.node(anchor).name,
                     static_cast<Asn>(4200000000u - i), capacity, latency);
  }
}

}  // namespace ixpsim
