#include "ixpsim/graph_json.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <set>

#include <json.hpp>

#include "ixpsim/errors.hpp"
#include "ixpsim/prefix_set.hpp"

namespace ixpsim {

using nlohmann::json;

namespace {

json canonical_json(const Multigraph& graph) {
  json out;

  std::vector<std::string> ixp_names;
  for (const NodeIndex n : graph.ixps()) ixp_names.push_back(graph.node(n).name);
  std::sort(ixp_names.begin(), ixp_names.end());
  out["ixps"] = ixp_names;

  std::vector<NodeIndex> endpoints = graph.endpoints();
  std::sort(endpoints.begin(), endpoints.end(), [&](NodeIndex x, NodeIndex y) {
    return graph.node(x).name < graph.node(y).name;
  });
  json eps = json::array();
  for (const NodeIndex n : endpoints) {
    const Node& node = graph.node(n);
    std::vector<std::string> prefixes = node.prefixes;
    std::sort(prefixes.begin(), prefixes.end());
    eps.push_back(
        {{"id", node.name}, {"prefixes", prefixes}, {"access_pathlets", graph.access_pathlets(n)}});
  }
  out["endpoints"] = eps;

  json pathlets = json::array();
  for (const PathletId id : graph.pathlet_ids()) {
    const Pathlet& p = graph.pathlet(id);
    std::string a = graph.node(p.a).name;
    std::string b = graph.node(p.b).name;
    if (p.kind == PathletKind::transit && b < a) std::swap(a, b);
    pathlets.push_back({{"id", p.id},
                        {"kind", p.kind == PathletKind::transit ? "transit" : "access"},
                        {"a", a},
                        {"b", b},
                        {"asn", p.asn},
                        {"capacity_mbps", p.capacity_mbps},
                        {"latency_ms", p.latency_ms}});
  }
  out["pathlets"] = pathlets;
  return out;
}

[[noreturn]] void schema_error(const std::string& source, const std::string& what) {
  throw DataError(source + ": " + what);
}

}  // namespace

std::string save_graph(const Multigraph& graph) {
  graph.validate();
  return canonical_json(graph).dump(2) + "\n";
}

void save_graph_file(const Multigraph& graph, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + path);
  out << save_graph(graph);
  if (!out) throw DataError("write failed: " + path);
}

Multigraph load_graph(std::istream& in, const std::string& source) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError(source + ": " + e.what());
  }

  try {
    if (!doc.is_object()) schema_error(source, "top level must be an object");
    for (const char* key : {"ixps", "endpoints", "pathlets"})
      if (!doc.contains(key) || !doc[key].is_array())
        schema_error(source, std::string("missing or non-array key '") + key + "'");

    Multigraph graph;
    for (const auto& ixp : doc["ixps"]) {
      if (!ixp.is_string()) schema_error(source, "ixps entries must be strings");
      graph.add_ixp(ixp.get<std::string>());
    }

    std::vector<std::pair<std::string, std::vector<PathletId>>> declared_access;
    for (const auto& ep : doc["endpoints"]) {
      if (!ep.is_object() || !ep.contains("id") || !ep.contains("prefixes") ||
          !ep.contains("access_pathlets"))
        schema_error(source, "endpoint entries need id, prefixes, access_pathlets");
      std::vector<std::string> prefixes = ep["prefixes"].get<std::vector<std::string>>();
      for (const std::string& p : prefixes) parse_cidr(p);  // syntax check
      graph.add_endpoint(ep["id"].get<std::string>(), std::move(prefixes));
      declared_access.emplace_back(ep["id"].get<std::string>(),
                                   ep["access_pathlets"].get<std::vector<PathletId>>());
    }

    for (const auto& pj : doc["pathlets"]) {
      for (const char* key : {"id", "kind", "a", "b", "asn", "capacity_mbps", "latency_ms"})
        if (!pj.contains(key))
          schema_error(source, std::string("pathlet entry missing key '") + key + "'");
      const std::string kind = pj["kind"].get<std::string>();
      const PathletId id = pj["id"].get<PathletId>();
      const std::int64_t asn = pj["asn"].get<std::int64_t>();
      if (asn <= 0 || asn > 0xFFFFFFFFLL)
        schema_error(source, "pathlet " + std::to_string(id) + ": asn out of range");
      std::string a = pj["a"].get<std::string>();
      std::string b = pj["b"].get<std::string>();
      if (kind == "transit") {
        graph.add_transit(id, a, b, static_cast<Asn>(asn), pj["capacity_mbps"].get<Mbps>(),
                          pj["latency_ms"].get<Millisec>());
      } else if (kind == "access") {
        // Accept either end order; canonical form puts the endpoint first.
        if (graph.has_node(a) && graph.node(graph.node_index(a)).kind == NodeKind::ixp)
          std::swap(a, b);
        graph.add_access(id, a, b, static_cast<Asn>(asn), pj["capacity_mbps"].get<Mbps>(),
                         pj["latency_ms"].get<Millisec>());
      } else {
        schema_error(source, "pathlet kind must be 'transit' or 'access', got '" + kind + "'");
      }
    }

    for (const auto& [ep_name, declared] : declared_access) {
      std::vector<PathletId> sorted = declared;
      std::sort(sorted.begin(), sorted.end());
      const auto actual = graph.access_pathlets(graph.node_index(ep_name));
      if (sorted != actual)
        schema_error(source, "endpoint " + ep_name +
                                 ": access_pathlets list disagrees with pathlet records");
    }

    graph.validate();
    return graph;
  } catch (const json::exception& e) {
    throw DataError(source + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(source + ": " + e.what());
  } catch (const std::logic_error& e) {
    throw DataError(source + ": " + e.what());
  }
}

Multigraph load_graph_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open graph file: " + path);
  return load_graph(in, path);
}

}  // namespace ixpsim
