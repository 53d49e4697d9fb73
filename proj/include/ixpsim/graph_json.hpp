#pragma once

#include <iosfwd>
#include <string>

#include "ixpsim/multigraph.hpp"

namespace ixpsim {

// Graph JSON schema:
//   {"ixps": [string...],
//    "endpoints": [{"id": string, "prefixes": [string...],
//                   "access_pathlets": [int...]}...],
//    "pathlets": [{"id": int, "kind": "transit"|"access", "a": string,
//                  "b": string, "asn": int, "capacity_mbps": int,
//                  "latency_ms": int}...]}
// Arrays are emitted in canonical order (ixps and endpoints sorted by id,
// pathlets by id) so identical graphs serialize byte-identically.
// Reservations are never serialized; a loaded graph is pristine.

std::string save_graph(const Multigraph& graph);
void save_graph_file(const Multigraph& graph, const std::string& path);

// Throws DataError on schema violations, duplicate ids, dangling node
// references, or inconsistent access-pathlet lists.
Multigraph load_graph(std::istream& in, const std::string& source = "<graph>");
Multigraph load_graph_file(const std::string& path);

}  // namespace ixpsim
