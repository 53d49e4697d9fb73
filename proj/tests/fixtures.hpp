#pragma once

#include <string>
#include <vector>

#include "ixpsim/ingest.hpp"
#include "ixpsim/multigraph.hpp"
#include "ixpsim/rng.hpp"

namespace fixtures {

// Canonical hand-checkable substrate used across the suites:
//   IXPs X1,X2,X3; endpoints E1 (access a1 to X1), E2 (access a2 to X3);
//   transit p1 X1-X2 (cap 100, lat 10), p2 X1-X2 (cap 50, lat 5),
//   p3 X2-X3 (cap 100, lat 10), p4 X1-X3 (cap 50, lat 30).
// The three E1->E2 paths are [a1,p2,p3,a2]@17, [a1,p1,p3,a2]@22, [a1,p4,a2]@32.
inline constexpr ixpsim::PathletId A1 = 1, A2 = 2, P1 = 11, P2 = 12, P3 = 13, P4 = 14;

inline ixpsim::Multigraph make_g1() {
  ixpsim::Multigraph g;
  g.add_ixp("X1");
  g.add_ixp("X2");
  g.add_ixp("X3");
  g.add_endpoint("E1", {"10.1.0.0/16"});
  g.add_endpoint("E2", {"10.2.0.0/16"});
  g.add_access(A1, "E1", "X1", 10, 1000, 1);
  g.add_access(A2, "E2", "X3", 20, 1000, 1);
  g.add_transit(P1, "X1", "X2", 100, 100, 10);
  g.add_transit(P2, "X1", "X2", 200, 50, 5);
  g.add_transit(P3, "X2", "X3", 100, 100, 10);
  g.add_transit(P4, "X1", "X3", 300, 50, 30);
  return g;
}

// Random small substrate: up to `max_ixps` IXPs, up to `max_transit` transit
// pathlets, two endpoints E0/E1 with one or two access pathlets each.
inline ixpsim::Multigraph random_graph(ixpsim::Rng& rng, int max_ixps = 6, int max_transit = 15,
                                       int endpoints = 2) {
  using namespace ixpsim;
  Multigraph g;
  const int n_ixps = static_cast<int>(rng.uniform_int(2, max_ixps));
  for (int i = 0; i < n_ixps; ++i) g.add_ixp("X" + std::to_string(i));

  PathletId next_id = 1;
  for (int e = 0; e < endpoints; ++e) {
    const std::string name = "E" + std::to_string(e);
    g.add_endpoint(name, {"10." + std::to_string(e) + ".0.0/16"});
    const int accesses = static_cast<int>(rng.uniform_int(1, 2));
    for (int a = 0; a < accesses; ++a) {
      const std::string ixp = "X" + std::to_string(rng.uniform_int(0, n_ixps - 1));
      // Duplicate (endpoint, ixp) attachments are fine: parallel access edges.
      g.add_access(next_id++, name, ixp, static_cast<Asn>(1000 + e * 10 + a),
                   rng.uniform_int(20, 200), rng.uniform_int(1, 5));
    }
  }

  const int n_transit = static_cast<int>(rng.uniform_int(1, max_transit));
  for (int t = 0; t < n_transit; ++t) {
    const int i = static_cast<int>(rng.uniform_int(0, n_ixps - 1));
    int j = static_cast<int>(rng.uniform_int(0, n_ixps - 2));
    if (j >= i) ++j;
    g.add_transit(next_id++, "X" + std::to_string(i), "X" + std::to_string(j),
                  static_cast<Asn>(rng.uniform_int(1, 500)), rng.uniform_int(10, 120),
                  rng.uniform_int(1, 30));
  }
  return g;
}

// Membership table with heavy pairwise overlap, so the built multigraph is
// rich in parallel edges.
inline ixpsim::MembershipTable random_dense_table(ixpsim::Rng& rng, int ixps, int asns,
                                                  double membership_probability) {
  ixpsim::MembershipTable table;
  for (int i = 0; i < ixps; ++i) {
    const std::string name = (i < 10 ? "X0" : "X") + std::to_string(i);
    table[name];  // keep the IXP even if no ASN joins
    for (int a = 1; a <= asns; ++a)
      if (rng.bernoulli(membership_probability))
        table[name].insert(static_cast<ixpsim::Asn>(a));
  }
  return table;
}

}  // namespace fixtures
