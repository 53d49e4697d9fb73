// Command-line front end: file-in/file-out pipelines over the library.
// Exit codes: 0 success, 1 usage error, 2 data error (parse failure or
// invariant violation, with source context where available).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ixpsim/analytics.hpp"
#include "ixpsim/engine.hpp"
#include "ixpsim/errors.hpp"
#include "ixpsim/graph_json.hpp"
#include "ixpsim/ingest.hpp"
#include "ixpsim/multigraph.hpp"
#include "ixpsim/sim.hpp"

namespace {

using namespace ixpsim;

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + path);
  out << content;
  if (!out) throw DataError("write failed: " + path);
}

int run_ingest(const std::string& members_path, const std::string& out_path,
               const std::string& capacity_model, const std::string& latency_model,
               std::uint64_t seed, std::size_t endpoints) {
  PathletSynthesisPolicy policy;
  policy.capacity = AttributeModel::parse(capacity_model);
  policy.latency = AttributeModel::parse(latency_model);
  policy.seed = seed;

  const MembershipTable table = parse_membership_file(members_path);
  Multigraph graph = build_multigraph(table, policy);
  if (endpoints > 0) attach_synthetic_endpoints(graph, endpoints, policy);
  save_graph_file(graph, out_path);

  const IngestSummary summary = summarize_ingest(table, graph.transit_count());
  std::cout << "ixps=" << summary.ixps << " interconnections=" << summary.interconnections
            << " endpoints=" << endpoints << "\n";
  if (summary.snapshot_drift)
    std::cout << "note: interconnection count deviates more than 10% from the ~49k expected "
                 "of a 229-IXP snapshot; likely snapshot drift, not an error\n";
  return 0;
}

int run_stats(const std::string& graph_path, const std::string& out_prefix) {
  const Multigraph graph = load_graph_file(graph_path);
  const PairStats stats = pair_multiplicity_stats(graph);

  std::ostringstream pairs, mult, degree;
  write_pairs_csv(stats, pairs);
  write_ccdf_csv(stats.multiplicity_ccdf, mult);
  write_ccdf_csv(stats.degree_ccdf, degree);
  write_file(out_prefix + "pairs.csv", pairs.str());
  write_file(out_prefix + "multiplicity_ccdf.csv", mult.str());
  write_file(out_prefix + "degree_ccdf.csv", degree.str());

  std::cout << "pairs=" << stats.pairs.size()
            << " median_multiplicity=" << stats.median_multiplicity << "\n";
  if (stats.median_multiplicity >= 10.0)
    std::cout << "note: median pathlet multiplicity is >= 10x the direct-connectivity "
                 "baseline of 1\n";
  return 0;
}

int run_coverage(const std::string& members_path, const std::string& prefixes_path,
                 const std::string& relationships_path, std::size_t k, bool cone,
                 const std::string& out_path) {
  const MembershipTable table = parse_membership_file(members_path);
  const AsPrefixes prefixes = parse_as_prefixes_file(prefixes_path);
  AsRelationships relationships;
  const AsRelationships* rel = nullptr;
  if (!relationships_path.empty()) {
    relationships = parse_as_relationships_file(relationships_path);
    rel = &relationships;
  }
  const auto picks = greedy_anchors(table, prefixes, rel, k, cone);
  std::ostringstream csv;
  write_greedy_csv(picks, csv);
  write_file(out_path, csv.str());
  std::cout << "anchors=" << picks.size() << " final_fraction_ipv4="
            << picks.back().fraction_of_ipv4 << "\n";
  return 0;
}

int run_simulate(const std::string& graph_path, const std::string& scenario_path,
                 const std::string& out_dir) {
  const Multigraph graph = load_graph_file(graph_path);
  const ScenarioConfig scenario = parse_scenario_file(scenario_path);

  const Workload workload = generate_workload(graph, scenario);
  const SimResult result = run_simulation(graph, workload, scenario);

  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  {
    std::ostringstream csv;
    write_requests_csv(result.records, csv);
    write_file((dir / "requests.csv").string(), csv.str());
  }
  {
    std::ostringstream summary;
    write_summary_json(result.metrics, scenario.seed, summary);
    write_file((dir / "summary.json").string(), summary.str());
  }
  std::cout << "accepted=" << result.metrics.accepted << " rejected=" << result.metrics.rejected
            << " acceptance_ratio=" << result.metrics.acceptance_ratio << "\n";
  return 0;
}

int run_oracle(const std::string& graph_path, const std::string& requests_path) {
  const Multigraph graph = load_graph_file(graph_path);

  std::ifstream in(requests_path, std::ios::binary);
  if (!in) throw DataError("cannot open requests file: " + requests_path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(requests_path + ": " + e.what());
  }
  if (!doc.is_array()) throw DataError(requests_path + ": expected a JSON array of requests");

  std::vector<Request> requests;
  for (const auto& rj : doc) {
    for (const char* key : {"src", "dst", "demand_mbps", "latency_bound_ms"})
      if (!rj.contains(key))
        throw DataError(requests_path + ": request missing key '" + std::string(key) + "'");
    Request r;
    r.id = static_cast<RequestId>(requests.size());
    r.src = rj["src"].get<std::string>();
    r.dst = rj["dst"].get<std::string>();
    r.demand = rj["demand_mbps"].get<Mbps>();
    r.latency_bound = rj["latency_bound_ms"].get<Millisec>();
    requests.push_back(std::move(r));
  }

  const OracleResult result = offline_optimal(graph, requests);
  std::cout << "optimum=" << result.optimum << "\n";
  for (std::size_t i = 0; i < requests.size(); ++i) {
    std::cout << "request " << i << " (" << requests[i].src << "->" << requests[i].dst << "): ";
    if (const auto& path = result.assignment[i]) {
      std::cout << "accept latency_ms=" << path->latency_ms << " pathlets=[";
      for (std::size_t j = 0; j < path->pathlets.size(); ++j)
        std::cout << (j ? "," : "") << path->pathlets[j];
      std::cout << "]\n";
    } else {
      std::cout << "reject\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IXP multigraph construction, analytics and QoS path embedding simulator"};
  app.require_subcommand(1);

  // ingest
  std::string members_path, graph_out, capacity_model = "uniform:100:1000",
                            latency_model = "uniform:5:50";
  std::uint64_t ingest_seed = 0;
  std::size_t endpoints = 0;
  auto* ingest = app.add_subcommand("ingest", "Build a multigraph from membership CSV");
  ingest->add_option("--members", members_path, "membership CSV (header ixp_id,asn)")->required();
  ingest->add_option("--out", graph_out, "output graph JSON")->required();
  ingest->add_option("--capacity", capacity_model, "capacity model constant:N|uniform:LO:HI");
  ingest->add_option("--latency", latency_model, "latency model constant:N|uniform:LO:HI");
  ingest->add_option("--seed", ingest_seed, "synthesis seed");
  ingest->add_option("--endpoints", endpoints,
                     "attach N synthetic endpoints for simulation scenarios");

  // stats
  std::string stats_graph, out_prefix;
  auto* stats = app.add_subcommand("stats", "Per-pair diversity distributions of a graph");
  stats->add_option("--graph", stats_graph, "graph JSON")->required();
  stats->add_option("--out-prefix", out_prefix, "output prefix for CSV files")->required();

  // coverage
  std::string cov_members, cov_prefixes, cov_relationships, cov_out;
  std::size_t cov_k = 5;
  bool cov_cone = false;
  auto* cov = app.add_subcommand("coverage", "Greedy anchor selection by address coverage");
  cov->add_option("--members", cov_members, "membership CSV")->required();
  cov->add_option("--prefixes", cov_prefixes, "asn,prefix CSV")->required();
  cov->add_option("--relationships", cov_relationships, "AS relationships (provider|customer|-1)");
  cov->add_option("--k", cov_k, "number of anchors to pick")->required();
  cov->add_flag("--cone", cov_cone, "extend coverage by the 1-hop customer cone");
  cov->add_option("--out", cov_out, "output CSV")->required();

  // simulate
  std::string sim_graph, sim_scenario, sim_out_dir;
  auto* sim = app.add_subcommand("simulate", "Run a discrete-event admission simulation");
  sim->add_option("--graph", sim_graph, "graph JSON (must contain endpoints)")->required();
  sim->add_option("--scenario", sim_scenario, "scenario JSON")->required();
  sim->add_option("--out-dir", sim_out_dir, "output directory")->required();

  // oracle
  std::string orc_graph, orc_requests;
  auto* orc = app.add_subcommand("oracle", "Exhaustive optimum for small instances");
  orc->add_option("--graph", orc_graph, "graph JSON")->required();
  orc->add_option("--requests", orc_requests, "requests JSON array")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  try {
    if (*ingest)
      return run_ingest(members_path, graph_out, capacity_model, latency_model, ingest_seed,
                        endpoints);
    if (*stats) return run_stats(stats_graph, out_prefix);
    if (*cov) return run_coverage(cov_members, cov_prefixes, cov_relationships, cov_k, cov_cone,
                                  cov_out);
    if (*sim) return run_simulate(sim_graph, sim_scenario, sim_out_dir);
    if (*orc) return run_oracle(orc_graph, orc_requests);
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
