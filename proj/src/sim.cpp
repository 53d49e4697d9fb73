#include "ixpsim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "ixpsim/errors.hpp"
#include "ixpsim/prefix_set.hpp"
#include "ixpsim/rng.hpp"

namespace ixpsim {

using nlohmann::json;

namespace {

bool event_order(const Event& a, const Event& b) {
  if (a.t != b.t) return a.t < b.t;
  if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  return a.id < b.id;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

IntRange parse_range(const json& j, const std::string& key) {
  if (!j.is_object() || !j.contains("lo") || !j.contains("hi"))
    throw DataError("scenario key '" + key + "' must be {\"lo\":..,\"hi\":..}");
  IntRange r{j["lo"].get<std::int64_t>(), j["hi"].get<std::int64_t>()};
  if (r.lo <= 0 || r.hi < r.lo)
    throw DataError("scenario key '" + key + "' requires 0 < lo <= hi");
  return r;
}

// Weighted endpoint pair draw. Weights are announced address counts under
// by_prefix_size (uniform fallback when everything is zero).
struct EndpointPicker {
  std::vector<NodeIndex> endpoints;
  std::vector<std::string> names;
  std::vector<std::uint64_t> weights;
  std::uint64_t total_weight = 0;

  EndpointPicker(const Multigraph& graph, EndpointWeighting weighting) {
    endpoints = graph.endpoints();
    std::sort(endpoints.begin(), endpoints.end(), [&](NodeIndex a, NodeIndex b) {
      return graph.node(a).name < graph.node(b).name;
    });
    for (const NodeIndex e : endpoints) names.push_back(graph.node(e).name);
    weights.assign(endpoints.size(), 1);
    if (weighting == EndpointWeighting::by_prefix_size) {
      for (std::size_t i = 0; i < endpoints.size(); ++i)
        weights[i] = PrefixSet::from_cidrs(graph.node(endpoints[i]).prefixes).size();
      if (std::all_of(weights.begin(), weights.end(), [](std::uint64_t w) { return w == 0; }))
        weights.assign(endpoints.size(), 1);
    }
    for (const std::uint64_t w : weights) total_weight += w;
  }

  // Weighted index draw, optionally skipping one index.
  std::size_t draw(Rng& rng, std::optional<std::size_t> skip) const {
    std::uint64_t mass = total_weight;
    if (skip) mass -= weights[*skip];
    std::uint64_t ticket = rng.below(mass);
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (skip && i == *skip) continue;
      if (ticket < weights[i]) return i;
      ticket -= weights[i];
    }
    return weights.size() - 1;  // unreachable with positive mass
  }
};

}  // namespace

ScenarioConfig parse_scenario(std::istream& in, const std::string& source) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError(source + ": " + e.what());
  }
  if (!doc.is_object()) throw DataError(source + ": scenario must be a JSON object");

  ScenarioConfig config;
  try {
    if (doc.contains("seed")) config.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("arrival_rate")) config.arrival_rate = doc["arrival_rate"].get<double>();
    if (doc.contains("mean_duration")) config.mean_duration = doc["mean_duration"].get<double>();
    if (doc.contains("demand")) config.demand = parse_range(doc["demand"], "demand");
    if (doc.contains("latency_bound"))
      config.latency_bound = parse_range(doc["latency_bound"], "latency_bound");
    if (doc.contains("horizon")) config.horizon = doc["horizon"].get<double>();
    if (doc.contains("endpoint_weighting")) {
      const std::string w = doc["endpoint_weighting"].get<std::string>();
      if (w == "uniform") config.endpoint_weighting = EndpointWeighting::uniform;
      else if (w == "by_prefix_size") config.endpoint_weighting = EndpointWeighting::by_prefix_size;
      else throw DataError(source + ": unknown endpoint_weighting '" + w + "'");
    }
    if (doc.contains("backup_probability"))
      config.backup_probability = doc["backup_probability"].get<double>();
    if (doc.contains("failure_rate")) config.failure_rate = doc["failure_rate"].get<double>();
    if (doc.contains("sampler")) {
      const json& s = doc["sampler"];
      if (s.contains("method"))
        config.sampler.method = parse_sample_method(s["method"].get<std::string>());
      if (s.contains("k")) config.sampler.k = s["k"].get<std::size_t>();
      if (s.contains("walks")) config.sampler.walks = s["walks"].get<std::size_t>();
      if (s.contains("max_len")) config.sampler.max_len = s["max_len"].get<std::size_t>();
      if (s.contains("seed")) config.sampler.seed = s["seed"].get<std::uint64_t>();
    }
    if (doc.contains("policy"))
      config.policy = parse_selection_policy(doc["policy"].get<std::string>());
    if (doc.contains("hybrid")) {
      const json& h = doc["hybrid"];
      if (h.contains("enabled")) config.hybrid.enabled = h["enabled"].get<bool>();
      if (h.contains("max_reembeds")) config.hybrid.max_reembeds = h["max_reembeds"].get<int>();
    }
  } catch (const json::exception& e) {
    throw DataError(source + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(source + ": " + e.what());
  }

  if (config.arrival_rate <= 0) throw DataError(source + ": arrival_rate must be positive");
  if (config.mean_duration <= 0) throw DataError(source + ": mean_duration must be positive");
  if (config.horizon <= 0) throw DataError(source + ": horizon must be positive");
  if (config.backup_probability < 0 || config.backup_probability > 1)
    throw DataError(source + ": backup_probability must be in [0,1]");
  if (config.failure_rate < 0) throw DataError(source + ": failure_rate must be >= 0");
  if (config.sampler.k < 1 || config.sampler.walks < 1 || config.sampler.max_len < 1)
    throw DataError(source + ": sampler parameters must be positive");
  if (config.hybrid.enabled && config.hybrid.max_reembeds < 1)
    throw DataError(source + ": hybrid.max_reembeds must be positive when enabled");
  return config;
}

ScenarioConfig parse_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open scenario file: " + path);
  return parse_scenario(in, path);
}

Workload generate_workload(const Multigraph& graph, const ScenarioConfig& scenario) {
  const EndpointPicker picker(graph, scenario.endpoint_weighting);
  if (picker.endpoints.size() < 2)
    throw std::invalid_argument("workload generation needs at least 2 endpoints");

  Workload workload;

  // Request stream. Per arrival the draw order is fixed: inter-arrival gap,
  // duration, demand, bound, src, dst, backup flag.
  Rng rng(derive_seed(scenario.seed, rng_stream::workload));
  double t = 0;
  RequestId next_id = 0;
  for (;;) {
    t += rng.exponential(1.0 / scenario.arrival_rate);
    if (t >= scenario.horizon) break;
    Request request;
    request.id = next_id++;
    request.arrival_s = t;
    request.duration_s = std::max(1.0, std::ceil(rng.exponential(scenario.mean_duration)));
    request.demand = rng.uniform_int(scenario.demand.lo, scenario.demand.hi);
    request.latency_bound = rng.uniform_int(scenario.latency_bound.lo, scenario.latency_bound.hi);
    const std::size_t src = picker.draw(rng, std::nullopt);
    const std::size_t dst = picker.draw(rng, src);
    request.src = picker.names[src];
    request.dst = picker.names[dst];
    request.wants_backup = rng.bernoulli(scenario.backup_probability);

    workload.events.push_back({t, EventKind::arrival, request.id, request, 0});
    workload.events.push_back(
        {t + request.duration_s, EventKind::departure, request.id, {}, 0});
  }

  if (scenario.failure_rate > 0) {
    Rng failure_rng(derive_seed(scenario.seed, rng_stream::failures));
    std::vector<PathletId> pool;
    for (const PathletId id : graph.pathlet_ids())
      if (graph.pathlet(id).kind == PathletKind::transit) pool.push_back(id);
    double ft = 0;
    std::int64_t failure_index = 0;
    for (;;) {
      ft += failure_rng.exponential(1.0 / scenario.failure_rate);
      if (ft >= scenario.horizon || pool.empty()) break;
      const std::size_t pick = failure_rng.below(pool.size());
      workload.events.push_back({ft, EventKind::failure, failure_index++, {}, pool[pick]});
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
    }
  }

  std::sort(workload.events.begin(), workload.events.end(), event_order);
  return workload;
}

SimResult run_simulation(const Multigraph& graph, const Workload& workload,
                         const ScenarioConfig& scenario) {
  for (const Event& e : workload.events) {
    if (e.kind == EventKind::arrival) {
      for (const std::string& name : {e.request.src, e.request.dst})
        if (!graph.has_node(name) ||
            graph.node(graph.node_index(name)).kind != NodeKind::endpoint)
          throw DataError("workload references unknown endpoint: " + name);
    } else if (e.kind == EventKind::failure) {
      if (!graph.has_pathlet(e.pathlet))
        throw DataError("workload references unknown pathlet: " + std::to_string(e.pathlet));
    }
  }

  Broker broker(graph);
  SimResult result;
  std::vector<Millisec> accepted_latencies;

  const auto transit_utilization = [&]() -> double {
    Mbps reserved = 0;
    Mbps capacity = 0;
    for (const PathletId id : broker.graph().pathlet_ids()) {
      const Pathlet& p = broker.graph().pathlet(id);
      if (p.kind != PathletKind::transit) continue;
      reserved += p.reserved_mbps;
      capacity += p.capacity_mbps;
    }
    return capacity == 0 ? 0.0 : static_cast<double>(reserved) / static_cast<double>(capacity);
  };

  double integral = 0;
  double t_prev = 0;
  const auto log_line = [&](double t, const std::string& text) {
    result.event_log.push_back(format_double(t) + " " + text);
  };

  for (const Event& e : workload.events) {
    integral += transit_utilization() * (e.t - t_prev);
    t_prev = e.t;

    switch (e.kind) {
      case EventKind::departure: {
        // Rejected or failure-dropped requests have no live embedding left.
        if (broker.live().count(e.id)) {
          broker.release_embedding(e.id);
          log_line(e.t, "depart r" + std::to_string(e.id));
        }
        break;
      }
      case EventKind::failure: {
        const FailureReport report =
            broker.handle_pathlet_failure(e.pathlet, scenario.sampler, scenario.policy);
        result.metrics.reembed_count += report.reembedded.size();
        result.metrics.drop_count += report.dropped.size();
        log_line(e.t, "fail p" + std::to_string(e.pathlet) + " reembedded=" +
                          std::to_string(report.reembedded.size()) +
                          " dropped=" + std::to_string(report.dropped.size()));
        break;
      }
      case EventKind::arrival: {
        RequestRecord record;
        record.request_id = e.request.id;
        record.arrival_s = e.request.arrival_s;
        record.src = e.request.src;
        record.dst = e.request.dst;
        record.demand_mbps = e.request.demand;
        record.latency_bound_ms = e.request.latency_bound;

        std::optional<Embedding> embedded =
            broker.try_embed(e.request, scenario.sampler, scenario.policy);
        if (!embedded && scenario.hybrid.enabled) {
          auto outcome = broker.hybrid_admit(e.request, scenario.sampler, scenario.policy,
                                             scenario.hybrid.max_reembeds);
          if (outcome.embedding) {
            embedded = std::move(outcome.embedding);
            record.reembeds_triggered = static_cast<int>(outcome.moves.size());
            result.metrics.reembed_count += outcome.moves.size();
          }
        }
        if (embedded) {
          ++result.metrics.accepted;
          record.accepted = true;
          record.latency_ms = embedded->primary.latency_ms;
          record.hops = embedded->primary.hops();
          accepted_latencies.push_back(embedded->primary.latency_ms);
          log_line(e.t, "accept r" + std::to_string(e.request.id) + " lat=" +
                            std::to_string(embedded->primary.latency_ms) +
                            (record.reembeds_triggered > 0 ? " (hybrid)" : ""));
        } else {
          ++result.metrics.rejected;
          log_line(e.t, "reject r" + std::to_string(e.request.id));
        }
        result.records.push_back(std::move(record));
        break;
      }
    }
    broker.check_conservation();
  }

  Metrics& m = result.metrics;
  const std::size_t total = m.accepted + m.rejected;
  m.acceptance_ratio = total == 0 ? 0.0 : static_cast<double>(m.accepted) / total;
  if (!accepted_latencies.empty()) {
    double sum = 0;
    for (const Millisec l : accepted_latencies) sum += static_cast<double>(l);
    m.mean_accepted_latency_ms = sum / static_cast<double>(accepted_latencies.size());
  }
  m.mean_utilization = t_prev == 0 ? 0.0 : integral / t_prev;
  return result;
}

void write_requests_csv(const std::vector<RequestRecord>& records, std::ostream& out) {
  out << "request_id,arrival_s,src,dst,demand_mbps,latency_bound_ms,decision,latency_ms,hops,"
         "reembeds_triggered\n";
  for (const RequestRecord& r : records) {
    out << r.request_id << ',' << format_double(r.arrival_s) << ',' << r.src << ',' << r.dst
        << ',' << r.demand_mbps << ',' << r.latency_bound_ms << ','
        << (r.accepted ? "accept" : "reject") << ',';
    if (r.latency_ms) out << *r.latency_ms;
    out << ',';
    if (r.hops) out << *r.hops;
    out << ',' << r.reembeds_triggered << '\n';
  }
}

void write_summary_json(const Metrics& metrics, std::uint64_t seed, std::ostream& out) {
  json doc;
  doc["accepted"] = metrics.accepted;
  doc["rejected"] = metrics.rejected;
  doc["acceptance_ratio"] = metrics.acceptance_ratio;
  doc["mean_accepted_latency_ms"] = metrics.mean_accepted_latency_ms;
  doc["mean_utilization"] = metrics.mean_utilization;
  doc["reembed_count"] = metrics.reembed_count;
  doc["drop_count"] = metrics.drop_count;
  doc["seed"] = seed;
  out << doc.dump(2) << '\n';
}

}  // namespace ixpsim
