#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ixpsim/engine.hpp"
#include "ixpsim/multigraph.hpp"
#include "ixpsim/paths.hpp"

namespace ixpsim {

// Tie rank at equal timestamps: departures free resources before failures
// strike, and both precede new arrivals.
enum class EventKind { departure = 0, failure = 1, arrival = 2 };

struct Event {
  double t = 0;
  EventKind kind = EventKind::arrival;
  std::int64_t id = 0;  // arrivals/departures: request id; failures: failure index
  Request request;      // arrivals only
  PathletId pathlet = 0;  // failures only
};

struct Workload {
  std::vector<Event> events;  // sorted by (t, kind, id)
};

struct IntRange {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
};

enum class EndpointWeighting { uniform, by_prefix_size };

struct HybridConfig {
  bool enabled = false;
  int max_reembeds = 4;
};

struct ScenarioConfig {
  std::uint64_t seed = 0;
  double arrival_rate = 1.0;    // requests per second
  double mean_duration = 30.0;  // seconds
  IntRange demand{10, 100};             // Mbps
  IntRange latency_bound{20, 120};      // ms
  double horizon = 100.0;               // seconds of arrivals
  EndpointWeighting endpoint_weighting = EndpointWeighting::uniform;
  double backup_probability = 0.0;
  double failure_rate = 0.0;  // failures per second; 0 disables
  SamplerConfig sampler;
  SelectionPolicy policy = SelectionPolicy::min_latency;
  HybridConfig hybrid;
};

// Scenario JSON mirrors the field names above (snake_case keys, ranges as
// {"lo":..,"hi":..}); missing keys keep their defaults.
ScenarioConfig parse_scenario(std::istream& in, const std::string& source = "<scenario>");
ScenarioConfig parse_scenario_file(const std::string& path);

struct RequestRecord {
  RequestId request_id = 0;
  double arrival_s = 0;
  std::string src, dst;
  Mbps demand_mbps = 0;
  Millisec latency_bound_ms = 0;
  bool accepted = false;
  std::optional<Millisec> latency_ms;    // admission-time primary latency
  std::optional<std::size_t> hops;
  int reembeds_triggered = 0;            // committed hybrid moves for this admission
};

struct Metrics {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  double acceptance_ratio = 0;
  double mean_accepted_latency_ms = 0;
  double mean_utilization = 0;  // time-averaged sum(reserved)/sum(capacity) over transit pathlets
  std::size_t reembed_count = 0;
  std::size_t drop_count = 0;
};

struct SimResult {
  Metrics metrics;
  std::vector<RequestRecord> records;
  std::vector<std::string> event_log;
};

// Poisson arrivals until the horizon with exponential durations (rounded up
// to whole seconds, at least 1), uniform integer demands/bounds, endpoint
// pairs per the weighting (src != dst), Bernoulli backup flags. Failures are
// their own Poisson process striking distinct random transit pathlets.
// Deterministic per seed; requires at least two endpoints.
Workload generate_workload(const Multigraph& graph, const ScenarioConfig& scenario);

// Replays the workload in (t, kind, id) order: departures release, failures
// repair or drop, arrivals run admission (and the hybrid fallback when
// enabled). The reservation-conservation invariant is checked after every
// event; a violation stops the run with an exception.
SimResult run_simulation(const Multigraph& graph, const Workload& workload,
                         const ScenarioConfig& scenario);

void write_requests_csv(const std::vector<RequestRecord>& records, std::ostream& out);
void write_summary_json(const Metrics& metrics, std::uint64_t seed, std::ostream& out);

}  // namespace ixpsim
