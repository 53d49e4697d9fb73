#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ixpsim/multigraph.hpp"
#include "ixpsim/paths.hpp"

namespace ixpsim {

using RequestId = std::int64_t;

struct Request {
  RequestId id = 0;
  std::string src, dst;          // endpoint ids, src != dst
  Mbps demand = 0;
  Millisec latency_bound = 0;
  double arrival_s = 0;
  double duration_s = 0;
  bool wants_backup = false;
};

// An admitted request with its reserved path(s). The request is kept so the
// original demand/bound drive any later re-embedding.
struct Embedding {
  Request request;
  Path primary;
  std::optional<Path> backup;
};

struct ReembedEvent {
  RequestId request_id = 0;
  Path new_primary;
};

struct FailureReport {
  std::vector<RequestId> reembedded;  // survived with a changed path set
  std::vector<RequestId> dropped;     // no feasible alternative, released
};

// Owns the substrate and the set of live embeddings; all mutations happen on
// the caller's thread. Sampling fans out internally over read-only views.
class Broker {
 public:
  explicit Broker(Multigraph substrate);

  const Multigraph& graph() const { return graph_; }
  const std::map<RequestId, Embedding>& live() const { return live_; }

  // Admission control: sample candidates, select per policy, reserve
  // atomically. With wants_backup the backup is sampled on the graph with
  // the primary's transit pathlets and intermediate IXPs excluded; no
  // disjoint backup means the whole request is rejected. Rejection leaves
  // the state untouched.
  std::optional<Embedding> try_embed(const Request& request, const SamplerConfig& sampler,
                                     SelectionPolicy policy);

  struct HybridOutcome {
    std::optional<Embedding> embedding;
    std::vector<ReembedEvent> moves;  // committed victim moves (at most one)
  };

  // Fallback after a plain rejection: considers live embeddings in ascending
  // (demand, request id) order, up to max_reembeds of them; re-embeds one
  // victim onto an alternative feasible path (same sampler/policy, its own
  // resources freed, original bound respected) and retries the request.
  // Commits the first working combination; otherwise rolls back exactly.
  HybridOutcome hybrid_admit(const Request& request, const SamplerConfig& sampler,
                             SelectionPolicy policy, int max_reembeds);

  // Releases every reservation of the embedding. Double release is an error.
  void release_embedding(RequestId request_id);

  // Removes the pathlet, then repairs every embedding that used it: primaries
  // with a live backup promote it (then try to re-establish a backup,
  // downgrading on failure); primaries without one are re-embedded under
  // their original demand/bound or dropped.
  FailureReport handle_pathlet_failure(PathletId pathlet, const SamplerConfig& sampler,
                                       SelectionPolicy policy);

  // Verifies reserved == sum of live demands for every pathlet.
  void check_conservation() const;

  std::vector<std::pair<PathletId, Mbps>> reservation_state() const {
    return graph_.reservation_state();
  }

 private:
  std::optional<Path> pick_primary(const Request& request, const SamplerConfig& sampler,
                                   SelectionPolicy policy,
                                   const std::vector<Path>* exclude_paths = nullptr) const;
  std::optional<Path> pick_backup(const Request& request, const Path& primary,
                                  const SamplerConfig& sampler, SelectionPolicy policy) const;
  std::vector<Path> sample_for(const Request& request, const SamplerConfig& sampler) const;
  void reserve_path(const Path& path, Mbps demand);
  void release_path(const Path& path, Mbps demand);

  Multigraph graph_;
  std::map<RequestId, Embedding> live_;
};

// Intermediate IXPs of a path: every IXP it visits except the two anchor
// IXPs adjacent to the access pathlets.
std::vector<NodeIndex> intermediate_ixps(const Multigraph& graph, const Path& path);

// Structural backup-disjointness check: the backup shares no transit pathlet
// with the primary and touches none of the primary's intermediate IXPs.
// Anchors and access pathlets may coincide.
bool backup_disjoint(const Multigraph& graph, const Path& primary, const Path& backup);

struct OracleLimits {
  std::size_t max_requests = 8;
  std::size_t max_ixps = 8;
  std::size_t max_paths_per_request = 20000;
  std::uint64_t max_search_steps = 50'000'000;
};

struct OracleResult {
  std::size_t optimum = 0;
  // Witness: per input request, the chosen path or nullopt for rejected.
  std::vector<std::optional<Path>> assignment;
};

// Exhaustive maximum of concurrently embeddable requests (arrivals and
// durations ignored). Enumerates every feasible node-simple path per request
// and backtracks over joint assignments under capacity constraints. Exceeding
// the limits raises DataError (explicit refusal, never silent truncation).
OracleResult offline_optimal(const Multigraph& graph, const std::vector<Request>& requests,
                             const OracleLimits& limits = {});

// All feasible node-simple paths for one request on the graph as-is
// (residual >= demand per pathlet, latency within bound), sorted by the
// canonical candidate order. Exposed for the oracle and for tests.
std::vector<Path> enumerate_feasible_paths(const Multigraph& graph, const std::string& src,
                                           const std::string& dst, Mbps demand,
                                           Millisec latency_bound,
                                           std::size_t cap = 1u << 20);

}  // namespace ixpsim
