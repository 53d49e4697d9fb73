#include "ixpsim/engine.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "ixpsim/errors.hpp"
#include "ixpsim/rng.hpp"

namespace ixpsim {

namespace {

void validate_request(const Multigraph& graph, const Request& request) {
  if (request.src == request.dst)
    throw std::invalid_argument("request src and dst must differ");
  if (request.demand <= 0) throw std::invalid_argument("request demand must be positive");
  if (request.latency_bound <= 0)
    throw std::invalid_argument("request latency bound must be positive");
  for (const std::string& name : {request.src, request.dst}) {
    if (!graph.has_node(name) ||
        graph.node(graph.node_index(name)).kind != NodeKind::endpoint)
      throw std::invalid_argument("unknown endpoint: " + name);
  }
}

// Walk-based samplers get a per-request child seed so repeated admissions
// do not replay the same walks.
SamplerConfig sampler_for_request(const SamplerConfig& config, RequestId id) {
  SamplerConfig out = config;
  if (config.method == SampleMethod::random_walk)
    out.seed = derive_seed(derive_seed(config.seed, rng_stream::random_walks),
                           static_cast<std::uint64_t>(id));
  return out;
}

}  // namespace

std::vector<NodeIndex> intermediate_ixps(const Multigraph& graph, const Path& path) {
  // Nodes visited strictly between the two anchor IXPs, i.e. the interior of
  // the transit segment. With fewer than two transit pathlets there is none.
  std::vector<NodeIndex> out;
  if (path.pathlets.size() < 4) return out;
  const Pathlet& first_access = graph.pathlet(path.pathlets.front());
  NodeIndex cur = first_access.b;  // anchor IXP on the src side
  for (std::size_t i = 1; i + 2 < path.pathlets.size(); ++i) {
    cur = graph.pathlet(path.pathlets[i]).other(cur);
    out.push_back(cur);
  }
  return out;
}

bool backup_disjoint(const Multigraph& graph, const Path& primary, const Path& backup) {
  std::set<PathletId> primary_transits;
  for (const PathletId id : primary.pathlets)
    if (graph.pathlet(id).kind == PathletKind::transit) primary_transits.insert(id);
  for (const PathletId id : backup.pathlets)
    if (primary_transits.count(id)) return false;

  const std::vector<NodeIndex> blocked = intermediate_ixps(graph, primary);
  if (blocked.empty()) return true;
  const std::set<NodeIndex> blocked_set(blocked.begin(), blocked.end());
  // Every node the backup touches, in order.
  const Pathlet& first = graph.pathlet(backup.pathlets.front());
  NodeIndex cur = first.a;  // backup src endpoint
  if (blocked_set.count(cur)) return false;
  for (const PathletId id : backup.pathlets) {
    cur = graph.pathlet(id).other(cur);
    if (blocked_set.count(cur)) return false;
  }
  return true;
}

Broker::Broker(Multigraph substrate) : graph_(std::move(substrate)) {}

std::vector<Path> Broker::sample_for(const Request& request, const SamplerConfig& sampler) const {
  const NodeIndex src = graph_.node_index(request.src);
  const NodeIndex dst = graph_.node_index(request.dst);
  const FeasibleView view(graph_, request.demand);
  return sample_on_view(view, src, dst, request.latency_bound,
                        sampler_for_request(sampler, request.id));
}

std::optional<Path> Broker::pick_primary(const Request& request, const SamplerConfig& sampler,
                                         SelectionPolicy policy,
                                         const std::vector<Path>* exclude_paths) const {
  std::vector<Path> candidates = sample_for(request, sampler);
  if (exclude_paths) {
    std::erase_if(candidates, [&](const Path& c) {
      return std::any_of(exclude_paths->begin(), exclude_paths->end(),
                         [&](const Path& x) { return x.pathlets == c.pathlets; });
    });
  }
  if (candidates.empty()) return std::nullopt;
  return select_path(graph_, candidates, policy, request.demand);
}

std::optional<Path> Broker::pick_backup(const Request& request, const Path& primary,
                                        const SamplerConfig& sampler,
                                        SelectionPolicy policy) const {
  std::unordered_set<PathletId> excluded;
  for (const PathletId id : primary.pathlets)
    if (graph_.pathlet(id).kind == PathletKind::transit) excluded.insert(id);

  const NodeIndex src = graph_.node_index(request.src);
  const NodeIndex dst = graph_.node_index(request.dst);
  FeasibleView view(graph_, request.demand, std::move(excluded));
  for (const NodeIndex n : intermediate_ixps(graph_, primary)) view.exclude_node(n);

  // Distinct seed stream from the primary sampling of the same request.
  SamplerConfig backup_sampler = sampler_for_request(sampler, request.id);
  if (backup_sampler.method == SampleMethod::random_walk)
    backup_sampler.seed = derive_seed(backup_sampler.seed, 0x6261636bULL);

  const std::vector<Path> candidates =
      sample_on_view(view, src, dst, request.latency_bound, backup_sampler);
  if (candidates.empty()) return std::nullopt;
  return select_path(graph_, candidates, policy, request.demand);
}

void Broker::reserve_path(const Path& path, Mbps demand) {
  for (const PathletId id : path.pathlets) graph_.reserve(id, demand);
}

void Broker::release_path(const Path& path, Mbps demand) {
  for (const PathletId id : path.pathlets)
    if (graph_.has_pathlet(id)) graph_.release(id, demand);
}

std::optional<Embedding> Broker::try_embed(const Request& request, const SamplerConfig& sampler,
                                           SelectionPolicy policy) {
  validate_request(graph_, request);
  if (live_.count(request.id))
    throw std::invalid_argument("request id already embedded: " + std::to_string(request.id));

  const std::optional<Path> primary = pick_primary(request, sampler, policy);
  if (!primary) return std::nullopt;

  reserve_path(*primary, request.demand);
  std::optional<Path> backup;
  if (request.wants_backup) {
    backup = pick_backup(request, *primary, sampler, policy);
    if (!backup) {
      release_path(*primary, request.demand);  // no disjoint backup: reject whole request
      return std::nullopt;
    }
    reserve_path(*backup, request.demand);
  }

  Embedding embedding{request, *primary, backup};
  live_.emplace(request.id, embedding);
  return embedding;
}

void Broker::release_embedding(RequestId request_id) {
  const auto it = live_.find(request_id);
  if (it == live_.end())
    throw std::invalid_argument("no live embedding for request " + std::to_string(request_id));
  release_path(it->second.primary, it->second.request.demand);
  if (it->second.backup) release_path(*it->second.backup, it->second.request.demand);
  live_.erase(it);
}

Broker::HybridOutcome Broker::hybrid_admit(const Request& request, const SamplerConfig& sampler,
                                           SelectionPolicy policy, int max_reembeds) {
  validate_request(graph_, request);
  HybridOutcome outcome;
  if (max_reembeds <= 0) return outcome;

  // Rollback is a full restore of the reservation snapshot plus the live map.
  const auto snapshot_reservations = graph_.reservation_state();
  const auto snapshot_live = live_;
  const auto restore = [&] {
    live_ = snapshot_live;
    for (const auto& [id, reserved] : snapshot_reservations) {
      const Mbps current = graph_.pathlet(id).reserved_mbps;
      if (current > reserved) graph_.release(id, current - reserved);
      else if (current < reserved) graph_.reserve(id, reserved - current);
    }
  };

  std::vector<RequestId> victims;
  for (const auto& [id, emb] : live_) victims.push_back(id);
  std::sort(victims.begin(), victims.end(), [&](RequestId x, RequestId y) {
    const Mbps dx = snapshot_live.at(x).request.demand;
    const Mbps dy = snapshot_live.at(y).request.demand;
    return std::tie(dx, x) < std::tie(dy, y);
  });
  if (victims.size() > static_cast<std::size_t>(max_reembeds))
    victims.resize(static_cast<std::size_t>(max_reembeds));

  for (const RequestId victim_id : victims) {
    const Embedding victim = snapshot_live.at(victim_id);

    // Alternatives are sampled with the victim's own resources freed; its
    // current primary is not an alternative.
    release_embedding(victim_id);
    std::vector<Path> alternatives = sample_for(victim.request, sampler);
    std::erase_if(alternatives,
                  [&](const Path& c) { return c.pathlets == victim.primary.pathlets; });
    // Try alternatives in selection-preference order.
    std::sort(alternatives.begin(), alternatives.end(), [&](const Path& a, const Path& b) {
      return policy_less(graph_, a, b, policy, victim.request.demand);
    });

    for (const Path& alternative : alternatives) {
      restore();
      release_embedding(victim_id);
      reserve_path(alternative, victim.request.demand);
      std::optional<Path> victim_backup;
      if (victim.request.wants_backup) {
        victim_backup = pick_backup(victim.request, alternative, sampler, policy);
        if (!victim_backup) continue;  // this alternative cannot keep the backup promise
        reserve_path(*victim_backup, victim.request.demand);
      }
      live_.emplace(victim_id, Embedding{victim.request, alternative, victim_backup});

      if (auto embedded = try_embed(request, sampler, policy)) {
        outcome.embedding = std::move(embedded);
        outcome.moves.push_back({victim_id, alternative});
        return outcome;
      }
    }
    restore();
  }

  restore();
  return outcome;
}

FailureReport Broker::handle_pathlet_failure(PathletId pathlet, const SamplerConfig& sampler,
                                             SelectionPolicy policy) {
  if (!graph_.has_pathlet(pathlet))
    throw std::invalid_argument("unknown pathlet id: " + std::to_string(pathlet));

  const auto uses = [&](const Path& path) {
    return std::find(path.pathlets.begin(), path.pathlets.end(), pathlet) != path.pathlets.end();
  };

  std::vector<RequestId> affected;
  for (const auto& [id, emb] : live_)
    if (uses(emb.primary) || (emb.backup && uses(*emb.backup))) affected.push_back(id);

  // Reservations on the failed pathlet vanish with it; reservations the
  // affected paths hold elsewhere are released piecewise below.
  graph_.remove_pathlet(pathlet);

  FailureReport report;
  for (const RequestId id : affected) {
    Embedding& emb = live_.at(id);
    const Mbps demand = emb.request.demand;
    const bool primary_hit = uses(emb.primary);
    const bool backup_hit = emb.backup && uses(*emb.backup);

    if (primary_hit && emb.backup && !backup_hit) {
      // Promote the live backup, then try to restore redundancy.
      release_path(emb.primary, demand);  // surviving pathlets only
      emb.primary = *emb.backup;
      emb.backup.reset();
      if (auto fresh = pick_backup(emb.request, emb.primary, sampler, policy)) {
        reserve_path(*fresh, demand);
        emb.backup = std::move(fresh);
      }
      // Downgraded if no fresh backup was found; either way the embedding
      // survived on a changed path set.
      report.reembedded.push_back(id);
      continue;
    }

    if (primary_hit) {
      // No usable backup: re-embed the primary from scratch.
      release_path(emb.primary, demand);
      if (emb.backup) {
        release_path(*emb.backup, demand);
        emb.backup.reset();
      }
      std::vector<Path> candidates = sample_for(emb.request, sampler);
      if (candidates.empty()) {
        live_.erase(id);
        report.dropped.push_back(id);
        continue;
      }
      const Path replacement = select_path(graph_, candidates, policy, demand);
      reserve_path(replacement, demand);
      emb.primary = replacement;
      if (emb.request.wants_backup) {
        if (auto fresh = pick_backup(emb.request, emb.primary, sampler, policy)) {
          reserve_path(*fresh, demand);
          emb.backup = std::move(fresh);
        }
      }
      report.reembedded.push_back(id);
      continue;
    }

    // Backup hit only: primary keeps carrying traffic; replace the backup if
    // possible, otherwise downgrade silently.
    release_path(*emb.backup, demand);
    emb.backup.reset();
    if (auto fresh = pick_backup(emb.request, emb.primary, sampler, policy)) {
      reserve_path(*fresh, demand);
      emb.backup = std::move(fresh);
      report.reembedded.push_back(id);
    }
  }
  return report;
}

void Broker::check_conservation() const {
  std::map<PathletId, Mbps> expected;
  for (const auto& [id, emb] : live_) {
    for (const PathletId p : emb.primary.pathlets) expected[p] += emb.request.demand;
    if (emb.backup)
      for (const PathletId p : emb.backup->pathlets) expected[p] += emb.request.demand;
  }
  for (const auto& [id, reserved] : graph_.reservation_state()) {
    const Mbps want = expected.count(id) ? expected.at(id) : 0;
    if (reserved != want)
      throw std::logic_error("conservation violated on pathlet " + std::to_string(id) +
                             ": reserved " + std::to_string(reserved) + ", live demand " +
                             std::to_string(want));
    expected.erase(id);
  }
  if (!expected.empty())
    throw std::logic_error("live embedding references a pathlet missing from the substrate");
}

std::vector<Path> enumerate_feasible_paths(const Multigraph& graph, const std::string& src,
                                           const std::string& dst, Mbps demand,
                                           Millisec latency_bound, std::size_t cap) {
  const NodeIndex s = graph.node_index(src);
  const NodeIndex d = graph.node_index(dst);
  const FeasibleView view(graph, demand);

  std::vector<Path> out;
  std::vector<char> visited(graph.node_count(), 0);
  Path current;

  const std::function<void(NodeIndex)> dfs = [&](NodeIndex u) {
    if (u == d) {
      if (current.latency_ms <= latency_bound) {
        if (out.size() >= cap)
          throw DataError("path enumeration cap exceeded (" + std::to_string(cap) + ")");
        out.push_back(current);
      }
      return;
    }
    view.for_each_feasible(u, [&](const Pathlet& p) {
      const NodeIndex w = p.other(u);
      if (visited[w]) return;
      if (graph.node(w).kind == NodeKind::endpoint && w != d) return;
      if (current.latency_ms + p.latency_ms > latency_bound) return;  // latencies only grow
      visited[w] = 1;
      current.pathlets.push_back(p.id);
      current.latency_ms += p.latency_ms;
      dfs(w);
      current.latency_ms -= p.latency_ms;
      current.pathlets.pop_back();
      visited[w] = 0;
    });
  };
  visited[s] = 1;
  dfs(s);
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

OracleResult offline_optimal(const Multigraph& graph, const std::vector<Request>& requests,
                             const OracleLimits& limits) {
  if (requests.size() > limits.max_requests)
    throw DataError("offline oracle refused: " + std::to_string(requests.size()) +
                    " requests exceed the cap of " + std::to_string(limits.max_requests));
  if (graph.ixps().size() > limits.max_ixps)
    throw DataError("offline oracle refused: " + std::to_string(graph.ixps().size()) +
                    " IXPs exceed the cap of " + std::to_string(limits.max_ixps));

  struct Candidate {
    std::size_t request_index;
    std::vector<Path> paths;
  };
  std::vector<Candidate> order;
  for (std::size_t i = 0; i < requests.size(); ++i) {
    validate_request(graph, requests[i]);
    order.push_back({i, enumerate_feasible_paths(graph, requests[i].src, requests[i].dst,
                                                 requests[i].demand, requests[i].latency_bound,
                                                 limits.max_paths_per_request)});
  }
  // Fewest-candidates-first keeps the backtracking shallow.
  std::stable_sort(order.begin(), order.end(),
                   [](const Candidate& a, const Candidate& b) {
                     return a.paths.size() < b.paths.size();
                   });

  Multigraph state = graph;
  OracleResult best;
  best.assignment.assign(requests.size(), std::nullopt);
  std::vector<std::optional<Path>> chosen(requests.size(), std::nullopt);
  std::uint64_t steps = 0;

  const std::function<void(std::size_t, std::size_t)> search = [&](std::size_t idx,
                                                                   std::size_t accepted) {
    if (++steps > limits.max_search_steps)
      throw DataError("offline oracle refused: search budget exceeded");
    if (accepted + (order.size() - idx) <= best.optimum) return;  // cannot beat the incumbent
    if (idx == order.size()) {
      if (accepted > best.optimum) {
        best.optimum = accepted;
        best.assignment = chosen;
      }
      return;
    }
    const Candidate& cand = order[idx];
    const Mbps demand = requests[cand.request_index].demand;
    for (const Path& path : cand.paths) {
      const bool fits = std::all_of(path.pathlets.begin(), path.pathlets.end(), [&](PathletId p) {
        return state.pathlet(p).residual() >= demand;
      });
      if (!fits) continue;
      for (const PathletId p : path.pathlets) state.reserve(p, demand);
      chosen[cand.request_index] = path;
      search(idx + 1, accepted + 1);
      chosen[cand.request_index] = std::nullopt;
      for (const PathletId p : path.pathlets) state.release(p, demand);
    }
    search(idx + 1, accepted);  // reject this request
  };
  search(0, 0);
  return best;
}

}  // namespace ixpsim
