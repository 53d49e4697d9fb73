// Benchmarks the OpenMP kernels against their serial reference
// implementations on a sizable synthetic substrate.

#include <benchmark/benchmark.h>

#include "ixpsim/analytics.hpp"
#include "ixpsim/ingest.hpp"
#include "ixpsim/multigraph.hpp"
#include "ixpsim/paths.hpp"
#include "ixpsim/rng.hpp"

namespace {

using namespace ixpsim;

Multigraph make_substrate() {
  Rng rng(12345);
  MembershipTable table;
  for (int i = 0; i < 60; ++i) {
    const std::string name = "IX" + std::to_string(i);
    table[name];
    for (Asn a = 1; a <= 120; ++a)
      if (rng.bernoulli(0.18)) table[name].insert(a);
  }
  PathletSynthesisPolicy policy;
  policy.seed = 9;
  Multigraph g = build_multigraph(table, policy);

  // Endpoints with several access pathlets each, so ksp fans out over many
  // anchor pairs.
  PathletId next_id = 1000000;
  for (int e = 0; e < 2; ++e) {
    const std::string name = "E" + std::to_string(e);
    g.add_endpoint(name, {"10." + std::to_string(e) + ".0.0/16"});
    for (int a = 0; a < 4; ++a)
      g.add_access(next_id++, name, "IX" + std::to_string(rng.uniform_int(0, 59)),
                   static_cast<Asn>(900 + e * 10 + a), 1000, rng.uniform_int(1, 5));
  }
  return g;
}

const Multigraph& substrate() {
  static const Multigraph g = make_substrate();
  return g;
}

void bench_ksp_parallel(benchmark::State& state) {
  const Multigraph& g = substrate();
  const FeasibleView view(g, 50);
  const NodeIndex src = g.node_index("E0");
  const NodeIndex dst = g.node_index("E1");
  for (auto _ : state) {
    auto paths = ksp_on_view(view, src, dst, 200, 16);
    benchmark::DoNotOptimize(paths);
  }
}
BENCHMARK(bench_ksp_parallel)->Unit(benchmark::kMillisecond);

void bench_ksp_serial(benchmark::State& state) {
  const Multigraph& g = substrate();
  const FeasibleView view(g, 50);
  const NodeIndex src = g.node_index("E0");
  const NodeIndex dst = g.node_index("E1");
  for (auto _ : state) {
    auto paths = reference::ksp_on_view(view, src, dst, 200, 16);
    benchmark::DoNotOptimize(paths);
  }
}
BENCHMARK(bench_ksp_serial)->Unit(benchmark::kMillisecond);

void bench_walks_parallel(benchmark::State& state) {
  const Multigraph& g = substrate();
  const FeasibleView view(g, 50);
  const NodeIndex src = g.node_index("E0");
  const NodeIndex dst = g.node_index("E1");
  for (auto _ : state) {
    auto paths = random_walks_on_view(view, src, dst, 200, 4000, 12, 77);
    benchmark::DoNotOptimize(paths);
  }
}
BENCHMARK(bench_walks_parallel)->Unit(benchmark::kMillisecond);

void bench_walks_serial(benchmark::State& state) {
  const Multigraph& g = substrate();
  const FeasibleView view(g, 50);
  const NodeIndex src = g.node_index("E0");
  const NodeIndex dst = g.node_index("E1");
  for (auto _ : state) {
    auto paths = reference::random_walks_on_view(view, src, dst, 200, 4000, 12, 77);
    benchmark::DoNotOptimize(paths);
  }
}
BENCHMARK(bench_walks_serial)->Unit(benchmark::kMillisecond);

struct CoverageInputs {
  MembershipTable table;
  AsPrefixes prefixes;
};

const CoverageInputs& coverage_inputs() {
  static const CoverageInputs inputs = [] {
    Rng rng(777);
    CoverageInputs in;
    in.table = [&] {
      MembershipTable t;
      for (int i = 0; i < 120; ++i) {
        const std::string name = "IX" + std::to_string(i);
        t[name];
        for (Asn a = 1; a <= 400; ++a)
          if (rng.bernoulli(0.1)) t[name].insert(a);
      }
      return t;
    }();
    for (Asn a = 1; a <= 400; ++a) {
      const int count = static_cast<int>(rng.uniform_int(1, 6));
      for (int c = 0; c < count; ++c)
        in.prefixes[a].push_back(std::to_string(rng.uniform_int(1, 240)) + "." +
                                 std::to_string(rng.uniform_int(0, 255)) + ".0.0/" +
                                 std::to_string(rng.uniform_int(12, 24)));
    }
    return in;
  }();
  return inputs;
}

void bench_greedy_parallel(benchmark::State& state) {
  const auto& in = coverage_inputs();
  for (auto _ : state) {
    auto picks = greedy_anchors(in.table, in.prefixes, nullptr, 5, false);
    benchmark::DoNotOptimize(picks);
  }
}
BENCHMARK(bench_greedy_parallel)->Unit(benchmark::kMillisecond);

void bench_greedy_serial(benchmark::State& state) {
  const auto& in = coverage_inputs();
  for (auto _ : state) {
    auto picks = reference::greedy_anchors(in.table, in.prefixes, nullptr, 5, false);
    benchmark::DoNotOptimize(picks);
  }
}
BENCHMARK(bench_greedy_serial)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
