#include <benchmark/benchmark.h>

#include "pathlinks/miner.hpp"
#include "pathlinks/ranking.hpp"
#include "pathlinks/synth.hpp"

using namespace pathlinks;

namespace {

// One world shared by every benchmark; building it is not what we measure.
struct Fixture {
  World world;
  std::vector<NavigationPath> paths;
  Corpus corpus;
  TargetIndex index;

  Fixture() {
    SynthConfig config;
    config.n_articles = 1000;
    config.n_paths = 20000;
    world = generate_world(config);
    Diagnostics diag;
    paths = simulate_paths(world, diag);
    corpus = world_corpus(world, diag);
    index = TargetIndex::build(paths);
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_MwRelatedness(benchmark::State& state) {
  const auto& graph = fixture().corpus.graph;
  const auto n = static_cast<std::uint32_t>(graph.n_articles());
  std::uint32_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mw_relatedness(article_id(i % n), article_id((i * 7919 + 13) % n), graph));
    ++i;
  }
}
BENCHMARK(BM_MwRelatedness);

void BM_TruncatedSvd(benchmark::State& state) {
  const auto matrix = adjacency_matrix(fixture().corpus.graph);
  SvdOptions options;
  options.rank = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(truncated_svd(matrix, options));
}
BENCHMARK(BM_TruncatedSvd)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_MentionIndexBuild(benchmark::State& state) {
  const auto& world = fixture().world;
  const TextCollection texts(world.texts);
  for (auto _ : state) {
    Diagnostics diag;
    const auto dictionary = AnchorDictionary::build(world.anchors, texts, world.titles.size(), {}, {}, diag);
    benchmark::DoNotOptimize(MentionIndex::build(dictionary, texts));
  }
}
BENCHMARK(BM_MentionIndexBuild)->Unit(benchmark::kMillisecond);

void BM_TargetIndexBuild(benchmark::State& state) {
  const auto& paths = fixture().paths;
  for (auto _ : state) benchmark::DoNotOptimize(TargetIndex::build(paths));
}
BENCHMARK(BM_TargetIndexBuild)->Unit(benchmark::kMillisecond);

void BM_MineAllTargets(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state)
    for (const auto target : f.index.targets())
      benchmark::DoNotOptimize(mine_target(target, f.index, f.corpus.graph, f.corpus.mentions, {}));
}
BENCHMARK(BM_MineAllTargets)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
