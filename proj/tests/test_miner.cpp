#include <map>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "pathlinks/error.hpp"
#include "pathlinks/miner.hpp"
#include "pathlinks/synth.hpp"
#include "temp_dir.hpp"

using namespace pathlinks;

namespace {

// Articles 0..5, target T = 5. Everyone's text mentions "T"; only 4 links to it.
pathlinks::Corpus small_corpus() {
  return fixture::make_corpus({"P0", "P1", "P2", "P3", "P4", "T"}, {{4, 5}, {0, 1}, {1, 2}, {2, 3}},
                              {"see T", "see T", "see T", "nothing", "T again", ""});
}

std::set<std::uint32_t> sources(const CandidateSet& set) {
  std::set<std::uint32_t> out;
  for (const auto& c : set.candidates) out.insert(to_index(c.source));
  return out;
}

}  // namespace

TEST_SUITE("miner") {

TEST_CASE("pairs of a single path") {
  // <p0, p1, p2, t>: n = 3, pairs (p1, 1/3) and (p2, 2/3); p0 never pairs.
  const auto index = TargetIndex::build({fixture::finished({0, 1, 2, 5})});
  const auto pairs = generate_pairs(article_id(5), index);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].source == article_id(1));
  CHECK(pairs[0].mean_rel_position() == doctest::Approx(1.0 / 3.0));
  CHECK(pairs[1].source == article_id(2));
  CHECK(pairs[1].mean_rel_position() == doctest::Approx(2.0 / 3.0));
  CHECK(pairs[1].penultimate_count == 1);
}

TEST_CASE("filters on a hand-built corpus") {
  const auto corpus = small_corpus();
  const auto index = TargetIndex::build({fixture::finished({0, 1, 2, 5}), fixture::finished({3, 4, 2, 5}),
                                         fixture::finished({0, 3, 1, 5})});
  FilterCounts counts;
  const auto set = mine_target(article_id(5), index, corpus.graph, corpus.mentions, {}, &counts);
  // P1: positions 1/3, 2/3 -> mean 0.5 is not late enough.
  // P2: 2/3, 2/3 -> kept.  P3: no mention.  P4: linked.
  CHECK(sources(set) == std::set<std::uint32_t>{2});
  REQUIRE(set.candidates.size() == 1);
  CHECK(set.n_paths_total == 3);
  CHECK(set.candidates[0].path_frequency == doctest::Approx(2.0 / 3.0));
  CHECK(set.candidates[0].penultimate_count == 2);
  CHECK(counts.examined == 4);
  CHECK(counts.kept == 1);
  CHECK(counts.linked == 1);
  CHECK(counts.not_mentioned == 1);
  CHECK(counts.early_position >= 1);

  MinerConfig strict;
  strict.min_support = 3;
  CHECK(mine_target(article_id(5), index, corpus.graph, corpus.mentions, strict).candidates.empty());
  CHECK_THROWS_AS(mine_target(article_id(9), index, corpus.graph, corpus.mentions, {}), Error);
}

TEST_CASE("a mean position of exactly one half is rejected") {
  const auto corpus = small_corpus();
  // <P0, P1, T> puts P1 at 1/2.
  const auto index = TargetIndex::build({fixture::finished({0, 1, 5})});
  CHECK(mine_target(article_id(5), index, corpus.graph, corpus.mentions, {}).candidates.empty());
  MinerConfig loose;
  loose.position_threshold = 0.49;
  CHECK(sources(mine_target(article_id(5), index, corpus.graph, corpus.mentions, loose)) ==
        std::set<std::uint32_t>{1});
}

TEST_CASE("baseline lists every unlinked mentioning article") {
  const auto corpus = small_corpus();
  const auto base = baseline_all_mentions(article_id(5), corpus.graph, corpus.mentions);
  CHECK(base.selection == Selection::none);
  CHECK(sources(base) == std::set<std::uint32_t>{0, 1, 2});
  for (const auto& c : base.candidates) {
    CHECK(c.path_frequency == 0.0);
    CHECK_FALSE(c.mean_rel_position);
  }
  const auto index = TargetIndex::build({fixture::finished({3, 2, 5}), fixture::finished({3, 4, 5})});
  const auto with_paths = baseline_all_mentions(article_id(5), corpus.graph, corpus.mentions, &index);
  CHECK(with_paths.n_paths_total == 2);
  CHECK(with_paths.candidates[2].path_frequency == 0.5);
  CHECK(with_paths.candidates[2].mean_rel_position == 0.5);
}

TEST_CASE("mined candidates match a naive filter on a synthetic world") {
  SynthConfig config;
  config.seed = 3;
  config.n_articles = 300;
  config.n_paths = 3000;
  config.n_targets = 30;
  const auto world = generate_world(config);
  Diagnostics diag;
  const auto paths = simulate_paths(world, diag);
  const auto corpus = world_corpus(world, diag);
  const auto index = TargetIndex::build(paths);

  std::vector<oracle::Anchor> raw;
  for (const auto& a : world.anchors) raw.push_back({to_index(a.source), a.phrase, to_index(a.target), a.count});
  const auto sets = oracle::anchor_sets(raw, world.texts, 0.065, 0.01);
  oracle::EdgeSet edges;
  for (const auto& [s, t] : world.snapshot.edges()) edges.emplace(to_index(s), to_index(t));

  std::map<std::uint32_t, std::vector<std::pair<std::vector<std::uint32_t>, bool>>> by_target;
  for (const auto& p : paths) by_target[to_index(p.target())].emplace_back(fixture::indices(p), p.finished());

  std::size_t total = 0;
  for (const auto& [target, raw_paths] : by_target) {
    const auto mined = mine_target(article_id(target), index, corpus.graph, corpus.mentions, {});
    const auto stats = oracle::recount_pairs(raw_paths);
    std::set<std::uint32_t> expected;
    for (const auto& [s, st] : stats)
      if (!edges.contains({s, target}) && oracle::mentions(world.texts[s], sets[target]) &&
          st.position_sum / st.paths_through > 0.5)
        expected.insert(s);
    CHECK(sources(mined) == expected);
    total += expected.size();

    // invariants, and path candidates are a subset of the baseline
    const auto base = sources(baseline_all_mentions(article_id(target), corpus.graph, corpus.mentions));
    for (const auto& c : mined.candidates) {
      CHECK_FALSE(corpus.graph.has_edge(c.source, c.target));
      CHECK(corpus.mentions.mentions(c.source, c.target));
      CHECK(*c.mean_rel_position > 0.5);
      CHECK(c.n_paths_through >= 1);
      CHECK(base.contains(to_index(c.source)));
    }
  }
  CHECK(total > 0);
}

TEST_CASE("candidate csv round-trips, empty targets included") {
  const TitleTable titles({"A", "B,comma", "T", "U"});
  std::vector<CandidateSet> sets(2);
  sets[0].target = article_id(2);
  sets[0].n_paths_total = 7;
  sets[0].candidates = {{article_id(0), article_id(2), 3.0 / 7.0, 0.75, 2, 3},
                        {article_id(1), article_id(2), 1.0 / 7.0, std::nullopt, 0, 1}};
  sets[1].target = article_id(3);
  sets[1].n_paths_total = 4;
  std::ostringstream out;
  write_candidates_csv(out, sets, titles);
  TempDir dir;
  const auto back = read_candidates_csv(dir.write("c.csv", out.str()), titles, Selection::path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].n_paths_total == 7);
  CHECK(back[0].candidates == sets[0].candidates);
  CHECK(back[1].target == article_id(3));
  CHECK(back[1].n_paths_total == 4);
  CHECK(back[1].candidates.empty());
  CHECK(parse_selection("none") == Selection::none);
  CHECK_THROWS_AS(parse_selection("all"), Error);
}

}  // TEST_SUITE
