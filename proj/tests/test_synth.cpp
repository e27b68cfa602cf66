#include <fstream>
#include <sstream>

#include "doctest.h"
#include "pathlinks/error.hpp"
#include "pathlinks/groundtruth.hpp"
#include "pathlinks/synth.hpp"
#include "temp_dir.hpp"

using namespace pathlinks;

namespace {

SynthConfig small(std::uint64_t seed = 1) {
  SynthConfig c;
  c.seed = seed;
  c.n_articles = 200;
  c.n_paths = 1000;
  c.n_targets = 20;
  c.link_density = 0.05;
  return c;
}

std::string slurp(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

double finished_fraction(const std::vector<NavigationPath>& paths) {
  std::size_t finished = 0;
  for (const auto& p : paths) finished += p.finished();
  return static_cast<double>(finished) / static_cast<double>(paths.size());
}

}  // namespace

TEST_SUITE("synth") {

TEST_CASE("same seed, same bytes") {
  TempDir a, b;
  for (auto* dir : {&a, &b}) {
    const auto world = generate_world(small(5));
    Diagnostics diag;
    write_world(world, simulate_paths(world, diag), dir->path());
  }
  for (const auto& entry : std::filesystem::recursive_directory_iterator(a.path())) {
    if (!entry.is_regular_file()) continue;
    const auto rel = std::filesystem::relative(entry.path(), a.path());
    CHECK_MESSAGE(slurp(entry.path()) == slurp(b / rel.string()), rel.string());
  }
  const auto other = generate_world(small(6));
  CHECK(other.planted != generate_world(small(5)).planted);
}

TEST_CASE("world structure") {
  const auto world = generate_world(small());
  CHECK(world.titles.size() == 200);
  CHECK(world.game_graph.n_edges() == world.snapshot.n_edges() + world.planted.size());
  CHECK(world.planted.size() == static_cast<std::size_t>(std::lround(0.05 * world.game_graph.n_edges())));
  CHECK(world.targets.size() == 20);
  CHECK(std::is_sorted(world.targets.begin(), world.targets.end()));
  for (std::uint32_t a = 0; a < 200; ++a) CHECK_FALSE(world.snapshot.outlinks(article_id(a)).empty());
  for (const auto& link : world.planted) {
    CHECK(world.game_graph.has_edge(link.source, link.target));
    CHECK_FALSE(world.snapshot.has_edge(link.source, link.target));
    // the recorded rate replays from the history and clears alpha
    CHECK(link.rate == link_rate(link.source, link.target, world.history, world.reference_time));
    CHECK(link.rate > world.config.alpha);
  }
  // snapshot links are present at T, noise links are below alpha
  for (const auto& r : world.history_records) {
    if (world.snapshot.has_edge(r.source, r.target)) CHECK_FALSE(r.presence.end);
    if (!world.game_graph.has_edge(r.source, r.target))
      CHECK(link_rate(r.source, r.target, world.history, world.reference_time) < world.config.alpha);
  }
  for (const auto c : world.creation) CHECK(c < world.game_begin);
}

TEST_CASE("no removals means no planted links") {
  auto c = small();
  c.removal_fraction = 0.0;
  const auto world = generate_world(c);
  CHECK(world.planted.empty());
  CHECK(world.game_graph.n_edges() == world.snapshot.n_edges());
}

TEST_CASE("planted links are mentioned by their source") {
  const auto world = generate_world(small(2));
  Diagnostics diag;
  const auto corpus = world_corpus(world, diag);
  std::size_t checked = 0;
  for (const auto& link : world.planted) {
    if (world.snapshot.inlinks(link.target).empty()) continue;  // no anchor text survives
    ++checked;
    CHECK(corpus.mentions.mentions(link.source, link.target));
  }
  CHECK(checked > 0);
}

TEST_CASE("random clicking finishes fewer games") {
  auto greedy = small(3);
  greedy.epsilon = 0.0;
  auto random = greedy;
  random.epsilon = 1.0;
  Diagnostics diag;
  const auto g = simulate_paths(generate_world(greedy), diag);
  const auto r = simulate_paths(generate_world(random), diag);
  CHECK(g.size() == greedy.n_paths);
  CHECK(finished_fraction(g) > 0.95);
  CHECK(finished_fraction(r) < finished_fraction(g));
  for (const auto& p : r)
    if (!p.finished()) CHECK(p.pages().size() == random.max_path_length + 1);
}

TEST_CASE("written files ingest back without warnings") {
  const auto world = generate_world(small(4));
  Diagnostics diag;
  const auto paths = simulate_paths(world, diag);
  TempDir dir;
  const auto files = write_world(world, paths, dir.path());

  Diagnostics load_diag;
  const auto corpus = load_corpus(files.corpus(), world.reference_time, {}, {}, load_diag);
  const auto direct = world_corpus(world, diag);
  for (std::uint32_t s = 0; s < 200; ++s)
    for (std::uint32_t t = 0; t < 200; ++t)
      CHECK(corpus.mentions.mentions(article_id(s), article_id(t)) ==
            direct.mentions.mentions(article_id(s), article_id(t)));
  CHECK(corpus.graph.checksum() == world.snapshot.checksum());

  auto records = parse_wikispeedia(files.paths_finished, PathFileKind::finished, load_diag);
  const auto unfinished = parse_wikispeedia(files.paths_unfinished, PathFileKind::unfinished, load_diag);
  records.insert(records.end(), unfinished.begin(), unfinished.end());
  const auto back = normalize_paths(records, corpus.titles, {false, true}, load_diag);
  CHECK(load_diag.total() == 0);
  REQUIRE(back.size() == paths.size());
  std::size_t matched = 0;
  for (const auto& p : paths) matched += std::count(back.begin(), back.end(), p) > 0;
  CHECK(matched == paths.size());

  const auto history = LinkHistory::load(files.history, files.creation, corpus.titles, load_diag);
  for (const auto& link : world.planted)
    CHECK(link_rate(link.source, link.target, history, world.reference_time) == link.rate);
}

TEST_CASE("infeasible configurations are rejected") {
  const auto rejects = [](SynthConfig c) {
    try {
      generate_world(c);
    } catch (const Error& e) {
      return e.code() == ErrorCode::infeasible_config;
    }
    return false;
  };
  auto c = small();
  c.removal_fraction = 0.5;  // far more than the close-link pool
  CHECK(rejects(c));
  c = small();
  c.link_density = 0.001;
  CHECK(rejects(c));
  c = small();
  c.n_targets = 0;
  CHECK(rejects(c));
  c = small();
  c.epsilon = 1.5;
  CHECK(rejects(c));
  c = small();
  c.dimension = 1;
  CHECK(rejects(c));
  CHECK_FALSE(rejects(small()));
}

TEST_CASE("planted sources sit late on paths to their targets") {
  std::size_t late = 0;
  const std::size_t seeds = 20;
  for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
    auto c = small(seed);
    c.n_articles = 400;
    c.n_paths = 4000;
    c.n_targets = 40;
    c.link_density = 0.02;
    const auto world = generate_world(c);
    Diagnostics diag;
    const auto index = TargetIndex::build(simulate_paths(world, diag));
    double sum = 0.0;
    std::size_t seen = 0;
    for (const auto& link : world.planted)
      if (const auto* stats = index.find(link.source, link.target)) {
        sum += stats->mean_rel_position();
        ++seen;
      }
    if (seen > 0 && sum / static_cast<double>(seen) > 0.5) ++late;
  }
  CHECK(late >= 18);
}

}  // TEST_SUITE
