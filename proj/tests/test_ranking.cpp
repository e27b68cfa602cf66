#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "pathlinks/error.hpp"
#include "pathlinks/ranking.hpp"
#include "temp_dir.hpp"

using namespace pathlinks;

namespace {

ArticleId id(std::uint32_t i) { return article_id(i); }

LinkGraph graph_of(std::size_t n, const oracle::EdgeSet& edges) {
  std::vector<LinkGraph::Edge> e;
  for (const auto& [s, t] : edges) e.emplace_back(id(s), id(t));
  return LinkGraph(n, std::move(e), 0);
}

oracle::EdgeSet random_edges(std::mt19937& rng, std::size_t n, double p) {
  std::bernoulli_distribution coin(p);
  oracle::EdgeSet edges;
  for (std::uint32_t s = 0; s < n; ++s)
    for (std::uint32_t t = 0; t < n; ++t)
      if (s != t && coin(rng)) edges.emplace(s, t);
  return edges;
}

Eigen::MatrixXd dense(const LinkGraph& g) { return Eigen::MatrixXd(adjacency_matrix(g)); }

SvdOptions tight(std::size_t k) {
  SvdOptions o;
  o.rank = k;
  o.tolerance = 1e-12;
  return o;
}

}  // namespace

TEST_SUITE("ranking") {

TEST_CASE("relatedness on a hand-computed graph") {
  // N = 100; inlinks of 98 are 0..9, inlinks of 99 are 6..13.
  oracle::EdgeSet edges;
  for (std::uint32_t s = 0; s < 10; ++s) edges.emplace(s, 98);
  for (std::uint32_t s = 6; s < 14; ++s) edges.emplace(s, 99);
  const auto g = graph_of(100, edges);
  const double expected = 1.0 - (std::log(10.0) - std::log(4.0)) / (std::log(100.0) - std::log(8.0));
  CHECK(mw_relatedness(id(98), id(99), g) == doctest::Approx(expected).epsilon(1e-15));
  CHECK(expected == doctest::Approx(0.637).epsilon(1e-3));
  CHECK(mw_relatedness(id(98), id(98), g) == 1.0);
  CHECK(mw_relatedness(id(0), id(98), g) == 0.0);  // no inlinks
}

TEST_CASE("relatedness matches the set oracle and is symmetric") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 5 + rng() % 30;
    const auto edges = random_edges(rng, n, 0.05 + 0.3 * (rng() % 100) / 100.0);
    const auto g = graph_of(n, edges);
    for (std::uint32_t s = 0; s < n; ++s) {
      const bool has_in = !g.inlinks(id(s)).empty();
      CHECK(mw_relatedness(id(s), id(s), g) == (has_in ? 1.0 : 0.0));
      for (std::uint32_t t = 0; t < n; ++t) {
        const double value = mw_relatedness(id(s), id(t), g);
        CHECK(std::abs(value - oracle::mw(edges, n, s, t)) <= 1e-12);
        CHECK(value == mw_relatedness(id(t), id(s), g));
        CHECK(value >= 0.0);
        CHECK(value <= 1.0);
      }
    }
  }
}

TEST_CASE("relatedness grows with shared inlinks") {
  // |S| = |T| = 10, overlap grows from 1 to 10.
  double previous = -1.0;
  for (std::uint32_t overlap = 1; overlap <= 10; ++overlap) {
    oracle::EdgeSet edges;
    for (std::uint32_t s = 0; s < 10; ++s) edges.emplace(s, 98);
    for (std::uint32_t s = 10 - overlap; s < 20 - overlap; ++s) edges.emplace(s, 99);
    const double value = mw_relatedness(id(98), id(99), graph_of(100, edges));
    CHECK(value > previous);
    previous = value;
  }
  CHECK(previous == 1.0);
}

TEST_CASE("truncated svd matches the dense factorization") {
  SUBCASE("zero matrix") {
    const auto g = graph_of(6, {});
    const auto svd = truncated_svd(adjacency_matrix(g), tight(2));
    CHECK(svd.singular_values.norm() == 0.0);
  }
  SUBCASE("permutation matrix") {
    oracle::EdgeSet edges;
    for (std::uint32_t i = 0; i < 12; ++i) edges.emplace(i, (i + 5) % 12);
    const auto g = graph_of(12, edges);
    const auto svd = truncated_svd(adjacency_matrix(g), tight(5));
    for (Eigen::Index i = 0; i < 5; ++i) CHECK(svd.singular_values(i) == doctest::Approx(1.0));
    const Eigen::MatrixXd ak = svd.left * svd.singular_values.asDiagonal() * svd.right.transpose();
    CHECK((dense(g) - ak).squaredNorm() == doctest::Approx(7.0));
  }
  SUBCASE("random sparse matrices") {
    std::mt19937 rng(43);
    for (int trial = 0; trial < 10; ++trial) {
      const auto g = graph_of(40, random_edges(rng, 40, 0.1));
      const Eigen::MatrixXd a = dense(g);
      const auto best = oracle::best_rank_k(a, 5);
      const auto svd = truncated_svd(adjacency_matrix(g), tight(5));
      const Eigen::MatrixXd ak = svd.left * svd.singular_values.asDiagonal() * svd.right.transpose();
      CHECK(std::abs((a - ak).norm() - (a - best).norm()) <= 1e-6);
      CHECK((ak - best).cwiseAbs().maxCoeff() <= 1e-8);
      for (Eigen::Index i = 1; i < 5; ++i) CHECK(svd.singular_values(i) <= svd.singular_values(i - 1));
    }
  }
  SUBCASE("rank one of a 3x3 band") {
    // [[1,1,0],[1,1,1],[0,1,1]] ~ the top singular pair; A_1[0,2] > 0 scores the missing corner.
    Eigen::MatrixXd band(3, 3);
    band << 1, 1, 0, 1, 1, 1, 0, 1, 1;
    SparseMatrix sparse = band.sparseView();
    const auto svd = truncated_svd(sparse, tight(1));
    const Eigen::MatrixXd a1 = svd.left * svd.singular_values.asDiagonal() * svd.right.transpose();
    const auto best = oracle::best_rank_k(band, 1);
    CHECK(a1(0, 2) == doctest::Approx(best(0, 2)).epsilon(1e-10));
    CHECK(a1(0, 2) > 0.0);
  }
}

TEST_CASE("svd rejects bad ranks and exhausted budgets") {
  std::mt19937 rng(47);
  const auto g = graph_of(20, random_edges(rng, 20, 0.2));
  CHECK_THROWS_AS(truncated_svd(adjacency_matrix(g), tight(0)), Error);
  CHECK_THROWS_AS(truncated_svd(adjacency_matrix(g), tight(21)), Error);
  auto hopeless = tight(3);
  hopeless.tolerance = 0.0;
  hopeless.max_iterations = 0;
  try {
    truncated_svd(adjacency_matrix(g), hopeless);
    FAIL("expected non-convergence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::non_convergence);
  }
}

TEST_CASE("svd score is the reconstruction minus the adjacency") {
  std::mt19937 rng(53);
  const auto edges = random_edges(rng, 30, 0.15);
  const auto g = graph_of(30, edges);
  const auto model = SvdModel::build(g, tight(4));
  const auto best = oracle::best_rank_k(dense(g), 4);
  for (std::uint32_t s = 0; s < 30; ++s)
    for (std::uint32_t t = 0; t < 30; ++t) {
      const double present = edges.contains({s, t}) ? 1.0 : 0.0;
      CHECK(std::abs(svd_score(id(s), id(t), model, g) - (best(s, t) - present)) <= 1e-8);
    }

  TempDir dir;
  model.save(dir / "model.bin");
  const auto loaded = SvdModel::load(dir / "model.bin");
  CHECK(loaded.rank() == 4);
  CHECK(loaded.graph_checksum() == g.checksum());
  CHECK(loaded.factors().left == model.factors().left);
  CHECK(loaded.factors().singular_values == model.factors().singular_values);
  CHECK(svd_score(id(1), id(2), loaded, g) == svd_score(id(1), id(2), model, g));

  auto other_edges = edges;
  other_edges.emplace(0, 29);
  other_edges.emplace(29, 0);
  const auto other = graph_of(30, other_edges);
  try {
    svd_score(id(1), id(2), model, other);
    FAIL("expected a model mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::model_mismatch);
  }
  dir.write("junk.bin", "not a model");
  CHECK_THROWS_AS(SvdModel::load(dir / "junk.bin"), Error);
}

TEST_CASE("ties break by path frequency, then title") {
  const TitleTable titles({"a", "b", "c"});
  std::vector<RankedEntry> entries{{id(0), 0.9, 0.1, 0}, {id(1), 0.2, 0.0, 0}, {id(2), 0.9, 0.3, 0}};
  std::sort(entries.begin(), entries.end(),
            [&](const RankedEntry& x, const RankedEntry& y) { return ranks_before(x, y, &titles); });
  CHECK(entries[0].source == id(2));
  CHECK(entries[1].source == id(0));
  CHECK(entries[2].source == id(1));

  const TitleTable reversed({"Zed", "Alpha"});
  CHECK(ranks_before({id(1), 0.5, 0.5, 0}, {id(0), 0.5, 0.5, 0}, &reversed));
}

TEST_CASE("order is invariant under increasing affine maps of the score") {
  std::mt19937 rng(59);
  const TitleTable titles({"a", "b", "c", "d", "e", "f", "g", "h"});
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<RankedEntry> entries;
    for (std::uint32_t i = 0; i < 8; ++i)
      entries.push_back({id(i), double(rng() % 4) / 4.0, double(rng() % 3) / 3.0, 0});
    auto shifted = entries;
    for (auto& e : shifted) e.score = 3.0 * e.score + 2.0;
    const auto cmp = [&](const RankedEntry& x, const RankedEntry& y) { return ranks_before(x, y, &titles); };
    std::sort(entries.begin(), entries.end(), cmp);
    std::sort(shifted.begin(), shifted.end(), cmp);
    for (std::size_t i = 0; i < entries.size(); ++i) CHECK(entries[i].source == shifted[i].source);
  }
}

TEST_CASE("frequency ranking sorts by path frequency") {
  std::mt19937 rng(61);
  std::vector<std::string> names;
  for (int i = 0; i < 20; ++i) names.push_back("N" + std::to_string(i));
  const TitleTable titles(names);
  CandidateSet set;
  set.target = id(19);
  for (std::uint32_t s = 0; s < 19; ++s)
    set.candidates.push_back({id(s), id(19), double(rng() % 5) / 10.0, 0.7, 0, 1});
  const auto ranked = rank_candidates(set, RankMethod::freq, {&titles, nullptr, nullptr});
  REQUIRE(ranked.entries.size() == 19);
  for (std::size_t i = 1; i < ranked.entries.size(); ++i) {
    const auto& a = ranked.entries[i - 1];
    const auto& b = ranked.entries[i];
    CHECK(a.score == a.path_frequency);
    CHECK((a.score > b.score || (a.score == b.score && titles.title(a.source) < titles.title(b.source))));
  }

  set.selection = Selection::none;
  CHECK_THROWS_AS(rank_candidates(set, RankMethod::freq, {&titles, nullptr, nullptr}), Error);
  set.selection = Selection::path;
  CHECK_THROWS_AS(rank_candidates(set, RankMethod::mw, {&titles, nullptr, nullptr}), Error);
  CHECK_THROWS_AS(parse_method("pagerank"), Error);
}

TEST_CASE("rankings csv round-trips scores and order") {
  const TitleTable titles({"A", "B", "T"});
  RankedSuggestions r;
  r.target = id(2);
  r.method = RankMethod::mw;
  r.entries = {{id(1), 0.75, 0.0, 0}, {id(0), 0.125, 0.0, 0}};
  std::ostringstream out;
  write_rankings_csv(out, std::vector{r}, titles);
  TempDir dir;
  const auto back = read_rankings_csv(dir.write("r.csv", out.str()), titles);
  REQUIRE(back.size() == 1);
  CHECK(back[0].method == RankMethod::mw);
  CHECK(back[0].entries == r.entries);
}

}  // TEST_SUITE
