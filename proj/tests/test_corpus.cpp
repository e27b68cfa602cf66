#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "pathlinks/corpus.hpp"
#include "pathlinks/error.hpp"
#include "temp_dir.hpp"

using namespace pathlinks;

namespace {

ArticleId id(std::uint32_t i) { return article_id(i); }

std::string random_string(std::mt19937& rng, const std::string& alphabet, int max_len) {
  std::string s;
  for (int i = static_cast<int>(rng() % static_cast<unsigned>(max_len)); i > 0; --i)
    s.push_back(alphabet[rng() % alphabet.size()]);
  return s;
}

}  // namespace

TEST_SUITE("corpus") {

TEST_CASE("title normalization") {
  CHECK(normalize_title("acute_(medicine)") == "Acute_(medicine)");
  CHECK(normalize_title("  United   States ") == "United_States");
  CHECK(normalize_title("%C3%81ed%C3%A1n_mac_Gabr%C3%A1in") == "\xC3\x81" "ed\xC3\xA1n_mac_Gabr\xC3\xA1in");
  CHECK(normalize_title("New%2520York") == "New_York");
  CHECK(normalize_title("a__b") == "A_b");
  CHECK(normalize_title("100%") == "100%");
  CHECK(title_to_phrase("Acute_(medicine)") == "Acute (medicine)");
}

TEST_CASE("title normalization is idempotent") {
  std::mt19937 rng(11);
  const std::string alphabet = "aZ%2041_ \t\xC3\x81";
  for (int i = 0; i < 5000; ++i) {
    const auto raw = random_string(rng, alphabet, 14);
    const auto once = normalize_title(raw);
    CHECK(normalize_title(once) == once);
  }
}

TEST_CASE("title table is a bijection and rejects duplicates") {
  const TitleTable titles({"Alpha", "beta", "Gamma_ray"});
  CHECK(titles.size() == 3);
  CHECK(titles.at("Beta") == id(1));
  CHECK(titles.find("gamma ray") == id(2));
  CHECK_FALSE(titles.find("Delta").has_value());
  for (std::uint32_t i = 0; i < titles.size(); ++i) CHECK(titles.at(titles.title(id(i))) == id(i));
  CHECK_THROWS_AS(TitleTable({"Alpha", "alpha"}), Error);
  CHECK_THROWS_AS(TitleTable({"Alpha", "  "}), Error);

  TempDir dir;
  const auto t = TitleTable::load(dir.write("titles.txt", "# comment\nAlpha\n\nbeta\r\n"));
  CHECK(t.titles() == std::vector<std::string>{"Alpha", "Beta"});
}

TEST_CASE("link graph dedups and drops self-loops") {
  const LinkGraph g(2, {{id(0), id(1)}, {id(1), id(0)}, {id(0), id(0)}, {id(0), id(1)}}, 5);
  CHECK(g.n_articles() == 2);
  CHECK(g.n_edges() == 2);
  CHECK(g.has_edge(id(0), id(1)));
  CHECK(g.has_edge(id(1), id(0)));
  CHECK_FALSE(g.has_edge(id(0), id(0)));
  CHECK(g.snapshot_time() == 5);

  TempDir dir;
  const TitleTable titles({"A", "B", "C"});
  const auto empty = LinkGraph::load(dir.write("links.tsv", "# nothing\n"), titles, 0);
  CHECK(empty.n_articles() == 3);
  CHECK(empty.n_edges() == 0);
  try {
    LinkGraph::load(dir.write("bad.tsv", "A\tB\nA\tZ\n"), titles, 0);
    FAIL("expected a parse failure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::parse_failure);
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
}

TEST_CASE("inlink and outlink views agree on a random 50-node file") {
  std::mt19937 rng(5);
  std::vector<std::string> names;
  for (int i = 0; i < 50; ++i) names.push_back("N" + std::to_string(i));
  const TitleTable titles(names);
  std::string content;
  oracle::EdgeSet expected;
  for (int e = 0; e < 400; ++e) {
    const auto s = rng() % 50;
    const auto t = rng() % 50;
    content += names[s] + "\t" + names[t] + "\n";
    if (s != t) expected.emplace(s, t);
  }
  TempDir dir;
  const auto g = LinkGraph::load(dir.write("links.tsv", content), titles, 0);
  CHECK(g.n_edges() == expected.size());
  for (std::uint32_t s = 0; s < 50; ++s)
    for (std::uint32_t t = 0; t < 50; ++t) {
      const bool edge = expected.contains({s, t});
      CHECK(g.has_edge(id(s), id(t)) == edge);
      const auto outs = g.outlinks(id(s));
      const auto ins = g.inlinks(id(t));
      CHECK((std::find(outs.begin(), outs.end(), id(t)) != outs.end()) == edge);
      CHECK((std::find(ins.begin(), ins.end(), id(s)) != ins.end()) == edge);
    }
  std::size_t total_in = 0;
  for (std::uint32_t t = 0; t < 50; ++t) {
    const auto ins = g.inlinks(id(t));
    CHECK(std::is_sorted(ins.begin(), ins.end()));
    total_in += ins.size();
  }
  CHECK(total_in == g.n_edges());
}

TEST_CASE("anchor thresholds are inclusive keep conditions") {
  // 5 articles; article 0's text repeats phrases to control occurrence counts.
  auto repeat = [](const std::string& word, int n) {
    std::string s;
    for (int i = 0; i < n; ++i) s += word + " ";
    return s;
  };
  std::vector<std::string> texts(5);
  texts[0] = repeat("a", 10000) + repeat("kept", 1000) + repeat("dropped", 1000) + repeat("florence", 1000);
  std::vector<AnchorOccurrence> occs{
      {id(1), "A", id(2), 50},            // 0.5%: never an anchor
      {id(1), "kept", id(2), 65},         // exactly 6.5%
      {id(1), "dropped", id(2), 64},      // just below
      {id(1), "Florence", id(3), 992},    // main sense
      {id(1), "Florence", id(4), 8},      // 0.8% share
  };
  Diagnostics diag;
  const TextCollection collection(texts);
  const auto dict = AnchorDictionary::build(occs, collection, 5, {}, {}, diag);
  CHECK(diag.total() == 0);
  const auto a = *dict.find("a");
  const auto kept = *dict.find("kept");
  const auto dropped = *dict.find("dropped");
  const auto florence = *dict.find("florence");
  CHECK(dict.stats(a).text_occurrences == 10000);
  CHECK(dict.link_probability(a) == doctest::Approx(0.005));
  CHECK_FALSE(dict.in_anchor_set(a, id(2)));
  CHECK(dict.link_probability(kept) == 0.065);
  CHECK(dict.in_anchor_set(kept, id(2)));
  CHECK_FALSE(dict.in_anchor_set(dropped, id(2)));
  CHECK(dict.target_share(florence, id(4)) == doctest::Approx(0.008));
  CHECK(dict.in_anchor_set(florence, id(3)));
  CHECK_FALSE(dict.in_anchor_set(florence, id(4)));
  const auto set2 = dict.anchor_set(id(2));
  CHECK(std::vector<PhraseId>(set2.begin(), set2.end()) == std::vector<PhraseId>{kept});
  CHECK(dict.anchor_set(id(4)).empty());
}

TEST_CASE("anchored phrases without text occurrences are clamped with a warning") {
  const TextCollection texts(std::vector<std::string>{"ghost town", "", ""});
  std::vector<AnchorOccurrence> occs{{id(0), "phantom", id(1), 3}, {id(0), "ghost", id(2), 4}};
  Diagnostics diag;
  const auto dict = AnchorDictionary::build(occs, texts, 3, {}, {}, diag);
  CHECK(dict.link_probability(*dict.find("phantom")) == 1.0);
  CHECK(dict.link_probability(*dict.find("ghost")) == 1.0);
  CHECK(diag.count("anchor_without_text") == 1);
  CHECK(diag.count("anchor_exceeds_text") == 1);
}

TEST_CASE("mentions respect word boundaries and case folding") {
  const std::vector<std::string> texts{
      "The STATION was closed.",         // "ion" inside a word
      "an ion beam",                     // standalone
      "Inflammation, acute  and\nchronic", // multiword phrase across a newline
      "",                                // empty text
      "caf\xC3\xA9ion"};                 // UTF-8 letter before "ion"
  std::vector<AnchorOccurrence> occs{{id(1), "ion", id(3), 1}, {id(2), "acute and chronic", id(4), 1},
                                     {id(0), "Inflammation", id(0), 1}};
  Diagnostics diag;
  const TextCollection collection(texts);
  const auto dict = AnchorDictionary::build(occs, collection, 5, {}, {}, diag);
  const auto index = MentionIndex::build(dict, collection);
  CHECK_FALSE(index.mentions(id(0), id(3)));
  CHECK(index.mentions(id(1), id(3)));
  CHECK(index.mentions(id(2), id(4)));
  CHECK(index.mentions(id(2), id(0)));
  CHECK_FALSE(index.mentions(id(4), id(3)));
  for (std::uint32_t t = 0; t < 5; ++t) CHECK_FALSE(index.mentions(id(3), id(t)));
  CHECK_THROWS_AS(index.mentions(id(9), id(0)), Error);
  try {
    index.mentions(id(0), id(9));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::unknown_article);
  }
}

TEST_CASE("mention index agrees with a naive scan on random corpora") {
  std::mt19937 rng(17);
  const std::vector<std::string> vocab{"red", "fox", "red fox", "ox", "box", "the", "fo", "x", "ox-box", "r"};
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 30;
    std::vector<std::string> texts(n);
    for (auto& text : texts)
      for (int w = rng() % 25; w > 0; --w) {
        text += vocab[rng() % vocab.size()];
        const auto sep = rng() % 6;
        text += sep == 0 ? "" : sep == 1 ? ", " : sep == 2 ? "\n" : " ";
      }
    std::vector<AnchorOccurrence> occs;
    std::vector<oracle::Anchor> raw;
    for (int a = 0; a < 40; ++a) {
      const auto s = static_cast<std::uint32_t>(rng() % n);
      const auto t = static_cast<std::uint32_t>(rng() % n);
      auto phrase = vocab[rng() % vocab.size()];
      if (rng() % 3 == 0) phrase[0] = static_cast<char>(std::toupper(phrase[0]));
      const std::uint64_t count = 1 + rng() % 3;
      occs.push_back({id(s), phrase, id(t), count});
      raw.push_back({s, phrase, t, count});
    }
    const AnchorThresholds thresholds{0.2, 0.3};
    Diagnostics diag;
    const TextCollection collection(texts);
    const auto dict = AnchorDictionary::build(occs, collection, n, thresholds, {}, diag);
    const auto index = MentionIndex::build(dict, collection);
    const auto expected_sets = oracle::anchor_sets(raw, texts, thresholds.min_link_probability,
                                                   thresholds.min_target_share);
    for (std::uint32_t t = 0; t < n; ++t) {
      std::set<std::string> got;
      for (const auto p : dict.anchor_set(id(t))) {
        got.insert(dict.stats(p).phrase);
        CHECK(dict.link_probability(p) >= thresholds.min_link_probability);
        CHECK(dict.target_share(p, id(t)) >= thresholds.min_target_share);
      }
      CHECK(got == expected_sets[t]);
    }
    for (std::uint32_t s = 0; s < n; ++s)
      for (std::uint32_t t = 0; t < n; ++t)
        CHECK(index.mentions(id(s), id(t)) == oracle::mentions(texts[s], expected_sets[t]));
    for (std::uint32_t t = 0; t < n; ++t)
      for (const auto s : index.mentioning(id(t))) CHECK(index.mentions(s, id(t)));
  }
}

TEST_CASE("load_corpus reads the file formats and warns on stray text files") {
  TempDir dir;
  dir.write("titles.txt", "Fox\nRed_fox\nBox\n");
  dir.write("links.tsv", "Fox\tBox\n");
  dir.write("anchors.tsv", "Fox\tbox\tBox\t1\nFox\tred fox\tRed_fox\t1\n");
  dir.write("texts/Fox.txt", "A box and a red fox.");
  dir.write("texts/Box.txt", "Just a RED   FOX.");
  dir.write("texts/Nobody.txt", "box");
  Diagnostics diag;
  const auto corpus = load_corpus({dir / "titles.txt", dir / "links.tsv", dir / "anchors.tsv", dir / "texts"},
                                  42, {}, {}, diag);
  CHECK(diag.count("text_unknown_title") == 1);
  CHECK(corpus.graph.snapshot_time() == 42);
  CHECK(corpus.mentions.mentions(id(0), id(2)));
  CHECK(corpus.mentions.mentions(id(2), id(1)));
  CHECK_FALSE(corpus.mentions.mentions(id(1), id(0)));
  CHECK_THROWS_AS(load_corpus({dir / "nope.txt", dir / "links.tsv", dir / "anchors.tsv", dir / "texts"}, 0, {},
                              {}, diag),
                  Error);
}

}  // TEST_SUITE
