#include "pathlinks/synth.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <random>
#include <unordered_set>

#include "pathlinks/error.hpp"
#include "pathlinks/io.hpp"

namespace pathlinks {

namespace {

constexpr Timestamp kDay = 86400;
constexpr Timestamp kYear = 365 * kDay;
constexpr Timestamp kReferenceTime = 1388534400;  // 2014-01-01

constexpr std::array<std::string_view, 3> kFillers = {"the", "and", "of"};

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Timestamp uniform_time(Rng& rng, Timestamp lo, Timestamp hi) {
  if (hi <= lo) return lo;
  return std::uniform_int_distribution<Timestamp>(lo, hi - 1)(rng);
}

std::vector<std::string> make_titles(std::size_t n, Rng& rng) {
  static constexpr std::string_view consonants = "bdfgklmnprstvz";
  static constexpr std::string_view vowels = "aeiou";
  std::unordered_set<std::string> seen;
  std::vector<std::string> titles;
  titles.reserve(n);
  std::uniform_int_distribution<std::size_t> pick_c(0, consonants.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_v(0, vowels.size() - 1);
  while (titles.size() < n) {
    std::string word;
    for (int syllable = 0; syllable < 3; ++syllable) {
      word.push_back(consonants[pick_c(rng)]);
      word.push_back(vowels[pick_v(rng)]);
    }
    word[0] = static_cast<char>(word[0] - 'a' + 'A');
    if (!seen.insert(word).second) continue;
    if (uniform(rng) < 0.1) word += "_River";
    titles.push_back(std::move(word));
  }
  return titles;
}

std::vector<std::vector<double>> sphere_points(std::size_t n, std::size_t dim, Rng& rng) {
  std::normal_distribution<double> gauss;
  std::vector<std::vector<double>> points(n, std::vector<double>(dim));
  for (auto& point : points) {
    double norm = 0.0;
    do {
      norm = 0.0;
      for (auto& x : point) {
        x = gauss(rng);
        norm += x * x;
      }
    } while (norm < 1e-12);
    norm = std::sqrt(norm);
    for (auto& x : point) x /= norm;
  }
  return points;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

// Weighted sampling without replacement: keep the k largest u^(1/w).
std::vector<std::uint32_t> weighted_sample(const std::vector<double>& weights, std::size_t k, Rng& rng) {
  std::vector<std::pair<double, std::uint32_t>> keys;
  keys.reserve(weights.size());
  for (std::uint32_t i = 0; i < weights.size(); ++i) {
    const double u = uniform(rng);
    if (weights[i] <= 0.0) continue;
    keys.emplace_back(std::log(u) / weights[i], i);
  }
  k = std::min(k, keys.size());
  std::partial_sort(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(k), keys.end(),
                    [](const auto& a, const auto& b) { return a.first != b.first ? a.first > b.first : a.second < b.second; });
  std::vector<std::uint32_t> chosen;
  for (std::size_t i = 0; i < k; ++i) chosen.push_back(keys[i].second);
  return chosen;
}

std::string phrase_of(const TitleTable& titles, ArticleId id) { return title_to_phrase(titles.title(id)); }

}  // namespace

void SynthConfig::validate() const {
  const auto fail = [](const std::string& what) { throw Error(ErrorCode::infeasible_config, what); };
  const auto fraction = [&](double value, const char* name) {
    if (!(value >= 0.0 && value <= 1.0)) fail(std::string(name) + " must lie in [0, 1]");
  };
  fraction(link_density, "link_density");
  fraction(removal_fraction, "removal_fraction");
  fraction(epsilon, "epsilon");
  fraction(long_range_fraction, "long_range_fraction");
  fraction(mention_scale, "mention_scale");
  fraction(planted_pool_fraction, "planted_pool_fraction");
  fraction(noise_history_fraction, "noise_history_fraction");
  fraction(alpha, "alpha");
  if (n_articles < 10) fail("n_articles must be at least 10");
  if (dimension < 2) fail("dimension must be at least 2");
  if (max_path_length < 1) fail("max_path_length must be at least 1");
  if (n_targets == 0 || n_targets > n_articles) fail("n_targets must lie in [1, n_articles]");
  if (std::max(0.5, alpha + 0.05) >= 0.95) fail("alpha leaves no room for planted link rates below 0.95");
  const double links = link_density * static_cast<double>(n_articles) * static_cast<double>(n_articles - 1);
  if (links < static_cast<double>(n_articles)) fail("link_density gives fewer than one link per article");
  const double planted = std::round(removal_fraction * links);
  if (planted > std::floor(planted_pool_fraction * links))
    fail("removal_fraction exceeds the pool of high-relatedness links");
}

double World::relatedness(ArticleId a, ArticleId b) const {
  return dot(positions.at(to_index(a)), positions.at(to_index(b)));
}

World generate_world(const SynthConfig& config) {
  config.validate();
  Rng rng(config.seed);
  World world;
  world.config = config;
  const std::size_t n = config.n_articles;
  world.titles = TitleTable(make_titles(n, rng));
  world.positions = sphere_points(n, config.dimension, rng);
  world.reference_time = kReferenceTime;
  world.game_begin = kReferenceTime - 100 * kDay;
  world.game_end = kReferenceTime - 10 * kDay;

  // Game-time graph: mostly proximity-weighted links plus a few uniform ones.
  const auto degree = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(config.link_density * static_cast<double>(n - 1))));
  const auto n_long = static_cast<std::size_t>(std::lround(config.long_range_fraction * static_cast<double>(degree)));
  const std::size_t n_near = degree - std::min(n_long, degree);
  std::vector<LinkGraph::Edge> game_edges;
  std::vector<double> weights(n);
  for (std::uint32_t s = 0; s < n; ++s) {
    for (std::uint32_t t = 0; t < n; ++t)
      weights[t] = t == s ? 0.0
                          : std::exp(config.link_concentration *
                                     (dot(world.positions[s], world.positions[t]) - 1.0));
    std::vector<std::uint32_t> chosen = weighted_sample(weights, n_near, rng);
    std::vector<double> flat(n, 1.0);
    flat[s] = 0.0;
    for (const auto t : chosen) flat[t] = 0.0;
    for (const auto t : weighted_sample(flat, degree - chosen.size(), rng)) chosen.push_back(t);
    for (const auto t : chosen) game_edges.emplace_back(article_id(s), article_id(t));
  }
  world.game_graph = LinkGraph(n, game_edges, world.game_end);
  game_edges = world.game_graph.edges();

  // Planted removals among the closest links.
  std::vector<std::size_t> order(game_edges.size());
  std::iota(order.begin(), order.end(), 0);
  const auto cosine = [&](std::size_t e) {
    return world.relatedness(game_edges[e].first, game_edges[e].second);
  };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cosine(a) > cosine(b); });
  const auto pool_size =
      static_cast<std::size_t>(std::floor(config.planted_pool_fraction * static_cast<double>(game_edges.size())));
  const auto n_planted =
      static_cast<std::size_t>(std::lround(config.removal_fraction * static_cast<double>(game_edges.size())));
  std::vector<std::size_t> pool(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(pool_size));
  std::shuffle(pool.begin(), pool.end(), rng);
  std::vector<std::size_t> out_degree(n, 0);
  for (const auto& [s, t] : game_edges) ++out_degree[to_index(s)];
  std::vector<bool> removed(game_edges.size(), false);
  std::size_t planted_count = 0;
  for (const auto e : pool) {
    if (planted_count == n_planted) break;
    auto& deg = out_degree[to_index(game_edges[e].first)];
    if (deg <= 1) continue;  // keep every article navigable
    --deg;
    removed[e] = true;
    ++planted_count;
  }
  if (planted_count < n_planted)
    throw Error(ErrorCode::infeasible_config, "not enough removable links for removal_fraction");
  std::vector<LinkGraph::Edge> snapshot_edges;
  for (std::size_t e = 0; e < game_edges.size(); ++e)
    if (!removed[e]) snapshot_edges.push_back(game_edges[e]);
  world.snapshot = LinkGraph(n, snapshot_edges, world.reference_time);

  // Creation times and link history.
  world.creation.resize(n);
  world.history = LinkHistory(n);
  for (std::size_t a = 0; a < n; ++a) {
    world.creation[a] = uniform_time(rng, kReferenceTime - 10 * kYear, kReferenceTime - kYear);
    world.history.set_creation_time(article_id(static_cast<std::uint32_t>(a)), world.creation[a]);
  }
  const auto record = [&](ArticleId s, ArticleId t, Interval presence) {
    world.history_records.push_back({s, t, presence});
    world.history.add_presence(s, t, presence);
  };
  const double planted_lo = std::max(0.5, config.alpha + 0.05);
  for (std::size_t e = 0; e < game_edges.size(); ++e) {
    const auto [s, t] = game_edges[e];
    const Timestamp created = world.creation[to_index(s)];
    if (!removed[e]) {
      record(s, t, {uniform_time(rng, created, world.game_begin), std::nullopt});
      continue;
    }
    // Deleted shortly before T, after the games were played.
    const double rate = uniform(rng, planted_lo, 0.95);
    const Timestamp end = uniform_time(rng, world.game_end + kDay, kReferenceTime);
    const auto span = static_cast<Timestamp>(std::llround(rate * static_cast<double>(kReferenceTime - created)));
    record(s, t, {std::max(created, end - span), end});
    world.planted.push_back({s, t, link_rate(s, t, world.history, kReferenceTime)});
  }
  std::sort(world.planted.begin(), world.planted.end(), [](const PlantedLink& a, const PlantedLink& b) {
    return std::tie(a.source, a.target) < std::tie(b.source, b.target);
  });

  // Texts: every game-time link is mentioned; unlinked articles are mentioned
  // with a probability that decays with angular distance.
  world.texts.assign(n, {});
  std::uniform_int_distribution<int> extra_fillers(0, 4);
  for (std::uint32_t s = 0; s < n; ++s) {
    const ArticleId source = article_id(s);
    std::vector<std::string> tokens;
    for (const auto t : world.game_graph.outlinks(source)) tokens.push_back(phrase_of(world.titles, t));
    for (std::uint32_t t = 0; t < n; ++t) {
      const ArticleId target = article_id(t);
      if (t == s || world.game_graph.has_edge(source, target)) continue;
      const double p = config.mention_scale *
                       std::exp(config.mention_concentration * (world.relatedness(source, target) - 1.0));
      if (uniform(rng) >= p) continue;
      tokens.push_back(phrase_of(world.titles, target));
      if (uniform(rng) < config.noise_history_fraction) {
        // A short-lived link well before the games; its rate stays below alpha.
        const Timestamp created = world.creation[s];
        const double rate = uniform(rng, 0.01, 0.8 * config.alpha);
        auto span = static_cast<Timestamp>(std::llround(rate * static_cast<double>(kReferenceTime - created)));
        span = std::max<Timestamp>(1, std::min(span, world.game_begin - created - 1));
        const Timestamp begin = uniform_time(rng, created, world.game_begin - span);
        record(source, target, {begin, begin + span});
      }
    }
    for (const auto filler : kFillers) tokens.emplace_back(filler);
    for (int i = extra_fillers(rng); i > 0; --i) tokens.emplace_back(kFillers[static_cast<std::size_t>(i) % kFillers.size()]);
    std::shuffle(tokens.begin(), tokens.end(), rng);
    std::string text;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i > 0) text += (i % 7 == 0) ? ". " : " ";
      text += tokens[i];
    }
    text += ".\n";
    world.texts[s] = std::move(text);
  }

  // Anchors mirror the snapshot; filler words are anchored once so that the
  // link-probability threshold has something to reject.
  for (const auto& [s, t] : world.snapshot.edges())
    world.anchors.push_back({s, phrase_of(world.titles, t), t, 1});
  for (std::size_t i = 0; i < kFillers.size(); ++i)
    world.anchors.push_back({article_id(static_cast<std::uint32_t>(i)), std::string(kFillers[i]),
                             article_id(static_cast<std::uint32_t>(i + 1)), 1});

  // Path targets: prefer articles that lost an inlink.
  std::vector<bool> has_planted(n, false);
  for (const auto& link : world.planted) has_planted[to_index(link.target)] = true;
  std::vector<ArticleId> preferred, others;
  for (std::uint32_t a = 0; a < n; ++a) (has_planted[a] ? preferred : others).push_back(article_id(a));
  std::shuffle(preferred.begin(), preferred.end(), rng);
  std::shuffle(others.begin(), others.end(), rng);
  preferred.insert(preferred.end(), others.begin(), others.end());
  world.targets.assign(preferred.begin(), preferred.begin() + static_cast<std::ptrdiff_t>(config.n_targets));
  std::sort(world.targets.begin(), world.targets.end());
  return world;
}

std::vector<NavigationPath> simulate_paths(const World& world, Diagnostics& diagnostics) {
  const auto& config = world.config;
  const auto& graph = world.game_graph;
  Rng rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<NavigationPath> paths;
  paths.reserve(config.n_paths);

  // Articles that can reach each target.
  std::vector<std::vector<ArticleId>> starts(world.targets.size());
  for (std::size_t i = 0; i < world.targets.size(); ++i) {
    const ArticleId target = world.targets[i];
    std::vector<bool> seen(graph.n_articles(), false);
    std::deque<ArticleId> queue{target};
    seen[to_index(target)] = true;
    while (!queue.empty()) {
      const ArticleId page = queue.front();
      queue.pop_front();
      for (const auto source : graph.inlinks(page)) {
        if (seen[to_index(source)]) continue;
        seen[to_index(source)] = true;
        starts[i].push_back(source);
        queue.push_back(source);
      }
    }
    std::sort(starts[i].begin(), starts[i].end());
    if (starts[i].empty())
      diagnostics.warn("unreachable_target",
                       "no article reaches " + world.titles.title(target) + "; its paths are skipped");
  }

  std::vector<std::uint32_t> visited(graph.n_articles(), 0);
  std::uint32_t stamp = 0;
  for (std::size_t j = 0; j < config.n_paths; ++j) {
    const std::size_t slot = j % world.targets.size();
    if (starts[slot].empty()) continue;
    const ArticleId target = world.targets[slot];
    std::uniform_int_distribution<std::size_t> pick_start(0, starts[slot].size() - 1);
    ArticleId page = starts[slot][pick_start(rng)];
    std::vector<ArticleId> pages{page};
    ++stamp;
    visited[to_index(page)] = stamp;
    bool finished = false;
    for (std::size_t step = 0; step < config.max_path_length; ++step) {
      const auto outs = graph.outlinks(page);
      if (graph.has_edge(page, target)) {
        pages.push_back(target);
        finished = true;
        break;
      }
      ArticleId next = outs.front();
      if (uniform(rng) < config.epsilon) {
        std::uniform_int_distribution<std::size_t> pick(0, outs.size() - 1);
        next = outs[pick(rng)];
      } else {
        double best = -2.0;
        bool found = false;
        for (const auto candidate : outs) {
          if (visited[to_index(candidate)] == stamp) continue;
          const double score = world.relatedness(candidate, target);
          if (score > best) {
            best = score;
            next = candidate;
            found = true;
          }
        }
        if (!found) {
          std::uniform_int_distribution<std::size_t> pick(0, outs.size() - 1);
          next = outs[pick(rng)];
        }
      }
      page = next;
      visited[to_index(page)] = stamp;
      pages.push_back(page);
    }
    // An unfinished path is cut where the player gave up; the target is only declared.
    paths.emplace_back(target, std::move(pages), finished);
  }
  return paths;
}

Corpus world_corpus(const World& world, Diagnostics& diagnostics, const AnchorThresholds& thresholds,
                    const MatchOptions& options) {
  Corpus corpus;
  corpus.titles = world.titles;
  corpus.graph = world.snapshot;
  const TextCollection texts(world.texts);
  corpus.dictionary = AnchorDictionary::build(world.anchors, texts, world.titles.size(), thresholds,
                                              options, diagnostics);
  corpus.mentions = MentionIndex::build(corpus.dictionary, texts);
  return corpus;
}

SynthFiles synth_files(const std::filesystem::path& dir) {
  return {dir / "titles.txt",         dir / "links.tsv",           dir / "anchors.tsv",
          dir / "texts",              dir / "history.tsv",         dir / "creation.tsv",
          dir / "paths_finished.tsv", dir / "paths_unfinished.tsv", dir / "planted.tsv",
          dir / "world.cfg"};
}

SynthFiles write_world(const World& world, std::span<const NavigationPath> paths,
                       const std::filesystem::path& dir, const io::Metadata* metadata) {
  const auto files = synth_files(dir);
  const auto& titles = world.titles;
  const auto open = [&](const std::filesystem::path& file) {
    auto out = io::open_output(file);
    if (metadata) metadata->write_comment_block(out);
    return out;
  };
  {
    auto out = open(files.titles);
    for (const auto& title : titles.titles()) out << title << '\n';
  }
  {
    auto out = open(files.links);
    for (const auto& [s, t] : world.snapshot.edges()) out << titles.title(s) << '\t' << titles.title(t) << '\n';
  }
  {
    auto out = open(files.anchors);
    for (const auto& a : world.anchors)
      out << titles.title(a.source) << '\t' << a.phrase << '\t' << titles.title(a.target) << '\t' << a.count << '\n';
  }
  std::filesystem::create_directories(files.texts);
  for (std::size_t a = 0; a < world.texts.size(); ++a) {
    auto out = io::open_output(files.texts / (titles.titles()[a] + ".txt"));
    out << world.texts[a];
  }
  {
    auto out = open(files.history);
    for (const auto& r : world.history_records) {
      out << titles.title(r.source) << '\t' << titles.title(r.target) << '\t' << r.presence.begin << '\t';
      if (r.presence.end) out << *r.presence.end;
      out << '\n';
    }
  }
  {
    auto out = open(files.creation);
    for (std::size_t a = 0; a < world.creation.size(); ++a) out << titles.titles()[a] << '\t' << world.creation[a] << '\n';
  }
  {
    auto finished = open(files.paths_finished);
    auto unfinished = open(files.paths_unfinished);
    for (std::size_t j = 0; j < paths.size(); ++j) {
      const auto& path = paths[j];
      auto& out = path.finished() ? finished : unfinished;
      const Timestamp when =
          world.game_begin + static_cast<Timestamp>(j) * ((world.game_end - world.game_begin) / static_cast<Timestamp>(paths.size() + 1));
      out << "synth" << j << '\t' << when << '\t' << 10 * path.clicks() << '\t';
      for (std::size_t i = 0; i < path.pages().size(); ++i) out << (i ? ";" : "") << titles.title(path.pages()[i]);
      if (path.finished())
        out << "\tNULL\n";
      else
        out << '\t' << titles.title(path.target()) << "\ttimeout\n";
    }
  }
  {
    auto out = open(files.planted);
    for (const auto& link : world.planted)
      out << titles.title(link.source) << '\t' << titles.title(link.target) << '\t' << io::format_double(link.rate) << '\n';
  }
  {
    auto out = open(files.config);
    out << "# game window " << world.game_begin << " .. " << world.game_end << '\n';
    out << "reference-time = " << world.reference_time << '\n';
  }
  return files;
}

}  // namespace pathlinks
