#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "pathlinks/corpus.hpp"
#include "pathlinks/diagnostics.hpp"
#include "pathlinks/groundtruth.hpp"
#include "pathlinks/ids.hpp"
#include "pathlinks/io.hpp"
#include "pathlinks/traces.hpp"

namespace pathlinks {

struct SynthConfig {
  std::uint64_t seed = 1;
  std::size_t n_articles = 1000;
  std::size_t dimension = 3;
  // Fraction of ordered article pairs that are linked before removals.
  double link_density = 0.02;
  double removal_fraction = 0.05;  // rho
  double epsilon = 0.1;            // navigator's chance of a random click
  std::size_t n_paths = 20000;
  std::size_t max_path_length = 30;
  std::size_t n_targets = 100;

  // Share of each article's links drawn uniformly instead of by proximity.
  double long_range_fraction = 0.15;
  // Concentration of link and mention probabilities around an article.
  double link_concentration = 20.0;
  double mention_concentration = 12.0;
  // Probability that an unlinked, identical-position article mentions another.
  double mention_scale = 0.35;
  // Only the closest links are eligible for removal.
  double planted_pool_fraction = 0.07;
  // Unlinked mentions that get a short-lived link in the history.
  double noise_history_fraction = 0.3;
  double alpha = 0.30;

  // Throws Error(infeasible_config).
  void validate() const;
};

struct PlantedLink {
  ArticleId source{};
  ArticleId target{};
  double rate = 0.0;
  friend bool operator==(const PlantedLink&, const PlantedLink&) = default;
};

struct HistoryRecord {
  ArticleId source{};
  ArticleId target{};
  Interval presence;
};

struct World {
  SynthConfig config;
  TitleTable titles;
  std::vector<std::vector<double>> positions;  // unit vectors
  LinkGraph game_graph;  // what navigators see, planted links included
  LinkGraph snapshot;    // reference snapshot at T, planted links removed
  std::vector<std::string> texts;
  std::vector<AnchorOccurrence> anchors;
  std::vector<HistoryRecord> history_records;  // emission order
  LinkHistory history;
  std::vector<Timestamp> creation;
  std::vector<PlantedLink> planted;  // sorted
  std::vector<ArticleId> targets;    // path targets, sorted
  Timestamp reference_time = 0;  // T, the snapshot date
  Timestamp game_begin = 0;
  Timestamp game_end = 0;

  double relatedness(ArticleId a, ArticleId b) const;
};

World generate_world(const SynthConfig& config);

// Navigation on the game-time graph. Paths that hit the length limit are
// emitted unfinished; targets nobody can reach are skipped with a warning.
std::vector<NavigationPath> simulate_paths(const World& world, Diagnostics& diagnostics);

// Builds the anchor dictionary and mention index from the in-memory texts.
Corpus world_corpus(const World& world, Diagnostics& diagnostics,
                    const AnchorThresholds& thresholds = {}, const MatchOptions& options = {});

struct SynthFiles {
  std::filesystem::path titles, links, anchors, texts, history, creation, paths_finished,
      paths_unfinished, planted, config;
  CorpusPaths corpus() const { return {titles, links, anchors, texts}; }
};

SynthFiles synth_files(const std::filesystem::path& dir);

// Writes the world and its traces in the ingestible file formats. Every file
// except the article texts starts with the metadata block when one is given.
SynthFiles write_world(const World& world, std::span<const NavigationPath> paths,
                       const std::filesystem::path& dir, const io::Metadata* metadata = nullptr);

}  // namespace pathlinks
