#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "pathlinks/corpus.hpp"
#include "pathlinks/ids.hpp"
#include "pathlinks/traces.hpp"

namespace pathlinks {

enum class Selection { path, none };

std::string_view selection_name(Selection selection) noexcept;
Selection parse_selection(std::string_view name);

struct SourceCandidate {
  ArticleId source{};
  ArticleId target{};
  double path_frequency = 0.0;
  // Unset for baseline candidates never seen on a path.
  std::optional<double> mean_rel_position;
  std::uint32_t penultimate_count = 0;
  std::uint32_t n_paths_through = 0;

  friend bool operator==(const SourceCandidate&, const SourceCandidate&) = default;
};

struct CandidateSet {
  ArticleId target{};
  Selection selection = Selection::path;
  std::size_t n_paths_total = 0;
  std::vector<SourceCandidate> candidates;  // ordered by source id
};

struct MinerConfig {
  // Pairs whose mean relative position is <= this value are discarded.
  double position_threshold = 0.5;
  std::uint32_t min_support = 1;
};

// Why pairs were dropped. A pair failing several filters counts under each.
struct FilterCounts {
  std::size_t examined = 0;
  std::size_t linked = 0;
  std::size_t not_mentioned = 0;
  std::size_t early_position = 0;
  std::size_t low_support = 0;
  std::size_t kept = 0;

  FilterCounts& operator+=(const FilterCounts& other);
};

// Pairs (p_i, t), 0 < i < n, unioned over all paths to t.
std::span<const PairStats> generate_pairs(ArticleId target, const TargetIndex& index);

CandidateSet filter_candidates(ArticleId target, std::span<const PairStats> pairs,
                               std::size_t n_paths_total, const LinkGraph& graph,
                               const MentionIndex& mentions, const MinerConfig& config,
                               FilterCounts* counts = nullptr);

// generate_pairs followed by filter_candidates. Throws for unknown targets.
CandidateSet mine_target(ArticleId target, const TargetIndex& index, const LinkGraph& graph,
                         const MentionIndex& mentions, const MinerConfig& config,
                         FilterCounts* counts = nullptr);

// Every article that mentions but does not link to the target. Path statistics
// are attached where the index has them.
CandidateSet baseline_all_mentions(ArticleId target, const LinkGraph& graph,
                                   const MentionIndex& mentions,
                                   const TargetIndex* index = nullptr);

// CSV `target,source,path_frequency,mean_rel_position,penultimate_count,n_paths_through`.
// Targets without candidates appear as a `# target=<title> n_paths=<n>` line
// so that n_paths_total survives a round trip.
void write_candidates_csv(std::ostream& out, std::span<const CandidateSet> sets,
                          const TitleTable& titles);
std::vector<CandidateSet> read_candidates_csv(const std::filesystem::path& file,
                                              const TitleTable& titles, Selection selection);

}  // namespace pathlinks
