#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <unordered_map>
#include <vector>

#include "pathlinks/corpus.hpp"
#include "pathlinks/diagnostics.hpp"
#include "pathlinks/ids.hpp"

namespace pathlinks {

// Half-open presence interval [begin, end); an absent end means the link is
// still present.
struct Interval {
  Timestamp begin = 0;
  std::optional<Timestamp> end;

  friend bool operator==(const Interval&, const Interval&) = default;
};

// Sorted, disjoint union. Touching intervals merge.
std::vector<Interval> union_intervals(std::vector<Interval> intervals);

// Total length of the union of `intervals` inside [from, to).
Timestamp covered_length(const std::vector<Interval>& merged, Timestamp from, Timestamp to);

// When each link existed, and when each article was created.
class LinkHistory {
 public:
  LinkHistory() = default;
  explicit LinkHistory(std::size_t n_articles);

  // history: `source<TAB>target<TAB>begin_ts<TAB>end_ts` (empty end = open);
  // creation: `title<TAB>creation_ts`. Rows naming unknown titles are skipped
  // with a warning.
  static LinkHistory load(const std::filesystem::path& history_file,
                          const std::filesystem::path& creation_file, const TitleTable& titles,
                          Diagnostics& diagnostics);

  void add_presence(ArticleId source, ArticleId target, Interval interval);
  void set_creation_time(ArticleId article, Timestamp created);

  // Merged intervals; empty for pairs that never linked.
  const std::vector<Interval>& intervals(ArticleId source, ArticleId target) const;
  std::optional<Timestamp> creation_time(ArticleId article) const;
  std::size_t n_pairs() const noexcept { return presence_.size(); }

 private:
  std::unordered_map<LinkPair, std::vector<Interval>, LinkPairHash> presence_;
  std::vector<std::optional<Timestamp>> creation_;
};

// Fraction of [creation(s), T) during which s linked to t. Throws when s was
// created at or after T or its creation time is unknown.
double link_rate(ArticleId s, ArticleId t, const LinkHistory& history, Timestamp reference_time);

enum class LabelMode { standard, strict };

struct LabelConfig {
  double alpha = 0.30;
  LabelMode mode = LabelMode::standard;
  Timestamp reference_time = 0;
  // Date of the static game snapshot; strict mode only.
  Timestamp static_snapshot_time = 0;
};

// Positive iff link_rate > alpha.
bool label_candidate(ArticleId s, ArticleId t, const LinkHistory& history, const LabelConfig& config);

// Fraction of [static snapshot, T) during which s linked to t.
double post_snapshot_rate(ArticleId s, ArticleId t, const LinkHistory& history,
                          const LabelConfig& config);

// Positive iff the post-snapshot presence fraction exceeds alpha. The static
// snapshot graph must not contain (s, t); throws Error(invalid_argument) if it
// does, or if static_snapshot_time >= reference_time.
bool strict_label_candidate(ArticleId s, ArticleId t, const LinkHistory& history,
                            const LabelConfig& config, const LinkGraph& static_snapshot);

struct HumanLabel {
  std::uint32_t positive_raters = 0;
  std::uint32_t raters = 0;

  // Over half of the raters.
  bool positive() const noexcept { return 2 * positive_raters > raters; }
  double mean() const noexcept {
    return raters == 0 ? 0.0 : static_cast<double>(positive_raters) / raters;
  }
};

using HumanLabels = std::unordered_map<LinkPair, HumanLabel, LinkPairHash>;

// CSV `source,target,n_positive_raters,n_raters`; an optional header row is
// recognized by its first field. Malformed rows throw.
HumanLabels load_human_labels(const std::filesystem::path& file, const TitleTable& titles);

}  // namespace pathlinks
