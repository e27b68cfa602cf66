#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pathlinks/corpus.hpp"
#include "pathlinks/diagnostics.hpp"
#include "pathlinks/ids.hpp"

namespace pathlinks {

inline constexpr std::string_view kBackClick = "<";

// One game record as logged, before title resolution.
struct RawPathRecord {
  std::string session_id;
  Timestamp timestamp = 0;
  double duration = 0.0;
  std::vector<std::string> click_tokens;  // `<` denotes a back-click
  std::optional<std::string> declared_target;
  bool finished = true;
};

enum class PathFileKind { finished, unfinished };

// Wikispeedia TSV. Finished files carry
//   session, timestamp, duration, path, rating
// and unfinished files carry
//   session, timestamp, duration, path, target, type
// with `path` semicolon separated. Malformed lines are skipped and counted.
std::vector<RawPathRecord> parse_wikispeedia(const std::filesystem::path& file, PathFileKind kind,
                                             Diagnostics& diagnostics);

// JSON lines, one object per record:
//   {"start": "A", "clicks": ["B", "<", "C"], "target": "C", "finished": true,
//    "session": "...", "timestamp": 0, "duration": 0}
// `clicks` lists the pages clicked after `start`; `session`, `timestamp` and
// `duration` are optional.
std::vector<RawPathRecord> parse_generic_paths(const std::filesystem::path& file,
                                               Diagnostics& diagnostics);

// Applies back-clicks. Without detours each `<` pops the page stack and the
// abandoned branch disappears; with detours the page returned to is appended
// as a revisit. Throws Error(parse_failure) when a `<` has nothing to return to.
std::vector<std::string> resolve_backclicks(std::span<const std::string> tokens, bool keep_detours);

// A normalized path p_0 .. p_n = t. Unfinished paths never reach the target:
// their pages are p_0 .. p_{n-1} and the target is the declared one, as if the
// next click would have reached it.
class NavigationPath {
 public:
  NavigationPath(ArticleId target, std::vector<ArticleId> pages, bool finished);

  ArticleId target() const noexcept { return target_; }
  ArticleId start() const noexcept { return pages_.front(); }
  const std::vector<ArticleId>& pages() const noexcept { return pages_; }
  bool finished() const noexcept { return finished_; }

  // Number of clicks n.
  std::size_t clicks() const noexcept { return finished_ ? pages_.size() - 1 : pages_.size(); }
  // p_i for 0 <= i < n (and i = n on finished paths).
  ArticleId page(std::size_t i) const { return pages_.at(i); }
  double rel_position(std::size_t i) const noexcept {
    return static_cast<double>(i) / static_cast<double>(clicks());
  }

  friend bool operator==(const NavigationPath&, const NavigationPath&) = default;

 private:
  ArticleId target_;
  std::vector<ArticleId> pages_;
  bool finished_;
};

struct NormalizeOptions {
  bool keep_detours = false;
  bool include_unfinished = false;
};

// Resolves titles, truncates at the first arrival at the target and returns
// nothing for records that must be dropped (rejections are counted).
std::optional<NavigationPath> normalize_path(const RawPathRecord& record, const TitleTable& titles,
                                             std::optional<ArticleId> target_override,
                                             const NormalizeOptions& options,
                                             Diagnostics& diagnostics);

std::vector<NavigationPath> normalize_paths(std::span<const RawPathRecord> records,
                                            const TitleTable& titles,
                                            const NormalizeOptions& options,
                                            Diagnostics& diagnostics);

// Statistics of a source page over all paths to one target.
struct PairStats {
  ArticleId source{};
  std::uint32_t n_paths_through = 0;
  // Sum over paths of the relative position of the first interior occurrence.
  double position_sum = 0.0;
  std::uint32_t penultimate_count = 0;

  double mean_rel_position() const noexcept {
    return n_paths_through == 0 ? 0.0 : position_sum / n_paths_through;
  }
  friend bool operator==(const PairStats&, const PairStats&) = default;
};

// Paths grouped by target with per-(source, target) statistics. Interior pages
// are p_1 .. p_{n-1}; a page counts once per path at its first interior index.
class TargetIndex {
 public:
  TargetIndex() = default;

  // Paths keep their input order within each target.
  static TargetIndex build(std::vector<NavigationPath> paths);

  // Sorted targets with at least one path.
  const std::vector<ArticleId>& targets() const noexcept { return targets_; }
  std::span<const NavigationPath> paths(ArticleId target) const;
  std::span<const NavigationPath> all_paths() const noexcept { return paths_; }
  std::size_t n_paths(ArticleId target) const { return paths(target).size(); }
  // Sorted by source id.
  std::span<const PairStats> pairs(ArticleId target) const;
  const PairStats* find(ArticleId source, ArticleId target) const;

 private:
  struct Group {
    ArticleId target;
    std::uint32_t path_begin, path_end;
    std::uint32_t pair_begin, pair_end;
  };
  const Group* group(ArticleId target) const;

  std::vector<NavigationPath> paths_;
  std::vector<PairStats> pairs_;
  std::vector<Group> groups_;
  std::vector<ArticleId> targets_;
};

struct DatasetStats {
  std::size_t n_paths = 0;
  std::size_t n_finished = 0;
  std::size_t n_missions = 0;
  std::size_t n_targets = 0;
  double mean_paths_per_target = 0.0;
  double median_paths_per_target = 0.0;
  std::size_t targets_with_100 = 0;
  std::size_t targets_with_500 = 0;
};

DatasetStats dataset_stats(const TargetIndex& index);

// Normalized path file: `target<TAB>finished(0|1)<TAB>p0;p1;...` with titles.
void write_paths(std::ostream& out, std::span<const NavigationPath> paths, const TitleTable& titles);
std::vector<NavigationPath> read_paths(const std::filesystem::path& file, const TitleTable& titles);

}  // namespace pathlinks
