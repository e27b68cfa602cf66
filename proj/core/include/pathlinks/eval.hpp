#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <unordered_map>
#include <vector>

#include "pathlinks/corpus.hpp"
#include "pathlinks/groundtruth.hpp"
#include "pathlinks/ids.hpp"
#include "pathlinks/ranking.hpp"
#include "pathlinks/traces.hpp"

namespace pathlinks {

using Labeler = std::function<bool(ArticleId source, ArticleId target)>;
using LinkRateFn = std::function<double(ArticleId source, ArticleId target)>;

// Element k-1 is the fraction of positives among the top k. Returns nothing
// when the ranking has fewer than K entries (the target is ineligible).
std::optional<std::vector<double>> precision_at_k(const RankedSuggestions& ranked,
                                                  const Labeler& labels, std::size_t max_k);

struct TargetPrecision {
  ArticleId target{};
  std::vector<double> precision;
};

struct EvalReport {
  std::size_t max_k = 0;
  Selection selection = Selection::path;
  RankMethod method = RankMethod::freq;
  double alpha = 0.0;
  std::size_t n_targets_ranked = 0;
  std::vector<TargetPrecision> per_target;  // eligible targets, by id
  std::vector<double> mean_precision;       // unweighted over eligible targets
  double auc = 0.0;                         // mean of mean_precision
};

// Throws Error(ineligible_evaluation) when `per_target` is empty.
EvalReport aggregate_report(std::span<const TargetPrecision> per_target, std::size_t max_k);

// precision_at_k over every ranking, then aggregate_report. `only_targets`
// restricts evaluation to a target subset (intersection-eligible comparisons).
EvalReport evaluate_rankings(std::span<const RankedSuggestions> rankings, const Labeler& labels,
                             std::size_t max_k, const std::set<ArticleId>* only_targets = nullptr);

// Targets with at least K suggestions.
std::set<ArticleId> eligible_targets(std::span<const RankedSuggestions> rankings, std::size_t max_k);

// Element k-1: fraction of rank-k suggestions, over all rankings that have a
// rank k, whose source was the penultimate page of at least one path.
// Throws for rankings from the no-selection baseline.
std::vector<double> final_click_curve(std::span<const RankedSuggestions> rankings, std::size_t max_k);

struct VolumePoint {
  std::size_t n_suggestions = 0;
  double precision = 0.0;
};

// Pools every suggestion across targets, orders by score (ties: path
// frequency, source title, target title) and reports the precision of the top
// n for each n in `grid`; an empty grid means every n.
std::vector<VolumePoint> volume_precision_curve(std::span<const RankedSuggestions> rankings,
                                                const Labeler& labels, const TitleTable* titles,
                                                std::span<const std::size_t> grid = {});

inline constexpr std::size_t kPositionBuckets = 5;
inline constexpr std::size_t kMinBucketPathClicks = 5;

struct BucketRow {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t pages = 0;
  std::size_t mentioning = 0;
  std::size_t not_linking = 0;
  std::size_t not_linking_mentioning = 0;  // candidates
  std::vector<std::size_t> positives;      // per alpha, among candidates

  double mention_fraction() const noexcept;
  double not_linking_mention_fraction() const noexcept;
  double positive_fraction(std::size_t alpha_index) const noexcept;
};

struct BucketTable {
  std::vector<double> alphas;
  std::size_t n_paths = 0;
  std::vector<BucketRow> rows;  // empty when no path qualifies
};

// Interior pages p_1 .. p_{n-1} of finished paths with n >= 5, bucketed by
// i/n into [0,0.2) .. [0.8,1.0). Candidate positives are counted only when a
// link-rate function is given.
BucketTable bucket_analysis(std::span<const NavigationPath> paths, const MentionIndex& mentions,
                            const LinkGraph& graph, const LinkRateFn* link_rate,
                            std::span<const double> alphas);

struct PathMentionStats {
  std::size_t n_paths = 0;
  std::size_t mentioning_visits = 0;
  std::size_t linking = 0;
  std::size_t non_linking = 0;

  double mean_mentioning_pages() const noexcept;
  double linking_fraction() const noexcept;
};

// Over finished paths: how many interior visits mention the target, and how
// those split into pages that link to it and pages that do not.
PathMentionStats corpus_path_stats(std::span<const NavigationPath> paths, const MentionIndex& mentions,
                                   const LinkGraph& graph);

using AutoLabels = std::unordered_map<LinkPair, bool, LinkPairHash>;

struct Histogram {
  std::vector<double> edges;  // bins + 1 uniform edges over [0, 1]
  std::vector<std::size_t> counts;
};

// Mean human label of automatically negative candidates. The last bin is
// closed on the right. Throws Error(invalid_argument) if no auto-negative pair
// has a human label.
Histogram false_negative_histogram(const AutoLabels& auto_labels, const HumanLabels& human_labels,
                                   std::size_t bins);

void write_precision_csv(std::ostream& out, const EvalReport& report);
void write_curve_csv(std::ostream& out, std::string_view column, std::span<const double> values);
void write_volume_csv(std::ostream& out, std::span<const VolumePoint> points);
void write_buckets_csv(std::ostream& out, const BucketTable& table);
void write_histogram_csv(std::ostream& out, const Histogram& histogram);

}  // namespace pathlinks
