#include "pathlinks/eval.hpp"

#include <algorithm>
#include <ostream>

#include "pathlinks/error.hpp"
#include "pathlinks/io.hpp"

namespace pathlinks {

std::optional<std::vector<double>> precision_at_k(const RankedSuggestions& ranked,
                                                  const Labeler& labels, std::size_t max_k) {
  if (ranked.entries.size() < max_k) return std::nullopt;
  std::vector<double> precision(max_k);
  std::size_t positives = 0;
  for (std::size_t k = 1; k <= max_k; ++k) {
    if (labels(ranked.entries[k - 1].source, ranked.target)) ++positives;
    precision[k - 1] = static_cast<double>(positives) / static_cast<double>(k);
  }
  return precision;
}

EvalReport aggregate_report(std::span<const TargetPrecision> per_target, std::size_t max_k) {
  if (per_target.empty())
    throw Error(ErrorCode::ineligible_evaluation,
                "no target has at least " + std::to_string(max_k) + " ranked candidates");
  EvalReport report;
  report.max_k = max_k;
  report.per_target.assign(per_target.begin(), per_target.end());
  std::sort(report.per_target.begin(), report.per_target.end(),
            [](const TargetPrecision& a, const TargetPrecision& b) { return a.target < b.target; });
  report.mean_precision.assign(max_k, 0.0);
  for (const auto& target : report.per_target) {
    if (target.precision.size() != max_k)
      throw Error(ErrorCode::invalid_argument, "precision vector length differs from K");
    for (std::size_t k = 0; k < max_k; ++k) report.mean_precision[k] += target.precision[k];
  }
  for (auto& value : report.mean_precision) value /= static_cast<double>(report.per_target.size());
  double sum = 0.0;
  for (const auto value : report.mean_precision) sum += value;
  report.auc = sum / static_cast<double>(max_k);
  return report;
}

EvalReport evaluate_rankings(std::span<const RankedSuggestions> rankings, const Labeler& labels,
                             std::size_t max_k, const std::set<ArticleId>* only_targets) {
  if (max_k == 0) throw Error(ErrorCode::invalid_argument, "K must be at least 1");
  std::vector<TargetPrecision> per_target;
  std::size_t ranked = 0;
  for (const auto& ranking : rankings) {
    if (only_targets && !only_targets->contains(ranking.target)) continue;
    ++ranked;
    if (auto precision = precision_at_k(ranking, labels, max_k))
      per_target.push_back({ranking.target, std::move(*precision)});
  }
  EvalReport report = aggregate_report(per_target, max_k);
  report.n_targets_ranked = ranked;
  if (!rankings.empty()) {
    report.selection = rankings.front().selection;
    report.method = rankings.front().method;
  }
  return report;
}

std::set<ArticleId> eligible_targets(std::span<const RankedSuggestions> rankings, std::size_t max_k) {
  std::set<ArticleId> targets;
  for (const auto& ranking : rankings)
    if (ranking.entries.size() >= max_k) targets.insert(ranking.target);
  return targets;
}

std::vector<double> final_click_curve(std::span<const RankedSuggestions> rankings, std::size_t max_k) {
  std::vector<std::size_t> final_clicks(max_k, 0);
  std::vector<std::size_t> totals(max_k, 0);
  for (const auto& ranking : rankings) {
    if (ranking.selection != Selection::path)
      throw Error(ErrorCode::invalid_argument,
                  "final-click analysis needs path-based rankings with penultimate counts");
    const std::size_t depth = std::min(max_k, ranking.entries.size());
    for (std::size_t k = 0; k < depth; ++k) {
      ++totals[k];
      if (ranking.entries[k].penultimate_count >= 1) ++final_clicks[k];
    }
  }
  std::vector<double> curve(max_k, 0.0);
  for (std::size_t k = 0; k < max_k; ++k)
    if (totals[k] > 0) curve[k] = static_cast<double>(final_clicks[k]) / static_cast<double>(totals[k]);
  return curve;
}

std::vector<VolumePoint> volume_precision_curve(std::span<const RankedSuggestions> rankings,
                                                const Labeler& labels, const TitleTable* titles,
                                                std::span<const std::size_t> grid) {
  struct Pooled {
    RankedEntry entry;
    ArticleId target;
  };
  std::vector<Pooled> pooled;
  for (const auto& ranking : rankings)
    for (const auto& entry : ranking.entries) pooled.push_back({entry, ranking.target});
  std::sort(pooled.begin(), pooled.end(), [&](const Pooled& a, const Pooled& b) {
    if (ranks_before(a.entry, b.entry, titles)) return true;
    if (ranks_before(b.entry, a.entry, titles)) return false;
    if (titles) {
      const auto& ta = titles->title(a.target);
      const auto& tb = titles->title(b.target);
      if (ta != tb) return ta < tb;
    }
    return a.target < b.target;
  });

  std::vector<std::size_t> prefix_positives(pooled.size() + 1, 0);
  for (std::size_t i = 0; i < pooled.size(); ++i)
    prefix_positives[i + 1] = prefix_positives[i] + (labels(pooled[i].entry.source, pooled[i].target) ? 1 : 0);

  std::vector<VolumePoint> points;
  const auto add = [&](std::size_t n) {
    if (n == 0 || n > pooled.size()) return;
    points.push_back({n, static_cast<double>(prefix_positives[n]) / static_cast<double>(n)});
  };
  if (grid.empty()) {
    for (std::size_t n = 1; n <= pooled.size(); ++n) add(n);
  } else {
    for (const auto n : grid) add(n);
  }
  return points;
}

// --- bucket analysis ----------------------------------------------------------

double BucketRow::mention_fraction() const noexcept {
  return pages == 0 ? 0.0 : static_cast<double>(mentioning) / static_cast<double>(pages);
}

double BucketRow::not_linking_mention_fraction() const noexcept {
  return not_linking == 0 ? 0.0
                          : static_cast<double>(not_linking_mentioning) / static_cast<double>(not_linking);
}

double BucketRow::positive_fraction(std::size_t alpha_index) const noexcept {
  if (not_linking_mentioning == 0 || alpha_index >= positives.size()) return 0.0;
  return static_cast<double>(positives[alpha_index]) / static_cast<double>(not_linking_mentioning);
}

BucketTable bucket_analysis(std::span<const NavigationPath> paths, const MentionIndex& mentions,
                            const LinkGraph& graph, const LinkRateFn* link_rate,
                            std::span<const double> alphas) {
  BucketTable table;
  table.alphas.assign(alphas.begin(), alphas.end());
  std::vector<BucketRow> rows(kPositionBuckets);
  for (std::size_t b = 0; b < kPositionBuckets; ++b) {
    rows[b].lower = static_cast<double>(b) / kPositionBuckets;
    rows[b].upper = static_cast<double>(b + 1) / kPositionBuckets;
    rows[b].positives.assign(alphas.size(), 0);
  }
  for (const auto& path : paths) {
    if (!path.finished() || path.clicks() < kMinBucketPathClicks) continue;
    ++table.n_paths;
    const std::size_t n = path.clicks();
    const ArticleId target = path.target();
    for (std::size_t i = 1; i < n; ++i) {
      BucketRow& row = rows[(kPositionBuckets * i) / n];
      const ArticleId page = path.page(i);
      const bool mentioned = mentions.mentions(page, target);
      const bool linked = graph.has_edge(page, target);
      ++row.pages;
      row.mentioning += mentioned;
      if (linked) continue;
      ++row.not_linking;
      if (!mentioned) continue;
      ++row.not_linking_mentioning;
      if (link_rate && !alphas.empty()) {
        const double rate = (*link_rate)(page, target);
        for (std::size_t a = 0; a < alphas.size(); ++a) row.positives[a] += rate > alphas[a];
      }
    }
  }
  if (table.n_paths > 0) table.rows = std::move(rows);
  return table;
}

double PathMentionStats::mean_mentioning_pages() const noexcept {
  return n_paths == 0 ? 0.0 : static_cast<double>(mentioning_visits) / static_cast<double>(n_paths);
}

double PathMentionStats::linking_fraction() const noexcept {
  return mentioning_visits == 0 ? 0.0 : static_cast<double>(linking) / static_cast<double>(mentioning_visits);
}

PathMentionStats corpus_path_stats(std::span<const NavigationPath> paths, const MentionIndex& mentions,
                                   const LinkGraph& graph) {
  PathMentionStats stats;
  for (const auto& path : paths) {
    if (!path.finished()) continue;
    ++stats.n_paths;
    for (std::size_t i = 1; i < path.clicks(); ++i) {
      const ArticleId page = path.page(i);
      if (!mentions.mentions(page, path.target())) continue;
      ++stats.mentioning_visits;
      if (graph.has_edge(page, path.target()))
        ++stats.linking;
      else
        ++stats.non_linking;
    }
  }
  return stats;
}

Histogram false_negative_histogram(const AutoLabels& auto_labels, const HumanLabels& human_labels,
                                   std::size_t bins) {
  if (bins == 0) throw Error(ErrorCode::invalid_argument, "histogram needs at least one bin");
  Histogram histogram;
  for (std::size_t b = 0; b <= bins; ++b) histogram.edges.push_back(static_cast<double>(b) / bins);
  histogram.counts.assign(bins, 0);
  std::size_t shared = 0;
  for (const auto& [pair, positive] : auto_labels) {
    if (positive) continue;
    const auto it = human_labels.find(pair);
    if (it == human_labels.end()) continue;
    ++shared;
    // floor(mean * bins) computed on integers so that e.g. 9/10 lands in bin 9.
    const std::size_t bin = std::min<std::size_t>(
        bins - 1, (static_cast<std::size_t>(it->second.positive_raters) * bins) / it->second.raters);
    ++histogram.counts[bin];
  }
  if (shared == 0)
    throw Error(ErrorCode::invalid_argument,
                "no automatically negative candidate has a human label");
  return histogram;
}

void write_precision_csv(std::ostream& out, const EvalReport& report) {
  out << "k,precision\n";
  for (std::size_t k = 0; k < report.mean_precision.size(); ++k)
    out << k + 1 << ',' << io::format_double(report.mean_precision[k]) << '\n';
}

void write_curve_csv(std::ostream& out, std::string_view column, std::span<const double> values) {
  out << "k," << column << '\n';
  for (std::size_t k = 0; k < values.size(); ++k) out << k + 1 << ',' << io::format_double(values[k]) << '\n';
}

void write_volume_csv(std::ostream& out, std::span<const VolumePoint> points) {
  out << "n_suggestions,precision\n";
  for (const auto& p : points) out << p.n_suggestions << ',' << io::format_double(p.precision) << '\n';
}

void write_buckets_csv(std::ostream& out, const BucketTable& table) {
  out << "lower,upper,pages,mentioning,mention_fraction,not_linking,not_linking_mentioning,"
         "not_linking_mention_fraction";
  for (const auto alpha : table.alphas) out << ",positive_fraction_alpha_" << io::format_double(alpha);
  out << '\n';
  for (const auto& row : table.rows) {
    out << io::format_double(row.lower) << ',' << io::format_double(row.upper) << ',' << row.pages << ','
        << row.mentioning << ',' << io::format_double(row.mention_fraction()) << ',' << row.not_linking
        << ',' << row.not_linking_mentioning << ',' << io::format_double(row.not_linking_mention_fraction());
    for (std::size_t a = 0; a < table.alphas.size(); ++a) out << ',' << io::format_double(row.positive_fraction(a));
    out << '\n';
  }
}

void write_histogram_csv(std::ostream& out, const Histogram& histogram) {
  out << "lower,upper,count\n";
  for (std::size_t b = 0; b < histogram.counts.size(); ++b)
    out << io::format_double(histogram.edges[b]) << ',' << io::format_double(histogram.edges[b + 1]) << ','
        << histogram.counts[b] << '\n';
}

}  // namespace pathlinks
