#include "pathlinks/groundtruth.hpp"

#include <algorithm>
#include <limits>

#include "pathlinks/error.hpp"
#include "pathlinks/io.hpp"

namespace pathlinks {

namespace {

constexpr Timestamp kOpenEnd = std::numeric_limits<Timestamp>::max();

Timestamp end_or_open(const Interval& interval) { return interval.end.value_or(kOpenEnd); }

}  // namespace

std::vector<Interval> union_intervals(std::vector<Interval> intervals) {
  std::erase_if(intervals, [](const Interval& i) { return i.end && *i.end <= i.begin; });
  std::sort(intervals.begin(), intervals.end(), [](const Interval& a, const Interval& b) {
    if (a.begin != b.begin) return a.begin < b.begin;
    return end_or_open(a) < end_or_open(b);
  });
  std::vector<Interval> merged;
  for (const auto& interval : intervals) {
    if (!merged.empty() && interval.begin <= end_or_open(merged.back())) {
      if (end_or_open(interval) > end_or_open(merged.back())) merged.back().end = interval.end;
    } else {
      merged.push_back(interval);
    }
  }
  return merged;
}

Timestamp covered_length(const std::vector<Interval>& merged, Timestamp from, Timestamp to) {
  Timestamp total = 0;
  for (const auto& interval : merged) {
    const Timestamp begin = std::max(interval.begin, from);
    const Timestamp end = std::min(end_or_open(interval), to);
    if (end > begin) total += end - begin;
  }
  return total;
}

LinkHistory::LinkHistory(std::size_t n_articles) : creation_(n_articles) {}

LinkHistory LinkHistory::load(const std::filesystem::path& history_file,
                              const std::filesystem::path& creation_file, const TitleTable& titles,
                              Diagnostics& diagnostics) {
  LinkHistory history(titles.size());
  std::unordered_map<LinkPair, std::vector<Interval>, LinkPairHash> raw;
  io::for_each_data_line(history_file, [&](std::size_t line_number, std::string_view line) {
    const auto where = history_file.filename().string() + ":" + std::to_string(line_number);
    const auto fields = io::split(line, '\t');
    if (fields.size() != 4)
      throw Error(ErrorCode::parse_failure, where + ": expected source<TAB>target<TAB>begin<TAB>end");
    const auto source = titles.find(fields[0]);
    const auto target = titles.find(fields[1]);
    if (!source || !target) {
      diagnostics.warn("history_unknown_title", where + ": unknown title");
      return;
    }
    Interval interval{io::parse_int(fields[2]), std::nullopt};
    if (!fields[3].empty()) interval.end = io::parse_int(fields[3]);
    raw[{*source, *target}].push_back(interval);
  });
  for (auto& [pair, intervals] : raw) history.presence_[pair] = union_intervals(std::move(intervals));

  io::for_each_data_line(creation_file, [&](std::size_t line_number, std::string_view line) {
    const auto where = creation_file.filename().string() + ":" + std::to_string(line_number);
    const auto fields = io::split(line, '\t');
    if (fields.size() != 2)
      throw Error(ErrorCode::parse_failure, where + ": expected title<TAB>creation_ts");
    const auto article = titles.find(fields[0]);
    if (!article) {
      diagnostics.warn("history_unknown_title", where + ": unknown title");
      return;
    }
    history.set_creation_time(*article, io::parse_int(fields[1]));
  });
  return history;
}

void LinkHistory::add_presence(ArticleId source, ArticleId target, Interval interval) {
  auto& list = presence_[{source, target}];
  list.push_back(interval);
  list = union_intervals(std::move(list));
}

void LinkHistory::set_creation_time(ArticleId article, Timestamp created) {
  if (to_index(article) >= creation_.size()) creation_.resize(to_index(article) + 1);
  creation_[to_index(article)] = created;
}

const std::vector<Interval>& LinkHistory::intervals(ArticleId source, ArticleId target) const {
  static const std::vector<Interval> kNever;
  const auto it = presence_.find({source, target});
  return it == presence_.end() ? kNever : it->second;
}

std::optional<Timestamp> LinkHistory::creation_time(ArticleId article) const {
  if (to_index(article) >= creation_.size()) return std::nullopt;
  return creation_[to_index(article)];
}

double link_rate(ArticleId s, ArticleId t, const LinkHistory& history, Timestamp reference_time) {
  const auto created = history.creation_time(s);
  if (!created)
    throw Error(ErrorCode::invalid_argument,
                "no creation time for article " + std::to_string(to_index(s)));
  if (*created >= reference_time)
    throw Error(ErrorCode::invalid_argument,
                "article " + std::to_string(to_index(s)) + " created at or after the reference time");
  const Timestamp present = covered_length(history.intervals(s, t), *created, reference_time);
  return static_cast<double>(present) / static_cast<double>(reference_time - *created);
}

bool label_candidate(ArticleId s, ArticleId t, const LinkHistory& history, const LabelConfig& config) {
  return link_rate(s, t, history, config.reference_time) > config.alpha;
}

double post_snapshot_rate(ArticleId s, ArticleId t, const LinkHistory& history,
                          const LabelConfig& config) {
  if (config.static_snapshot_time >= config.reference_time)
    throw Error(ErrorCode::invalid_argument, "static snapshot must predate the reference time");
  const Timestamp present =
      covered_length(history.intervals(s, t), config.static_snapshot_time, config.reference_time);
  return static_cast<double>(present) /
         static_cast<double>(config.reference_time - config.static_snapshot_time);
}

bool strict_label_candidate(ArticleId s, ArticleId t, const LinkHistory& history,
                            const LabelConfig& config, const LinkGraph& static_snapshot) {
  if (static_snapshot.has_edge(s, t))
    throw Error(ErrorCode::invalid_argument,
                "strict labels apply only to links absent from the static snapshot");
  return post_snapshot_rate(s, t, history, config) > config.alpha;
}

HumanLabels load_human_labels(const std::filesystem::path& file, const TitleTable& titles) {
  HumanLabels labels;
  bool first = true;
  io::for_each_data_line(file, [&](std::size_t line_number, std::string_view line) {
    const auto where = file.filename().string() + ":" + std::to_string(line_number) + ": ";
    std::vector<std::string> fields;
    try {
      fields = io::parse_csv_line(line);
    } catch (const Error& e) {
      throw Error(ErrorCode::parse_failure, where + e.what());
    }
    if (first && !fields.empty() && fields[0] == "source") {
      first = false;
      return;
    }
    first = false;
    if (fields.size() != 4) throw Error(ErrorCode::parse_failure, where + "expected 4 columns");
    const auto source = titles.find(fields[0]);
    const auto target = titles.find(fields[1]);
    if (!source || !target) throw Error(ErrorCode::parse_failure, where + "unknown title");
    std::int64_t positive = 0;
    std::int64_t raters = 0;
    try {
      positive = io::parse_int(fields[2]);
      raters = io::parse_int(fields[3]);
    } catch (const Error& e) {
      throw Error(ErrorCode::parse_failure, where + e.what());
    }
    if (raters <= 0 || positive < 0 || positive > raters)
      throw Error(ErrorCode::parse_failure, where + "rater counts out of range");
    labels[{*source, *target}] = {static_cast<std::uint32_t>(positive), static_cast<std::uint32_t>(raters)};
  });
  return labels;
}

}  // namespace pathlinks
