#include "pathlinks/traces.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <set>

#include "json.hpp"

#include "pathlinks/error.hpp"
#include "pathlinks/io.hpp"

namespace pathlinks {

namespace {

std::string where(const std::filesystem::path& file, std::size_t line) {
  return file.filename().string() + ":" + std::to_string(line);
}

bool valid_tokens(const std::vector<std::string>& tokens) {
  if (tokens.empty() || tokens.front() == kBackClick) return false;
  return std::none_of(tokens.begin(), tokens.end(), [](const std::string& t) { return t.empty(); });
}

std::string encode_path_title(std::string_view title) {
  std::string out;
  out.reserve(title.size());
  for (const char c : title) {
    if (c == ';')
      out += "%3B";
    else if (c == '\t')
      out += "%09";
    else
      out.push_back(c);
  }
  return out;
}

}  // namespace

std::vector<RawPathRecord> parse_wikispeedia(const std::filesystem::path& file, PathFileKind kind,
                                             Diagnostics& diagnostics) {
  const std::size_t expected_fields = kind == PathFileKind::finished ? 5 : 6;
  std::vector<RawPathRecord> records;
  io::for_each_data_line(file, [&](std::size_t line_number, std::string_view line) {
    const auto fields = io::split(line, '\t');
    if (fields.size() != expected_fields) {
      diagnostics.warn("malformed_line", where(file, line_number) + ": expected " +
                                             std::to_string(expected_fields) + " fields");
      return;
    }
    RawPathRecord record;
    record.session_id = std::string(fields[0]);
    try {
      record.timestamp = io::parse_int(fields[1]);
      record.duration = io::parse_double(fields[2]);
    } catch (const Error& e) {
      diagnostics.warn("malformed_line", where(file, line_number) + ": " + e.what());
      return;
    }
    for (const auto token : io::split(fields[3], ';')) record.click_tokens.emplace_back(token);
    if (!valid_tokens(record.click_tokens)) {
      diagnostics.warn("malformed_line", where(file, line_number) + ": bad click path");
      return;
    }
    record.finished = kind == PathFileKind::finished;
    if (kind == PathFileKind::unfinished) {
      if (fields[4].empty()) {
        diagnostics.warn("malformed_line", where(file, line_number) + ": missing target");
        return;
      }
      record.declared_target = std::string(fields[4]);
    }
    records.push_back(std::move(record));
  });
  return records;
}

std::vector<RawPathRecord> parse_generic_paths(const std::filesystem::path& file,
                                               Diagnostics& diagnostics) {
  std::vector<RawPathRecord> records;
  io::for_each_data_line(file, [&](std::size_t line_number, std::string_view line) {
    try {
      const auto json = nlohmann::json::parse(line);
      RawPathRecord record;
      record.session_id = json.value("session", std::string{});
      record.timestamp = json.value("timestamp", Timestamp{0});
      record.duration = json.value("duration", 0.0);
      record.finished = json.at("finished").get<bool>();
      record.click_tokens.push_back(json.at("start").get<std::string>());
      for (const auto& click : json.at("clicks")) record.click_tokens.push_back(click.get<std::string>());
      if (json.contains("target") && !json.at("target").is_null())
        record.declared_target = json.at("target").get<std::string>();
      if (!valid_tokens(record.click_tokens)) {
        diagnostics.warn("malformed_line", where(file, line_number) + ": bad click path");
        return;
      }
      if (!record.finished && !record.declared_target) {
        diagnostics.warn("malformed_line", where(file, line_number) + ": unfinished record without target");
        return;
      }
      records.push_back(std::move(record));
    } catch (const nlohmann::json::exception& e) {
      diagnostics.warn("malformed_line", where(file, line_number) + ": " + e.what());
    }
  });
  return records;
}

std::vector<std::string> resolve_backclicks(std::span<const std::string> tokens, bool keep_detours) {
  std::vector<std::string> stack;
  std::vector<std::string> visits;
  for (const auto& token : tokens) {
    if (token == kBackClick) {
      if (stack.size() < 2)
        throw Error(ErrorCode::parse_failure, "back-click with no page to return to");
      stack.pop_back();
      if (keep_detours) visits.push_back(stack.back());
    } else {
      stack.push_back(token);
      if (keep_detours) visits.push_back(token);
    }
  }
  return keep_detours ? visits : stack;
}

// --- NavigationPath -----------------------------------------------------------

NavigationPath::NavigationPath(ArticleId target, std::vector<ArticleId> pages, bool finished)
    : target_(target), pages_(std::move(pages)), finished_(finished) {
  if (pages_.empty()) throw Error(ErrorCode::invalid_argument, "navigation path without pages");
  const auto first_target = std::find(pages_.begin(), pages_.end(), target_);
  if (finished_) {
    if (pages_.size() < 2 || first_target != pages_.end() - 1)
      throw Error(ErrorCode::invalid_argument,
                  "finished path must end at its target, reached exactly once, after >= 1 click");
  } else if (first_target != pages_.end()) {
    throw Error(ErrorCode::invalid_argument, "unfinished path visits its target");
  }
}

std::optional<NavigationPath> normalize_path(const RawPathRecord& record, const TitleTable& titles,
                                             std::optional<ArticleId> target_override,
                                             const NormalizeOptions& options,
                                             Diagnostics& diagnostics) {
  // Excluding unfinished records is configuration, not a data problem.
  if (!record.finished && !options.include_unfinished) return std::nullopt;

  std::vector<std::string> visits;
  try {
    visits = resolve_backclicks(record.click_tokens, options.keep_detours);
  } catch (const Error& e) {
    diagnostics.warn("backclick_underflow", "record " + record.session_id + ": " + e.what());
    return std::nullopt;
  }

  std::vector<ArticleId> pages;
  pages.reserve(visits.size());
  for (const auto& title : visits) {
    const auto id = titles.find(title);
    if (!id) {
      diagnostics.warn("unresolved_title", "record " + record.session_id + ": unknown title '" + title + "'");
      return std::nullopt;
    }
    pages.push_back(*id);
  }

  std::optional<ArticleId> target = target_override;
  if (!target && record.declared_target) {
    target = titles.find(*record.declared_target);
    if (!target) {
      diagnostics.warn("unresolved_title",
                       "record " + record.session_id + ": unknown target '" + *record.declared_target + "'");
      return std::nullopt;
    }
  }
  if (!target && record.finished) target = pages.back();
  if (!target) {
    diagnostics.warn("missing_target", "record " + record.session_id + " has no target");
    return std::nullopt;
  }

  const auto hit = std::find(pages.begin(), pages.end(), *target);
  if (hit != pages.end()) {
    pages.erase(hit + 1, pages.end());
    if (pages.size() < 2) {
      diagnostics.warn("too_short", "record " + record.session_id + " starts at its target");
      return std::nullopt;
    }
    return NavigationPath(*target, std::move(pages), true);
  }
  if (record.finished) {
    diagnostics.warn("target_missing", "record " + record.session_id + " claims to finish but never reaches its target");
    return std::nullopt;
  }
  return NavigationPath(*target, std::move(pages), false);
}

std::vector<NavigationPath> normalize_paths(std::span<const RawPathRecord> records,
                                            const TitleTable& titles,
                                            const NormalizeOptions& options,
                                            Diagnostics& diagnostics) {
  std::vector<NavigationPath> paths;
  paths.reserve(records.size());
  for (const auto& record : records)
    if (auto path = normalize_path(record, titles, std::nullopt, options, diagnostics))
      paths.push_back(std::move(*path));
  return paths;
}

// --- TargetIndex --------------------------------------------------------------

TargetIndex TargetIndex::build(std::vector<NavigationPath> paths) {
  TargetIndex index;
  std::stable_sort(paths.begin(), paths.end(), [](const NavigationPath& a, const NavigationPath& b) {
    return a.target() < b.target();
  });
  index.paths_ = std::move(paths);

  std::map<ArticleId, PairStats> stats;
  std::vector<ArticleId> seen;
  for (std::size_t begin = 0; begin < index.paths_.size();) {
    const ArticleId target = index.paths_[begin].target();
    std::size_t end = begin;
    stats.clear();
    for (; end < index.paths_.size() && index.paths_[end].target() == target; ++end) {
      const NavigationPath& path = index.paths_[end];
      const std::size_t n = path.clicks();
      seen.clear();
      for (std::size_t i = 1; i < n; ++i) {
        const ArticleId page = path.page(i);
        if (std::find(seen.begin(), seen.end(), page) != seen.end()) continue;
        seen.push_back(page);
        auto& entry = stats[page];
        entry.source = page;
        ++entry.n_paths_through;
        entry.position_sum += path.rel_position(i);
      }
      if (path.finished() && n >= 2) ++stats[path.page(n - 1)].penultimate_count;
    }
    const auto pair_begin = static_cast<std::uint32_t>(index.pairs_.size());
    for (const auto& [source, entry] : stats) index.pairs_.push_back(entry);
    index.groups_.push_back({target, static_cast<std::uint32_t>(begin), static_cast<std::uint32_t>(end),
                             pair_begin, static_cast<std::uint32_t>(index.pairs_.size())});
    index.targets_.push_back(target);
    begin = end;
  }
  return index;
}

const TargetIndex::Group* TargetIndex::group(ArticleId target) const {
  const auto it = std::lower_bound(groups_.begin(), groups_.end(), target,
                                   [](const Group& g, ArticleId t) { return g.target < t; });
  return (it != groups_.end() && it->target == target) ? &*it : nullptr;
}

std::span<const NavigationPath> TargetIndex::paths(ArticleId target) const {
  const Group* g = group(target);
  if (!g) return {};
  return {paths_.data() + g->path_begin, paths_.data() + g->path_end};
}

std::span<const PairStats> TargetIndex::pairs(ArticleId target) const {
  const Group* g = group(target);
  if (!g) return {};
  return {pairs_.data() + g->pair_begin, pairs_.data() + g->pair_end};
}

const PairStats* TargetIndex::find(ArticleId source, ArticleId target) const {
  const auto list = pairs(target);
  const auto it = std::lower_bound(list.begin(), list.end(), source,
                                   [](const PairStats& p, ArticleId s) { return p.source < s; });
  return (it != list.end() && it->source == source) ? &*it : nullptr;
}

DatasetStats dataset_stats(const TargetIndex& index) {
  DatasetStats stats;
  std::set<std::pair<ArticleId, ArticleId>> missions;
  std::vector<std::size_t> per_target;
  for (const auto target : index.targets()) {
    const auto paths = index.paths(target);
    per_target.push_back(paths.size());
    for (const auto& path : paths) {
      ++stats.n_paths;
      if (path.finished()) ++stats.n_finished;
      missions.emplace(path.start(), target);
    }
  }
  stats.n_missions = missions.size();
  stats.n_targets = per_target.size();
  if (per_target.empty()) return stats;
  stats.mean_paths_per_target = static_cast<double>(stats.n_paths) / static_cast<double>(per_target.size());
  std::sort(per_target.begin(), per_target.end());
  const std::size_t mid = per_target.size() / 2;
  stats.median_paths_per_target =
      per_target.size() % 2 == 1 ? static_cast<double>(per_target[mid])
                                 : (static_cast<double>(per_target[mid - 1]) + static_cast<double>(per_target[mid])) / 2.0;
  for (const auto count : per_target) {
    if (count >= 100) ++stats.targets_with_100;
    if (count >= 500) ++stats.targets_with_500;
  }
  return stats;
}

void write_paths(std::ostream& out, std::span<const NavigationPath> paths, const TitleTable& titles) {
  for (const auto& path : paths) {
    out << encode_path_title(titles.title(path.target())) << '\t' << (path.finished() ? 1 : 0) << '\t';
    for (std::size_t i = 0; i < path.pages().size(); ++i) {
      if (i > 0) out << ';';
      out << encode_path_title(titles.title(path.pages()[i]));
    }
    out << '\n';
  }
}

std::vector<NavigationPath> read_paths(const std::filesystem::path& file, const TitleTable& titles) {
  std::vector<NavigationPath> paths;
  io::for_each_data_line(file, [&](std::size_t line_number, std::string_view line) {
    const auto fields = io::split(line, '\t');
    if (fields.size() != 3 || (fields[1] != "0" && fields[1] != "1"))
      throw Error(ErrorCode::parse_failure, where(file, line_number) + ": expected target<TAB>finished<TAB>pages");
    const auto resolve = [&](std::string_view title) {
      const auto id = titles.find(title);
      if (!id)
        throw Error(ErrorCode::parse_failure,
                    where(file, line_number) + ": unknown title '" + std::string(title) + "'");
      return *id;
    };
    std::vector<ArticleId> pages;
    for (const auto title : io::split(fields[2], ';')) pages.push_back(resolve(title));
    try {
      paths.emplace_back(resolve(fields[0]), std::move(pages), fields[1] == "1");
    } catch (const Error& e) {
      throw Error(ErrorCode::parse_failure, where(file, line_number) + ": " + e.what());
    }
  });
  return paths;
}

}  // namespace pathlinks
