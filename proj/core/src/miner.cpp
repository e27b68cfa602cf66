#include "pathlinks/miner.hpp"

#include <algorithm>
#include <map>
#include <ostream>

#include "pathlinks/error.hpp"
#include "pathlinks/io.hpp"

namespace pathlinks {

std::string_view selection_name(Selection selection) noexcept {
  return selection == Selection::path ? "path" : "none";
}

Selection parse_selection(std::string_view name) {
  if (name == "path") return Selection::path;
  if (name == "none") return Selection::none;
  throw Error(ErrorCode::invalid_argument, "unknown selection '" + std::string(name) + "'");
}

FilterCounts& FilterCounts::operator+=(const FilterCounts& other) {
  examined += other.examined;
  linked += other.linked;
  not_mentioned += other.not_mentioned;
  early_position += other.early_position;
  low_support += other.low_support;
  kept += other.kept;
  return *this;
}

std::span<const PairStats> generate_pairs(ArticleId target, const TargetIndex& index) {
  return index.pairs(target);
}

CandidateSet filter_candidates(ArticleId target, std::span<const PairStats> pairs,
                               std::size_t n_paths_total, const LinkGraph& graph,
                               const MentionIndex& mentions, const MinerConfig& config,
                               FilterCounts* counts) {
  CandidateSet set;
  set.target = target;
  set.selection = Selection::path;
  set.n_paths_total = n_paths_total;
  FilterCounts local;
  for (const auto& pair : pairs) {
    ++local.examined;
    const double mean = pair.mean_rel_position();
    const bool linked = graph.has_edge(pair.source, target);
    const bool mentioned = mentions.mentions(pair.source, target);
    const bool early = mean <= config.position_threshold;
    const bool low_support = pair.n_paths_through < config.min_support;
    local.linked += linked;
    local.not_mentioned += !mentioned;
    local.early_position += early;
    local.low_support += low_support;
    if (linked || !mentioned || early || low_support) continue;
    ++local.kept;
    set.candidates.push_back({pair.source, target,
                              static_cast<double>(pair.n_paths_through) / static_cast<double>(n_paths_total),
                              mean, pair.penultimate_count, pair.n_paths_through});
  }
  if (counts) *counts += local;
  return set;
}

CandidateSet mine_target(ArticleId target, const TargetIndex& index, const LinkGraph& graph,
                         const MentionIndex& mentions, const MinerConfig& config,
                         FilterCounts* counts) {
  if (to_index(target) >= graph.n_articles())
    throw Error(ErrorCode::unknown_article, "unknown target id " + std::to_string(to_index(target)));
  return filter_candidates(target, generate_pairs(target, index), index.n_paths(target), graph,
                           mentions, config, counts);
}

CandidateSet baseline_all_mentions(ArticleId target, const LinkGraph& graph,
                                   const MentionIndex& mentions, const TargetIndex* index) {
  CandidateSet set;
  set.target = target;
  set.selection = Selection::none;
  set.n_paths_total = index ? index->n_paths(target) : 0;
  for (const auto source : mentions.mentioning(target)) {
    if (source == target || graph.has_edge(source, target)) continue;
    SourceCandidate candidate{source, target, 0.0, std::nullopt, 0, 0};
    if (index) {
      if (const PairStats* stats = index->find(source, target)) {
        candidate.path_frequency =
            static_cast<double>(stats->n_paths_through) / static_cast<double>(set.n_paths_total);
        candidate.mean_rel_position = stats->mean_rel_position();
        candidate.penultimate_count = stats->penultimate_count;
        candidate.n_paths_through = stats->n_paths_through;
      }
    }
    set.candidates.push_back(candidate);
  }
  return set;
}

void write_candidates_csv(std::ostream& out, std::span<const CandidateSet> sets,
                          const TitleTable& titles) {
  out << "target,source,path_frequency,mean_rel_position,penultimate_count,n_paths_through\n";
  for (const auto& set : sets) {
    const std::string target = io::csv_quote(titles.title(set.target));
    out << "# target=" << titles.title(set.target) << " n_paths=" << set.n_paths_total << '\n';
    for (const auto& c : set.candidates) {
      out << target << ',' << io::csv_quote(titles.title(c.source)) << ','
          << io::format_double(c.path_frequency) << ','
          << (c.mean_rel_position ? io::format_double(*c.mean_rel_position) : std::string{}) << ','
          << c.penultimate_count << ',' << c.n_paths_through << '\n';
    }
  }
}

std::vector<CandidateSet> read_candidates_csv(const std::filesystem::path& file,
                                              const TitleTable& titles, Selection selection) {
  std::map<ArticleId, CandidateSet> sets;
  auto in = io::open_input(file);
  std::string line;
  std::size_t line_number = 0;
  bool header_seen = false;
  const auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::parse_failure,
                file.filename().string() + ":" + std::to_string(line_number) + ": " + what);
  };
  const auto resolve = [&](std::string_view title) {
    const auto id = titles.find(title);
    if (!id) fail("unknown title '" + std::string(title) + "'");
    return *id;
  };
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("# target=", 0) == 0) {
      const auto marker = line.rfind(" n_paths=");
      if (marker == std::string::npos) fail("bad target line");
      const ArticleId target = resolve(std::string_view(line).substr(9, marker - 9));
      auto& set = sets[target];
      set.target = target;
      set.selection = selection;
      set.n_paths_total = static_cast<std::size_t>(io::parse_int(std::string_view(line).substr(marker + 9)));
      continue;
    }
    if (line.front() == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (line.rfind("target,", 0) == 0) continue;
    }
    std::vector<std::string> fields;
    try {
      fields = io::parse_csv_line(line);
    } catch (const Error& e) {
      fail(e.what());
    }
    if (fields.size() != 6) fail("expected 6 columns");
    SourceCandidate c;
    c.target = resolve(fields[0]);
    c.source = resolve(fields[1]);
    c.path_frequency = io::parse_double(fields[2]);
    if (!fields[3].empty()) c.mean_rel_position = io::parse_double(fields[3]);
    c.penultimate_count = static_cast<std::uint32_t>(io::parse_int(fields[4]));
    c.n_paths_through = static_cast<std::uint32_t>(io::parse_int(fields[5]));
    auto& set = sets[c.target];
    set.target = c.target;
    set.selection = selection;
    set.candidates.push_back(c);
  }
  std::vector<CandidateSet> result;
  result.reserve(sets.size());
  for (auto& [target, set] : sets) {
    std::sort(set.candidates.begin(), set.candidates.end(),
              [](const SourceCandidate& a, const SourceCandidate& b) { return a.source < b.source; });
    result.push_back(std::move(set));
  }
  return result;
}

}  // namespace pathlinks
