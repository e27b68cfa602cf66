#include "pathlinks/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "pathlinks/error.hpp"
#include "pathlinks/io.hpp"
#include "phrase_matcher.hpp"

namespace pathlinks {

namespace {

int hex_value(char c) noexcept {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

// One left-to-right decoding pass; returns true if anything was decoded.
bool percent_decode_once(std::string& text) {
  std::string out;
  out.reserve(text.size());
  bool changed = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '%' && i + 2 < text.size()) {
      const int hi = hex_value(text[i + 1]);
      const int lo = hex_value(text[i + 2]);
      if (hi >= 0 && lo >= 0) {
        out.push_back(static_cast<char>(hi * 16 + lo));
        i += 2;
        changed = true;
        continue;
      }
    }
    out.push_back(text[i]);
  }
  text = std::move(out);
  return changed;
}

bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::uint64_t fnv1a(std::uint64_t hash, std::uint64_t value) noexcept {
  for (int i = 0; i < 8; ++i) {
    hash ^= (value >> (8 * i)) & 0xff;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

template <typename Key>
void build_csr(std::size_t n, const std::vector<std::pair<Key, ArticleId>>& sorted_pairs,
               std::vector<std::uint32_t>& offsets, std::vector<ArticleId>& values) {
  offsets.assign(n + 1, 0);
  values.clear();
  values.reserve(sorted_pairs.size());
  for (const auto& [key, value] : sorted_pairs) {
    ++offsets[to_index(key) + 1];
    values.push_back(value);
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
}

}  // namespace

std::string normalize_title(std::string_view raw) {
  std::string decoded(raw);
  while (percent_decode_once(decoded)) {
  }

  std::string out;
  out.reserve(decoded.size());
  bool pending_separator = false;
  for (const char c : decoded) {
    if (is_space(c) || c == '_') {
      pending_separator = !out.empty();
      continue;
    }
    if (pending_separator) out.push_back('_');
    pending_separator = false;
    out.push_back(c);
  }
  if (!out.empty() && out.front() >= 'a' && out.front() <= 'z')
    out.front() = static_cast<char>(out.front() - 'a' + 'A');
  return out;
}

std::string title_to_phrase(std::string_view title) {
  std::string phrase(title);
  std::replace(phrase.begin(), phrase.end(), '_', ' ');
  return phrase;
}

// --- TitleTable ---------------------------------------------------------------

TitleTable::TitleTable(std::vector<std::string> titles) {
  titles_.reserve(titles.size());
  index_.reserve(titles.size());
  for (std::size_t i = 0; i < titles.size(); ++i) {
    std::string normalized = normalize_title(titles[i]);
    if (normalized.empty())
      throw Error(ErrorCode::parse_failure,
                  "title " + std::to_string(i + 1) + " is empty after normalization");
    const auto [it, inserted] =
        index_.emplace(normalized, static_cast<std::uint32_t>(titles_.size()));
    if (!inserted)
      throw Error(ErrorCode::parse_failure,
                  "duplicate title after normalization at line " + std::to_string(i + 1) +
                      ": '" + normalized + "' (first seen at line " +
                      std::to_string(it->second + 1) + ")");
    titles_.push_back(std::move(normalized));
  }
}

TitleTable TitleTable::load(const std::filesystem::path& titles_file) {
  std::vector<std::string> titles;
  io::for_each_data_line(titles_file,
                         [&](std::size_t, std::string_view line) { titles.emplace_back(line); });
  return TitleTable(std::move(titles));
}

const std::string& TitleTable::title(ArticleId id) const {
  if (!contains(id))
    throw Error(ErrorCode::unknown_article, "unknown article id " + std::to_string(to_index(id)));
  return titles_[to_index(id)];
}

std::optional<ArticleId> TitleTable::find(std::string_view raw) const {
  const auto it = index_.find(normalize_title(raw));
  if (it == index_.end()) return std::nullopt;
  return article_id(it->second);
}

ArticleId TitleTable::at(std::string_view raw) const {
  if (auto id = find(raw)) return *id;
  throw Error(ErrorCode::unknown_article, "unknown title '" + std::string(raw) + "'");
}

// --- LinkGraph ----------------------------------------------------------------

LinkGraph::LinkGraph(std::size_t n_articles, std::vector<Edge> edges, Timestamp snapshot_time)
    : n_articles_(n_articles), snapshot_time_(snapshot_time) {
  for (const auto& [s, t] : edges) {
    if (to_index(s) >= n_articles || to_index(t) >= n_articles)
      throw Error(ErrorCode::unknown_article, "edge endpoint outside the corpus");
  }
  std::erase_if(edges, [](const Edge& e) { return e.first == e.second; });
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  build_csr(n_articles, edges, out_offsets_, out_targets_);

  std::vector<Edge> reversed;
  reversed.reserve(edges.size());
  for (const auto& [s, t] : edges) reversed.emplace_back(t, s);
  std::sort(reversed.begin(), reversed.end());
  build_csr(n_articles, reversed, in_offsets_, in_sources_);

  std::uint64_t hash = 0xcbf29ce484222325ull;
  hash = fnv1a(hash, n_articles);
  for (const auto& [s, t] : edges) hash = fnv1a(hash, (std::uint64_t{to_index(s)} << 32) | to_index(t));
  checksum_ = hash;
}

LinkGraph LinkGraph::load(const std::filesystem::path& links_file, const TitleTable& titles,
                          Timestamp snapshot_time) {
  std::vector<Edge> edges;
  io::for_each_data_line(links_file, [&](std::size_t line_number, std::string_view line) {
    const auto fields = io::split(line, '\t');
    const auto where = links_file.string() + ":" + std::to_string(line_number);
    if (fields.size() != 2)
      throw Error(ErrorCode::parse_failure, where + ": expected source<TAB>target");
    const auto source = titles.find(fields[0]);
    const auto target = titles.find(fields[1]);
    if (!source)
      throw Error(ErrorCode::parse_failure, where + ": unknown title '" + std::string(fields[0]) + "'");
    if (!target)
      throw Error(ErrorCode::parse_failure, where + ": unknown title '" + std::string(fields[1]) + "'");
    edges.emplace_back(*source, *target);
  });
  return LinkGraph(titles.size(), std::move(edges), snapshot_time);
}

void LinkGraph::check(ArticleId id) const {
  if (to_index(id) >= n_articles_)
    throw Error(ErrorCode::unknown_article, "unknown article id " + std::to_string(to_index(id)));
}

bool LinkGraph::has_edge(ArticleId source, ArticleId target) const {
  const auto out = outlinks(source);
  check(target);
  return std::binary_search(out.begin(), out.end(), target);
}

std::span<const ArticleId> LinkGraph::outlinks(ArticleId source) const {
  check(source);
  const auto i = to_index(source);
  return {out_targets_.data() + out_offsets_[i], out_targets_.data() + out_offsets_[i + 1]};
}

std::span<const ArticleId> LinkGraph::inlinks(ArticleId target) const {
  check(target);
  const auto i = to_index(target);
  return {in_sources_.data() + in_offsets_[i], in_sources_.data() + in_offsets_[i + 1]};
}

std::vector<LinkGraph::Edge> LinkGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(n_edges());
  for (std::size_t s = 0; s < n_articles_; ++s)
    for (const auto t : outlinks(article_id(s))) out.emplace_back(article_id(s), t);
  return out;
}

// --- text folding -------------------------------------------------------------

bool is_word_char(char c) noexcept {
  const auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || std::isalnum(u) != 0;
}

std::string fold_text(std::string_view text, const MatchOptions& options) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (const char c : text) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    if (!options.case_sensitive && c >= 'A' && c <= 'Z')
      out.push_back(static_cast<char>(c - 'A' + 'a'));
    else
      out.push_back(c);
  }
  return out;
}

// --- anchors and texts --------------------------------------------------------

std::vector<AnchorOccurrence> read_anchor_occurrences(const std::filesystem::path& file,
                                                      const TitleTable& titles) {
  std::vector<AnchorOccurrence> occurrences;
  io::for_each_data_line(file, [&](std::size_t line_number, std::string_view line) {
    const auto fields = io::split(line, '\t');
    const auto where = file.string() + ":" + std::to_string(line_number);
    if (fields.size() != 4)
      throw Error(ErrorCode::parse_failure, where + ": expected source<TAB>phrase<TAB>target<TAB>count");
    const auto source = titles.find(fields[0]);
    const auto target = titles.find(fields[2]);
    if (!source || !target)
      throw Error(ErrorCode::parse_failure, where + ": unknown title");
    const auto count = io::parse_int(fields[3]);
    if (count < 0) throw Error(ErrorCode::parse_failure, where + ": negative count");
    occurrences.push_back({*source, std::string(fields[1]), *target, static_cast<std::uint64_t>(count)});
  });
  return occurrences;
}

TextCollection TextCollection::load(const std::filesystem::path& dir, const TitleTable& titles,
                                    Diagnostics& diagnostics) {
  if (!std::filesystem::is_directory(dir))
    throw Error(ErrorCode::missing_file, "text directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  std::vector<std::string> texts(titles.size());
  std::vector<bool> seen(titles.size(), false);
  for (const auto& file : files) {
    const auto id = titles.find(file.stem().string());
    if (!id) {
      diagnostics.warn("text_unknown_title", "no article for text file " + file.filename().string());
      continue;
    }
    if (seen[to_index(*id)]) {
      diagnostics.warn("text_duplicate", "second text file for " + titles.title(*id));
      continue;
    }
    seen[to_index(*id)] = true;
    texts[to_index(*id)] = io::read_file(file);
  }
  return TextCollection(std::move(texts));
}

// --- AnchorDictionary ---------------------------------------------------------

AnchorDictionary AnchorDictionary::build(std::span<const AnchorOccurrence> occurrences,
                                         const TextCollection& texts, std::size_t n_articles,
                                         const AnchorThresholds& thresholds,
                                         const MatchOptions& options, Diagnostics& diagnostics) {
  AnchorDictionary dict;
  dict.thresholds_ = thresholds;
  dict.options_ = options;

  std::vector<std::vector<std::pair<ArticleId, std::uint64_t>>> raw_targets;
  for (const auto& occ : occurrences) {
    if (to_index(occ.target) >= n_articles)
      throw Error(ErrorCode::unknown_article, "anchor target outside the corpus");
    std::string phrase = fold_text(occ.phrase, options);
    if (phrase.empty()) {
      diagnostics.warn("anchor_empty_phrase", "empty anchor phrase skipped");
      continue;
    }
    auto [it, inserted] = dict.index_.emplace(phrase, static_cast<PhraseId>(dict.phrases_.size()));
    if (inserted) {
      dict.phrases_.push_back({std::move(phrase), 0, 0, {}});
      raw_targets.emplace_back();
    }
    dict.phrases_[it->second].total_anchor_count += occ.count;
    raw_targets[it->second].emplace_back(occ.target, occ.count);
  }
  for (std::size_t p = 0; p < dict.phrases_.size(); ++p) {
    auto& raw = raw_targets[p];
    std::sort(raw.begin(), raw.end());
    auto& targets = dict.phrases_[p].targets;
    for (const auto& [target, count] : raw) {
      if (!targets.empty() && targets.back().target == target)
        targets.back().count += count;
      else
        targets.push_back({target, count});
    }
  }

  // Count non-overlapping matches of every phrase across all texts.
  std::vector<std::string> phrase_strings;
  phrase_strings.reserve(dict.phrases_.size());
  for (const auto& stats : dict.phrases_) phrase_strings.push_back(stats.phrase);
  const detail::PhraseMatcher matcher(phrase_strings, options.word_boundaries);
  std::vector<std::size_t> last_end(dict.phrases_.size(), 0);
  std::vector<std::uint32_t> stamp(dict.phrases_.size(), 0);
  for (std::size_t a = 0; a < texts.size(); ++a) {
    const std::string folded = fold_text(texts.text(article_id(a)), options);
    const auto generation = static_cast<std::uint32_t>(a + 1);
    matcher.scan(folded, [&](const detail::PhraseMatcher::Match& m) {
      if (stamp[m.phrase] != generation) {
        stamp[m.phrase] = generation;
        last_end[m.phrase] = 0;
      } else if (m.begin < last_end[m.phrase]) {
        return;
      }
      last_end[m.phrase] = m.end;
      ++dict.phrases_[m.phrase].text_occurrences;
    });
  }

  std::vector<std::pair<ArticleId, PhraseId>> memberships;
  for (PhraseId p = 0; p < dict.phrases_.size(); ++p) {
    const auto& stats = dict.phrases_[p];
    if (stats.total_anchor_count > 0 && stats.text_occurrences == 0) {
      diagnostics.warn("anchor_without_text",
                       "phrase '" + stats.phrase + "' is anchored but never occurs in any text; "
                       "link probability clamped to 1");
    } else if (stats.total_anchor_count > stats.text_occurrences) {
      diagnostics.warn("anchor_exceeds_text",
                       "phrase '" + stats.phrase + "' is anchored more often than it occurs; "
                       "link probability clamped to 1");
    }
    for (const auto& tc : stats.targets)
      if (dict.in_anchor_set(p, tc.target)) memberships.emplace_back(tc.target, p);
  }
  std::sort(memberships.begin(), memberships.end());
  dict.anchor_set_offsets_.assign(n_articles + 1, 0);
  dict.anchor_set_phrases_.clear();
  for (const auto& [target, phrase] : memberships) {
    ++dict.anchor_set_offsets_[to_index(target) + 1];
    dict.anchor_set_phrases_.push_back(phrase);
  }
  std::partial_sum(dict.anchor_set_offsets_.begin(), dict.anchor_set_offsets_.end(),
                   dict.anchor_set_offsets_.begin());
  return dict;
}

std::optional<PhraseId> AnchorDictionary::find(std::string_view phrase) const {
  const auto it = index_.find(fold_text(phrase, options_));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double AnchorDictionary::link_probability(PhraseId id) const {
  const auto& stats = phrases_.at(id);
  if (stats.total_anchor_count == 0) return 0.0;
  if (stats.text_occurrences == 0 || stats.total_anchor_count >= stats.text_occurrences) return 1.0;
  return static_cast<double>(stats.total_anchor_count) / static_cast<double>(stats.text_occurrences);
}

double AnchorDictionary::target_share(PhraseId id, ArticleId target) const {
  const auto& stats = phrases_.at(id);
  if (stats.total_anchor_count == 0) return 0.0;
  const auto it = std::lower_bound(
      stats.targets.begin(), stats.targets.end(), target,
      [](const TargetCount& tc, ArticleId t) { return tc.target < t; });
  if (it == stats.targets.end() || it->target != target) return 0.0;
  return static_cast<double>(it->count) / static_cast<double>(stats.total_anchor_count);
}

bool AnchorDictionary::in_anchor_set(PhraseId id, ArticleId target) const {
  return link_probability(id) >= thresholds_.min_link_probability &&
         target_share(id, target) >= thresholds_.min_target_share;
}

std::span<const PhraseId> AnchorDictionary::anchor_set(ArticleId target) const {
  const auto i = to_index(target);
  if (i + 1 >= anchor_set_offsets_.size())
    throw Error(ErrorCode::unknown_article, "unknown article id " + std::to_string(i));
  return {anchor_set_phrases_.data() + anchor_set_offsets_[i],
          anchor_set_phrases_.data() + anchor_set_offsets_[i + 1]};
}

// --- MentionIndex -------------------------------------------------------------

MentionIndex MentionIndex::build(const AnchorDictionary& dictionary, const TextCollection& texts) {
  const std::size_t n = dictionary.n_articles();
  if (texts.size() != n)
    throw Error(ErrorCode::invalid_argument, "text collection does not match the corpus size");

  // Linkable phrases and the targets whose anchor set contains them.
  std::vector<std::pair<PhraseId, ArticleId>> phrase_targets;
  for (std::size_t t = 0; t < n; ++t)
    for (const auto p : dictionary.anchor_set(article_id(t))) phrase_targets.emplace_back(p, article_id(t));
  std::sort(phrase_targets.begin(), phrase_targets.end());

  std::vector<std::string> linkable;
  std::vector<std::uint32_t> target_offsets{0};
  std::vector<ArticleId> targets;
  for (std::size_t i = 0; i < phrase_targets.size();) {
    const PhraseId p = phrase_targets[i].first;
    linkable.push_back(dictionary.stats(p).phrase);
    for (; i < phrase_targets.size() && phrase_targets[i].first == p; ++i)
      targets.push_back(phrase_targets[i].second);
    target_offsets.push_back(static_cast<std::uint32_t>(targets.size()));
  }

  const auto& options = dictionary.match_options();
  const detail::PhraseMatcher matcher(linkable, options.word_boundaries);
  MentionIndex index;
  std::vector<std::pair<ArticleId, ArticleId>> pairs;
  std::vector<std::uint32_t> hit;
  std::vector<ArticleId> mentioned;
  for (std::size_t s = 0; s < n; ++s) {
    hit.clear();
    mentioned.clear();
    const std::string folded = fold_text(texts.text(article_id(s)), options);
    matcher.scan(folded, [&](const detail::PhraseMatcher::Match& m) { hit.push_back(m.phrase); });
    std::sort(hit.begin(), hit.end());
    hit.erase(std::unique(hit.begin(), hit.end()), hit.end());
    for (const auto p : hit)
      for (auto k = target_offsets[p]; k < target_offsets[p + 1]; ++k) mentioned.push_back(targets[k]);
    std::sort(mentioned.begin(), mentioned.end());
    mentioned.erase(std::unique(mentioned.begin(), mentioned.end()), mentioned.end());
    for (const auto t : mentioned) pairs.emplace_back(article_id(s), t);
  }
  build_csr(n, pairs, index.by_source_offsets_, index.by_source_);
  for (auto& p : pairs) std::swap(p.first, p.second);
  std::sort(pairs.begin(), pairs.end());
  build_csr(n, pairs, index.by_target_offsets_, index.by_target_);
  return index;
}

void MentionIndex::check(ArticleId id) const {
  if (to_index(id) >= n_articles())
    throw Error(ErrorCode::unknown_article, "unknown article id " + std::to_string(to_index(id)));
}

bool MentionIndex::mentions(ArticleId source, ArticleId target) const {
  check(target);
  const auto targets = mentioned_by(source);
  return std::binary_search(targets.begin(), targets.end(), target);
}

std::span<const ArticleId> MentionIndex::mentioned_by(ArticleId source) const {
  check(source);
  const auto i = to_index(source);
  return {by_source_.data() + by_source_offsets_[i], by_source_.data() + by_source_offsets_[i + 1]};
}

std::span<const ArticleId> MentionIndex::mentioning(ArticleId target) const {
  check(target);
  const auto i = to_index(target);
  return {by_target_.data() + by_target_offsets_[i], by_target_.data() + by_target_offsets_[i + 1]};
}

Corpus load_corpus(const CorpusPaths& paths, Timestamp snapshot_time,
                   const AnchorThresholds& thresholds, const MatchOptions& options,
                   Diagnostics& diagnostics) {
  Corpus corpus;
  corpus.titles = TitleTable::load(paths.titles);
  corpus.graph = LinkGraph::load(paths.links, corpus.titles, snapshot_time);
  const auto texts = TextCollection::load(paths.texts, corpus.titles, diagnostics);
  const auto occurrences = read_anchor_occurrences(paths.anchors, corpus.titles);
  corpus.dictionary = AnchorDictionary::build(occurrences, texts, corpus.titles.size(), thresholds,
                                              options, diagnostics);
  corpus.mentions = MentionIndex::build(corpus.dictionary, texts);
  return corpus;
}

}  // namespace pathlinks
