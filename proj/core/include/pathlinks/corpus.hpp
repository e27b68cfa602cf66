#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pathlinks/diagnostics.hpp"
#include "pathlinks/ids.hpp"

namespace pathlinks {

// Canonical title form used to join the link, text, trace and history files:
// percent-decoded (repeatedly, until no escape remains), trimmed, runs of
// whitespace and underscores collapsed to one underscore, first character
// upper-cased. Idempotent.
std::string normalize_title(std::string_view raw);

// Human-readable phrase form of a title ("Acute_(medicine)" -> "Acute (medicine)").
std::string title_to_phrase(std::string_view title);

// Bijection between ArticleId and normalized title.
class TitleTable {
 public:
  TitleTable() = default;
  // Titles are normalized; a duplicate after normalization throws.
  explicit TitleTable(std::vector<std::string> titles);

  // One title per line, `#` comments and blank lines skipped; the i-th
  // title gets ArticleId i.
  static TitleTable load(const std::filesystem::path& titles_file);

  std::size_t size() const noexcept { return titles_.size(); }
  bool contains(ArticleId id) const noexcept { return to_index(id) < titles_.size(); }

  const std::string& title(ArticleId id) const;
  const std::vector<std::string>& titles() const noexcept { return titles_; }

  // Looks up a raw (not necessarily normalized) title.
  std::optional<ArticleId> find(std::string_view raw) const;
  ArticleId at(std::string_view raw) const;

 private:
  std::vector<std::string> titles_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

// Directed page graph of the reference snapshot, stored as two CSR views.
// Immutable once built; safe for concurrent reads.
class LinkGraph {
 public:
  using Edge = std::pair<ArticleId, ArticleId>;

  LinkGraph() = default;
  // Drops self-loops and duplicate edges. Endpoints must be < n_articles.
  LinkGraph(std::size_t n_articles, std::vector<Edge> edges, Timestamp snapshot_time);

  // `source<TAB>target` per line, `#` comments skipped.
  static LinkGraph load(const std::filesystem::path& links_file, const TitleTable& titles,
                        Timestamp snapshot_time);

  std::size_t n_articles() const noexcept { return n_articles_; }
  std::size_t n_edges() const noexcept { return out_targets_.size(); }
  Timestamp snapshot_time() const noexcept { return snapshot_time_; }

  bool has_edge(ArticleId source, ArticleId target) const;
  std::span<const ArticleId> outlinks(ArticleId source) const;
  std::span<const ArticleId> inlinks(ArticleId target) const;

  // Sorted (source, target) list.
  std::vector<Edge> edges() const;

  // FNV-1a over N and the sorted edge list; identifies the graph a model was
  // built from.
  std::uint64_t checksum() const noexcept { return checksum_; }

 private:
  void check(ArticleId id) const;

  std::size_t n_articles_ = 0;
  Timestamp snapshot_time_ = 0;
  std::vector<std::uint32_t> out_offsets_{0};
  std::vector<ArticleId> out_targets_;
  std::vector<std::uint32_t> in_offsets_{0};
  std::vector<ArticleId> in_sources_;
  std::uint64_t checksum_ = 0;
};

// Mention matching knobs.
struct MatchOptions {
  bool case_sensitive = false;
  // A phrase whose first (last) character is alphanumeric must not be
  // preceded (followed) by an alphanumeric character.
  bool word_boundaries = true;
};

// Folds text or a phrase into matching form: whitespace runs become a single
// space, leading/trailing whitespace is dropped, ASCII letters are lower-cased
// unless matching is case sensitive.
std::string fold_text(std::string_view text, const MatchOptions& options);

// Bytes >= 0x80 count as word characters so UTF-8 letters respect boundaries.
bool is_word_char(char c) noexcept;

struct AnchorThresholds {
  // Phrases anchored in fewer than this fraction of their text occurrences are
  // never part of an anchor set.
  double min_link_probability = 0.065;
  // A phrase belongs to A_t only if at least this fraction of its anchors
  // point to t.
  double min_target_share = 0.01;
};

struct AnchorOccurrence {
  ArticleId source{};
  std::string phrase;
  ArticleId target{};
  std::uint64_t count = 0;
};

// `source<TAB>phrase<TAB>target<TAB>count` per line.
std::vector<AnchorOccurrence> read_anchor_occurrences(const std::filesystem::path& file,
                                                      const TitleTable& titles);

// Plain article texts indexed by ArticleId; articles without a file have
// empty text.
class TextCollection {
 public:
  TextCollection() = default;
  explicit TextCollection(std::vector<std::string> texts) : texts_(std::move(texts)) {}

  // Directory of `<title>.txt` files. Files whose stem does not resolve to a
  // known title are skipped with a warning.
  static TextCollection load(const std::filesystem::path& dir, const TitleTable& titles,
                             Diagnostics& diagnostics);

  std::size_t size() const noexcept { return texts_.size(); }
  const std::string& text(ArticleId id) const { return texts_.at(to_index(id)); }

 private:
  std::vector<std::string> texts_;
};

using PhraseId = std::uint32_t;

// Corpus-wide anchor statistics and the per-target anchor sets A_t.
class AnchorDictionary {
 public:
  struct TargetCount {
    ArticleId target{};
    std::uint64_t count = 0;
  };

  struct PhraseStats {
    std::string phrase;  // folded form
    std::uint64_t total_anchor_count = 0;
    std::uint64_t text_occurrences = 0;
    std::vector<TargetCount> targets;  // sorted by target id
  };

  AnchorDictionary() = default;

  // Text occurrences are non-overlapping, boundary-respecting matches over
  // all texts, anchored occurrences included.
  static AnchorDictionary build(std::span<const AnchorOccurrence> occurrences,
                                const TextCollection& texts, std::size_t n_articles,
                                const AnchorThresholds& thresholds,
                                const MatchOptions& options, Diagnostics& diagnostics);

  std::size_t size() const noexcept { return phrases_.size(); }
  std::size_t n_articles() const noexcept { return anchor_set_offsets_.size() - 1; }
  const PhraseStats& stats(PhraseId id) const { return phrases_.at(id); }
  std::optional<PhraseId> find(std::string_view phrase) const;

  // Clamped to 1 when a phrase is anchored more often than it occurs.
  double link_probability(PhraseId id) const;
  double target_share(PhraseId id, ArticleId target) const;
  bool in_anchor_set(PhraseId id, ArticleId target) const;

  // Sorted phrase ids of A_t.
  std::span<const PhraseId> anchor_set(ArticleId target) const;

  const AnchorThresholds& thresholds() const noexcept { return thresholds_; }
  const MatchOptions& match_options() const noexcept { return options_; }

 private:
  std::vector<PhraseStats> phrases_;
  std::unordered_map<std::string, PhraseId> index_;
  std::vector<std::uint32_t> anchor_set_offsets_{0};
  std::vector<PhraseId> anchor_set_phrases_;
  AnchorThresholds thresholds_;
  MatchOptions options_;
};

// The relation mentions(s, t): the text of s contains a phrase of A_t.
class MentionIndex {
 public:
  MentionIndex() = default;

  static MentionIndex build(const AnchorDictionary& dictionary, const TextCollection& texts);

  std::size_t n_articles() const noexcept { return by_source_offsets_.size() - 1; }

  // Throws Error(unknown_article) for ids outside the corpus.
  bool mentions(ArticleId source, ArticleId target) const;

  // Sorted targets mentioned by `source`.
  std::span<const ArticleId> mentioned_by(ArticleId source) const;
  // Sorted sources mentioning `target`.
  std::span<const ArticleId> mentioning(ArticleId target) const;

 private:
  void check(ArticleId id) const;

  std::vector<std::uint32_t> by_source_offsets_{0};
  std::vector<ArticleId> by_source_;
  std::vector<std::uint32_t> by_target_offsets_{0};
  std::vector<ArticleId> by_target_;
};

// Everything loaded from the corpus files in one place.
struct CorpusPaths {
  std::filesystem::path titles;
  std::filesystem::path links;
  std::filesystem::path anchors;
  std::filesystem::path texts;
};

struct Corpus {
  TitleTable titles;
  LinkGraph graph;
  AnchorDictionary dictionary;
  MentionIndex mentions;
};

Corpus load_corpus(const CorpusPaths& paths, Timestamp snapshot_time,
                   const AnchorThresholds& thresholds, const MatchOptions& options,
                   Diagnostics& diagnostics);

}  // namespace pathlinks
