#pragma once

#include <string>
#include <vector>

#include "pathlinks/corpus.hpp"
#include "pathlinks/traces.hpp"

namespace fixture {

// In-memory corpus; every edge also becomes a one-count anchor of the target
// title unless `anchor_edges` is false.
inline pathlinks::Corpus make_corpus(const std::vector<std::string>& titles,
                                     const std::vector<std::pair<int, int>>& edges,
                                     const std::vector<std::string>& texts,
                                     std::vector<pathlinks::AnchorOccurrence> anchors = {},
                                     bool anchor_edges = true) {
  using namespace pathlinks;
  Corpus c;
  c.titles = TitleTable(titles);
  std::vector<LinkGraph::Edge> e;
  for (const auto& [s, t] : edges) {
    e.emplace_back(article_id(s), article_id(t));
    if (anchor_edges)
      anchors.push_back({article_id(s), title_to_phrase(c.titles.title(article_id(t))), article_id(t), 1});
  }
  c.graph = LinkGraph(titles.size(), std::move(e), 0);
  Diagnostics diag;
  const TextCollection collection(texts);
  c.dictionary = AnchorDictionary::build(anchors, collection, titles.size(), {}, {}, diag);
  c.mentions = MentionIndex::build(c.dictionary, collection);
  return c;
}

inline pathlinks::NavigationPath finished(std::vector<int> pages) {
  std::vector<pathlinks::ArticleId> ids;
  for (const int p : pages) ids.push_back(pathlinks::article_id(p));
  const auto target = ids.back();
  return pathlinks::NavigationPath(target, std::move(ids), true);
}

inline pathlinks::NavigationPath unfinished(std::vector<int> pages, int target) {
  std::vector<pathlinks::ArticleId> ids;
  for (const int p : pages) ids.push_back(pathlinks::article_id(p));
  return pathlinks::NavigationPath(pathlinks::article_id(target), std::move(ids), false);
}

inline std::vector<std::uint32_t> indices(const pathlinks::NavigationPath& path) {
  std::vector<std::uint32_t> out;
  for (const auto p : path.pages()) out.push_back(pathlinks::to_index(p));
  return out;
}

}  // namespace fixture
