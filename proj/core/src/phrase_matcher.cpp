#include "phrase_matcher.hpp"

#include <algorithm>
#include <deque>

#include "pathlinks/corpus.hpp"

namespace pathlinks::detail {

PhraseMatcher::PhraseMatcher(const std::vector<std::string>& phrases, bool word_boundaries)
    : word_boundaries_(word_boundaries) {
  nodes_.emplace_back();
  lengths_.reserve(phrases.size());
  edge_flags_.reserve(phrases.size());
  for (std::uint32_t id = 0; id < phrases.size(); ++id) {
    const std::string& phrase = phrases[id];
    lengths_.push_back(static_cast<std::uint32_t>(phrase.size()));
    std::uint8_t flags = 0;
    if (!phrase.empty()) {
      if (is_word_char(phrase.front())) flags |= 1;
      if (is_word_char(phrase.back())) flags |= 2;
    }
    edge_flags_.push_back(flags);
    if (phrase.empty()) continue;

    std::uint32_t node = 0;
    for (const char ch : phrase) {
      const auto c = static_cast<unsigned char>(ch);
      std::uint32_t next = child(node, c);
      if (next == kNoNode) {
        next = static_cast<std::uint32_t>(nodes_.size());
        nodes_.emplace_back();
        auto& kids = nodes_[node].children;
        kids.insert(std::lower_bound(kids.begin(), kids.end(), std::make_pair(c, 0u)),
                    {c, next});
      }
      node = next;
    }
    nodes_[node].outputs.push_back(id);
  }

  // Breadth-first construction of failure and output links.
  std::deque<std::uint32_t> queue;
  for (const auto& [c, next] : nodes_[0].children) {
    nodes_[next].fail = 0;
    queue.push_back(next);
  }
  while (!queue.empty()) {
    const std::uint32_t node = queue.front();
    queue.pop_front();
    for (const auto& [c, next] : nodes_[node].children) {
      std::uint32_t f = nodes_[node].fail;
      while (f != 0 && child(f, c) == kNoNode) f = nodes_[f].fail;
      const std::uint32_t target = child(f, c);
      nodes_[next].fail = (target != kNoNode && target != next) ? target : 0;
      const std::uint32_t fail = nodes_[next].fail;
      nodes_[next].output_link =
          nodes_[fail].outputs.empty() ? nodes_[fail].output_link : fail;
      queue.push_back(next);
    }
  }
}

std::uint32_t PhraseMatcher::child(std::uint32_t node, unsigned char c) const {
  const auto& kids = nodes_[node].children;
  const auto it = std::lower_bound(kids.begin(), kids.end(), std::make_pair(c, 0u));
  return (it != kids.end() && it->first == c) ? it->second : kNoNode;
}

std::uint32_t PhraseMatcher::step(std::uint32_t node, unsigned char c) const {
  while (true) {
    const std::uint32_t next = child(node, c);
    if (next != kNoNode) return next;
    if (node == 0) return 0;
    node = nodes_[node].fail;
  }
}

bool PhraseMatcher::boundary_ok(std::string_view text, std::size_t begin, std::size_t end,
                                std::uint32_t phrase) const {
  if (!word_boundaries_) return true;
  const std::uint8_t flags = edge_flags_[phrase];
  if ((flags & 1) && begin > 0 && is_word_char(text[begin - 1])) return false;
  if ((flags & 2) && end < text.size() && is_word_char(text[end])) return false;
  return true;
}

}  // namespace pathlinks::detail
