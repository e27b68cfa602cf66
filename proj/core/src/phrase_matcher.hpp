#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pathlinks::detail {

// Aho-Corasick automaton over folded phrases. Reports every occurrence whose
// edges satisfy the word-boundary rule (when enabled), in order of end
// position.
class PhraseMatcher {
 public:
  struct Match {
    std::uint32_t phrase;
    std::size_t begin;
    std::size_t end;
  };

  PhraseMatcher(const std::vector<std::string>& phrases, bool word_boundaries);

  template <typename Fn>
  void scan(std::string_view text, Fn&& on_match) const;

 private:
  struct Node {
    std::vector<std::pair<unsigned char, std::uint32_t>> children;  // sorted
    std::uint32_t fail = 0;
    std::uint32_t output_link = 0;  // nearest proper suffix node with outputs
    std::vector<std::uint32_t> outputs;
  };

  std::uint32_t child(std::uint32_t node, unsigned char c) const;
  std::uint32_t step(std::uint32_t node, unsigned char c) const;
  bool boundary_ok(std::string_view text, std::size_t begin, std::size_t end,
                   std::uint32_t phrase) const;

  std::vector<Node> nodes_;
  std::vector<std::uint32_t> lengths_;
  std::vector<std::uint8_t> edge_flags_;  // bit0: first char is a word char, bit1: last
  bool word_boundaries_;
};

inline constexpr std::uint32_t kNoNode = 0xffffffffu;

template <typename Fn>
void PhraseMatcher::scan(std::string_view text, Fn&& on_match) const {
  std::uint32_t node = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    node = step(node, static_cast<unsigned char>(text[i]));
    for (std::uint32_t n = nodes_[node].outputs.empty() ? nodes_[node].output_link : node;
         n != 0; n = nodes_[n].output_link) {
      for (const auto phrase : nodes_[n].outputs) {
        const std::size_t end = i + 1;
        const std::size_t begin = end - lengths_[phrase];
        if (boundary_ok(text, begin, end, phrase)) on_match(Match{phrase, begin, end});
      }
    }
  }
}

}  // namespace pathlinks::detail
