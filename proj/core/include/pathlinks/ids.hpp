#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace pathlinks {

// Dense article identifier: line number (0-based) in the titles file.
enum class ArticleId : std::uint32_t {};

constexpr std::uint32_t to_index(ArticleId id) noexcept {
  return static_cast<std::uint32_t>(id);
}

constexpr ArticleId article_id(std::size_t index) noexcept {
  return static_cast<ArticleId>(static_cast<std::uint32_t>(index));
}

// Seconds since the epoch.
using Timestamp = std::int64_t;

// Ordered (source, target) pair usable as a hash key.
struct LinkPair {
  ArticleId source{};
  ArticleId target{};

  friend constexpr bool operator==(const LinkPair&, const LinkPair&) = default;
  friend constexpr auto operator<=>(const LinkPair&, const LinkPair&) = default;
};

struct LinkPairHash {
  std::size_t operator()(const LinkPair& p) const noexcept {
    const std::uint64_t key =
        (std::uint64_t{to_index(p.source)} << 32) | to_index(p.target);
    return std::hash<std::uint64_t>{}(key);
  }
};

}  // namespace pathlinks
