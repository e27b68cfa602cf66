#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace pathlinks {

// Counts recoverable data problems (skipped lines, rejected records) by
// category and keeps the first few messages for display.
class Diagnostics {
 public:
  static constexpr std::size_t kMaxMessages = 50;

  void warn(std::string_view category, std::string message);

  std::size_t count(std::string_view category) const;
  std::size_t total() const noexcept { return total_; }
  const std::map<std::string, std::size_t, std::less<>>& counts() const noexcept {
    return counts_;
  }
  const std::vector<std::string>& messages() const noexcept { return messages_; }

  void merge(const Diagnostics& other);

 private:
  std::map<std::string, std::size_t, std::less<>> counts_;
  std::vector<std::string> messages_;
  std::size_t total_ = 0;
};

}  // namespace pathlinks
