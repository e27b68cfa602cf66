#include "pathlinks/error.hpp"

#include "pathlinks/diagnostics.hpp"

namespace pathlinks {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::missing_file: return "missing_file";
    case ErrorCode::parse_failure: return "parse_failure";
    case ErrorCode::infeasible_config: return "infeasible_config";
    case ErrorCode::ineligible_evaluation: return "ineligible_evaluation";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::unknown_article: return "unknown_article";
    case ErrorCode::non_convergence: return "non_convergence";
    case ErrorCode::model_mismatch: return "model_mismatch";
  }
  return "unknown";
}

int exit_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::missing_file: return 3;
    case ErrorCode::parse_failure: return 4;
    case ErrorCode::infeasible_config: return 5;
    case ErrorCode::ineligible_evaluation: return 6;
    case ErrorCode::invalid_argument: return 2;
    case ErrorCode::unknown_article: return 7;
    case ErrorCode::non_convergence: return 8;
    case ErrorCode::model_mismatch: return 9;
  }
  return 1;
}

void Diagnostics::warn(std::string_view category, std::string message) {
  auto it = counts_.find(category);
  if (it == counts_.end()) it = counts_.emplace(std::string(category), 0).first;
  ++it->second;
  ++total_;
  if (messages_.size() < kMaxMessages) messages_.push_back(std::move(message));
}

std::size_t Diagnostics::count(std::string_view category) const {
  const auto it = counts_.find(category);
  return it == counts_.end() ? 0 : it->second;
}

void Diagnostics::merge(const Diagnostics& other) {
  for (const auto& [category, n] : other.counts_) {
    counts_[category] += n;
    total_ += n;
  }
  for (const auto& m : other.messages_) {
    if (messages_.size() >= kMaxMessages) break;
    messages_.push_back(m);
  }
}

}  // namespace pathlinks
