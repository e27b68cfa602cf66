#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "pathlinks/corpus.hpp"
#include "pathlinks/ids.hpp"
#include "pathlinks/miner.hpp"
#include "pathlinks/traces.hpp"

namespace pathlinks {

// Inlink-overlap relatedness:
//   1 - (log max(|S|,|T|) - log |S n T|) / (log N - log min(|S|,|T|))
// clamped to [0, 1]; 0 when either inlink set is empty or they are disjoint.
double mw_relatedness(ArticleId s, ArticleId t, const LinkGraph& graph);

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct SvdOptions {
  std::size_t rank = 256;
  std::uint64_t seed = 1;
  // Converged once ||(I - QQ^T) A V_k||_F <= tolerance * sigma_1.
  double tolerance = 1e-10;
  // Extra sketch columns; 0 picks max(10, rank / 2).
  std::size_t oversampling = 0;
  std::size_t max_iterations = 500;
};

struct TruncatedSvd {
  Eigen::MatrixXd left;             // rows x k
  Eigen::VectorXd singular_values;  // k, non-increasing
  Eigen::MatrixXd right;            // cols x k
  std::size_t iterations = 0;
  double residual = 0.0;
};

// Randomized subspace iteration: a seeded Gaussian sketch of the range,
// refined by power iterations with re-orthonormalization until the top-k
// residual drops below the tolerance. Throws Error(invalid_argument) for k
// outside [1, min(rows, cols)] and Error(non_convergence) when the iteration
// budget runs out.
TruncatedSvd truncated_svd(const SparseMatrix& matrix, const SvdOptions& options);

// Binary adjacency matrix, rows = sources, cols = targets.
SparseMatrix adjacency_matrix(const LinkGraph& graph);

// Rank-k factorization of a graph's adjacency matrix.
class SvdModel {
 public:
  static constexpr std::uint32_t kFormatVersion = 1;

  SvdModel() = default;
  static SvdModel build(const LinkGraph& graph, const SvdOptions& options);

  std::size_t rank() const noexcept { return static_cast<std::size_t>(factors_.singular_values.size()); }
  std::size_t n_articles() const noexcept { return static_cast<std::size_t>(factors_.left.rows()); }
  const TruncatedSvd& factors() const noexcept { return factors_; }
  std::uint64_t seed() const noexcept { return seed_; }
  double tolerance() const noexcept { return tolerance_; }
  std::uint64_t graph_checksum() const noexcept { return graph_checksum_; }

  // A_k[s, t].
  double approximation(ArticleId s, ArticleId t) const;

  // Versioned little-endian binary: magic, version, header (rows, cols, k,
  // seed, tolerance, graph checksum, iterations, residual), then singular
  // values and both factor matrices in column-major order.
  void save(const std::filesystem::path& file) const;
  static SvdModel load(const std::filesystem::path& file);

 private:
  TruncatedSvd factors_;
  std::uint64_t seed_ = 0;
  double tolerance_ = 0.0;
  std::uint64_t graph_checksum_ = 0;
};

// A_k[s, t] - A[s, t]. Throws Error(model_mismatch) if the model was built
// from a different graph.
double svd_score(ArticleId s, ArticleId t, const SvdModel& model, const LinkGraph& graph);

// Fraction of paths to t that pass through s. Throws if t has no paths.
double path_frequency(ArticleId s, ArticleId t, const TargetIndex& index);

enum class RankMethod { mw, svd, freq };

std::string_view method_name(RankMethod method) noexcept;
RankMethod parse_method(std::string_view name);

struct RankedEntry {
  ArticleId source{};
  double score = 0.0;
  double path_frequency = 0.0;
  std::uint32_t penultimate_count = 0;

  friend bool operator==(const RankedEntry&, const RankedEntry&) = default;
};

struct RankedSuggestions {
  ArticleId target{};
  RankMethod method = RankMethod::freq;
  Selection selection = Selection::path;
  std::vector<RankedEntry> entries;  // best first
};

// What each method needs: mw the graph, svd the graph and a model, freq
// nothing beyond the candidates. Titles drive the final tie-break.
struct RankingContext {
  const TitleTable* titles = nullptr;
  const LinkGraph* graph = nullptr;
  const SvdModel* svd = nullptr;
};

// Orders by score descending, then path frequency descending, then source
// title ascending.
RankedSuggestions rank_candidates(const CandidateSet& set, RankMethod method,
                                  const RankingContext& context);

// The ordering rule above as a comparator on entries.
bool ranks_before(const RankedEntry& a, const RankedEntry& b, const TitleTable* titles);

// CSV `target,rank,source,score,method`, rank starting at 1.
void write_rankings_csv(std::ostream& out, std::span<const RankedSuggestions> rankings,
                        const TitleTable& titles);
std::vector<RankedSuggestions> read_rankings_csv(const std::filesystem::path& file,
                                                 const TitleTable& titles);

}  // namespace pathlinks
