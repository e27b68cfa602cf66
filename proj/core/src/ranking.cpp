#include "pathlinks/ranking.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <random>

#include "pathlinks/error.hpp"
#include "pathlinks/io.hpp"

namespace pathlinks {

double mw_relatedness(ArticleId s, ArticleId t, const LinkGraph& graph) {
  const auto in_s = graph.inlinks(s);
  const auto in_t = graph.inlinks(t);
  if (in_s.empty() || in_t.empty()) return 0.0;

  std::size_t common = 0;
  for (auto a = in_s.begin(), b = in_t.begin(); a != in_s.end() && b != in_t.end();) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      ++common;
      ++a;
      ++b;
    }
  }
  if (common == 0) return 0.0;

  const auto larger = static_cast<double>(std::max(in_s.size(), in_t.size()));
  const auto smaller = static_cast<double>(std::min(in_s.size(), in_t.size()));
  const double denominator = std::log(static_cast<double>(graph.n_articles())) - std::log(smaller);
  if (denominator <= 0.0) return 0.0;
  const double distance = (std::log(larger) - std::log(static_cast<double>(common))) / denominator;
  return std::clamp(1.0 - distance, 0.0, 1.0);
}

// --- truncated SVD ------------------------------------------------------------

namespace {

Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& y) {
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
  return qr.householderQ() * Eigen::MatrixXd::Identity(y.rows(), y.cols());
}

}  // namespace

TruncatedSvd truncated_svd(const SparseMatrix& matrix, const SvdOptions& options) {
  const auto rows = static_cast<std::size_t>(matrix.rows());
  const auto cols = static_cast<std::size_t>(matrix.cols());
  const std::size_t k = options.rank;
  if (k < 1 || k > std::min(rows, cols))
    throw Error(ErrorCode::invalid_argument,
                "SVD rank " + std::to_string(k) + " outside [1, " +
                    std::to_string(std::min(rows, cols)) + "]");
  const std::size_t oversampling = options.oversampling > 0 ? options.oversampling : std::max<std::size_t>(10, k / 2);
  const std::size_t width = std::min(k + oversampling, std::min(rows, cols));
  const auto ik = static_cast<Eigen::Index>(k);
  const auto iw = static_cast<Eigen::Index>(width);

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gaussian(0.0, 1.0);
  Eigen::MatrixXd sketch(static_cast<Eigen::Index>(cols), iw);
  for (Eigen::Index j = 0; j < sketch.cols(); ++j)
    for (Eigen::Index i = 0; i < sketch.rows(); ++i) sketch(i, j) = gaussian(rng);

  Eigen::MatrixXd basis = orthonormal_basis(matrix * sketch);
  double residual = 0.0;
  for (std::size_t iteration = 0; iteration <= options.max_iterations; ++iteration) {
    // B = Q^T A, formed as (A^T Q)^T to stay on sparse-times-dense products.
    // With A^T Q = P R and R = U' S V'^T, B = (Q V') S (P U')^T.
    const Eigen::MatrixXd projected_t = matrix.transpose() * basis;  // cols x width
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(projected_t);
    const Eigen::MatrixXd p = qr.householderQ() * Eigen::MatrixXd::Identity(projected_t.rows(), iw);
    const Eigen::MatrixXd r = qr.matrixQR().topRows(iw).triangularView<Eigen::Upper>();
    const Eigen::BDCSVD<Eigen::MatrixXd> small(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
    TruncatedSvd result;
    result.singular_values = small.singularValues().head(ik);
    result.left = basis * small.matrixV().leftCols(ik);
    result.right = p * small.matrixU().leftCols(ik);

    const Eigen::MatrixXd defect =
        matrix * result.right - result.left * result.singular_values.asDiagonal();
    residual = defect.norm();
    const double scale = result.singular_values.size() > 0 ? result.singular_values(0) : 0.0;
    if (residual <= options.tolerance * scale) {
      result.iterations = iteration;
      result.residual = residual;
      return result;
    }
    basis = orthonormal_basis(matrix * p);
  }
  throw Error(ErrorCode::non_convergence,
              "truncated SVD did not converge in " + std::to_string(options.max_iterations) +
                  " iterations (residual " + io::format_double(residual) + ")");
}

SparseMatrix adjacency_matrix(const LinkGraph& graph) {
  const auto n = static_cast<Eigen::Index>(graph.n_articles());
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(graph.n_edges());
  for (const auto& [s, t] : graph.edges())
    entries.emplace_back(static_cast<Eigen::Index>(to_index(s)), static_cast<Eigen::Index>(to_index(t)), 1.0);
  SparseMatrix a(n, n);
  a.setFromTriplets(entries.begin(), entries.end());
  return a;
}

SvdModel SvdModel::build(const LinkGraph& graph, const SvdOptions& options) {
  SvdModel model;
  model.factors_ = truncated_svd(adjacency_matrix(graph), options);
  model.seed_ = options.seed;
  model.tolerance_ = options.tolerance;
  model.graph_checksum_ = graph.checksum();
  return model;
}

double SvdModel::approximation(ArticleId s, ArticleId t) const {
  const auto i = static_cast<Eigen::Index>(to_index(s));
  const auto j = static_cast<Eigen::Index>(to_index(t));
  if (i >= factors_.left.rows() || j >= factors_.right.rows())
    throw Error(ErrorCode::unknown_article, "article id outside the SVD model");
  double value = 0.0;
  for (Eigen::Index c = 0; c < factors_.singular_values.size(); ++c)
    value += factors_.left(i, c) * factors_.singular_values(c) * factors_.right(j, c);
  return value;
}

namespace {

constexpr char kMagic[8] = {'P', 'L', 'S', 'V', 'D', 'M', 'D', 'L'};

template <typename T>
void write_pod(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw Error(ErrorCode::parse_failure, "truncated SVD model file");
  return value;
}

void write_block(std::ostream& out, const double* data, std::size_t count) {
  out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
}

void read_block(std::istream& in, double* data, std::size_t count) {
  in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) throw Error(ErrorCode::parse_failure, "truncated SVD model file");
}

}  // namespace

void SvdModel::save(const std::filesystem::path& file) const {
  auto out = io::open_output(file);
  out.write(kMagic, sizeof(kMagic));
  write_pod<std::uint32_t>(out, kFormatVersion);
  write_pod<std::uint64_t>(out, static_cast<std::uint64_t>(factors_.left.rows()));
  write_pod<std::uint64_t>(out, static_cast<std::uint64_t>(factors_.right.rows()));
  write_pod<std::uint64_t>(out, rank());
  write_pod<std::uint64_t>(out, seed_);
  write_pod<double>(out, tolerance_);
  write_pod<std::uint64_t>(out, graph_checksum_);
  write_pod<std::uint64_t>(out, factors_.iterations);
  write_pod<double>(out, factors_.residual);
  write_block(out, factors_.singular_values.data(), rank());
  write_block(out, factors_.left.data(), static_cast<std::size_t>(factors_.left.size()));
  write_block(out, factors_.right.data(), static_cast<std::size_t>(factors_.right.size()));
  if (!out) throw Error(ErrorCode::missing_file, "failed writing " + file.string());
}

SvdModel SvdModel::load(const std::filesystem::path& file) {
  auto in = io::open_input(file);
  char magic[sizeof(kMagic)] = {};
  in.read(magic, sizeof(magic));
  if (!in || !std::equal(std::begin(magic), std::end(magic), std::begin(kMagic)))
    throw Error(ErrorCode::parse_failure, file.string() + " is not an SVD model file");
  const auto version = read_pod<std::uint32_t>(in);
  if (version != kFormatVersion)
    throw Error(ErrorCode::parse_failure, "unsupported SVD model version " + std::to_string(version));
  const auto rows = static_cast<Eigen::Index>(read_pod<std::uint64_t>(in));
  const auto cols = static_cast<Eigen::Index>(read_pod<std::uint64_t>(in));
  const auto k = static_cast<Eigen::Index>(read_pod<std::uint64_t>(in));
  SvdModel model;
  model.seed_ = read_pod<std::uint64_t>(in);
  model.tolerance_ = read_pod<double>(in);
  model.graph_checksum_ = read_pod<std::uint64_t>(in);
  model.factors_.iterations = read_pod<std::uint64_t>(in);
  model.factors_.residual = read_pod<double>(in);
  model.factors_.singular_values.resize(k);
  model.factors_.left.resize(rows, k);
  model.factors_.right.resize(cols, k);
  read_block(in, model.factors_.singular_values.data(), static_cast<std::size_t>(k));
  read_block(in, model.factors_.left.data(), static_cast<std::size_t>(rows * k));
  read_block(in, model.factors_.right.data(), static_cast<std::size_t>(cols * k));
  return model;
}

double svd_score(ArticleId s, ArticleId t, const SvdModel& model, const LinkGraph& graph) {
  if (model.graph_checksum() != graph.checksum())
    throw Error(ErrorCode::model_mismatch, "SVD model was built from a different link graph");
  const double present = graph.has_edge(s, t) ? 1.0 : 0.0;
  return model.approximation(s, t) - present;
}

double path_frequency(ArticleId s, ArticleId t, const TargetIndex& index) {
  const std::size_t total = index.n_paths(t);
  if (total == 0)
    throw Error(ErrorCode::invalid_argument, "no paths for target " + std::to_string(to_index(t)));
  const PairStats* stats = index.find(s, t);
  return stats ? static_cast<double>(stats->n_paths_through) / static_cast<double>(total) : 0.0;
}

// --- ranking ------------------------------------------------------------------

std::string_view method_name(RankMethod method) noexcept {
  switch (method) {
    case RankMethod::mw: return "mw";
    case RankMethod::svd: return "svd";
    case RankMethod::freq: return "freq";
  }
  return "unknown";
}

RankMethod parse_method(std::string_view name) {
  if (name == "mw") return RankMethod::mw;
  if (name == "svd") return RankMethod::svd;
  if (name == "freq") return RankMethod::freq;
  throw Error(ErrorCode::invalid_argument, "unknown ranking method '" + std::string(name) + "'");
}

bool ranks_before(const RankedEntry& a, const RankedEntry& b, const TitleTable* titles) {
  if (a.score != b.score) return a.score > b.score;
  if (a.path_frequency != b.path_frequency) return a.path_frequency > b.path_frequency;
  if (titles) {
    const auto& ta = titles->title(a.source);
    const auto& tb = titles->title(b.source);
    if (ta != tb) return ta < tb;
  }
  return a.source < b.source;
}

RankedSuggestions rank_candidates(const CandidateSet& set, RankMethod method,
                                  const RankingContext& context) {
  if (method == RankMethod::freq && set.selection == Selection::none)
    throw Error(ErrorCode::invalid_argument,
                "frequency ranking needs path-based candidates (selection=path)");
  if ((method == RankMethod::mw || method == RankMethod::svd) && !context.graph)
    throw Error(ErrorCode::invalid_argument, "ranking method needs the link graph");
  if (method == RankMethod::svd && !context.svd)
    throw Error(ErrorCode::invalid_argument, "svd ranking needs an SVD model");

  RankedSuggestions ranked;
  ranked.target = set.target;
  ranked.method = method;
  ranked.selection = set.selection;
  ranked.entries.reserve(set.candidates.size());
  for (const auto& c : set.candidates) {
    double score = 0.0;
    switch (method) {
      case RankMethod::mw: score = mw_relatedness(c.source, c.target, *context.graph); break;
      case RankMethod::svd: score = svd_score(c.source, c.target, *context.svd, *context.graph); break;
      case RankMethod::freq: score = c.path_frequency; break;
    }
    ranked.entries.push_back({c.source, score, c.path_frequency, c.penultimate_count});
  }
  std::sort(ranked.entries.begin(), ranked.entries.end(),
            [&](const RankedEntry& a, const RankedEntry& b) { return ranks_before(a, b, context.titles); });
  return ranked;
}

void write_rankings_csv(std::ostream& out, std::span<const RankedSuggestions> rankings,
                        const TitleTable& titles) {
  out << "target,rank,source,score,method\n";
  for (const auto& ranking : rankings) {
    const std::string target = io::csv_quote(titles.title(ranking.target));
    for (std::size_t r = 0; r < ranking.entries.size(); ++r) {
      const auto& e = ranking.entries[r];
      out << target << ',' << r + 1 << ',' << io::csv_quote(titles.title(e.source)) << ','
          << io::format_double(e.score) << ',' << method_name(ranking.method) << '\n';
    }
  }
}

std::vector<RankedSuggestions> read_rankings_csv(const std::filesystem::path& file,
                                                 const TitleTable& titles) {
  std::map<ArticleId, RankedSuggestions> rankings;
  bool header_seen = false;
  io::for_each_data_line(file, [&](std::size_t line_number, std::string_view line) {
    const auto where = file.filename().string() + ":" + std::to_string(line_number) + ": ";
    if (!header_seen) {
      header_seen = true;
      if (line.rfind("target,", 0) == 0) return;
    }
    const auto fields = io::parse_csv_line(line);
    if (fields.size() != 5) throw Error(ErrorCode::parse_failure, where + "expected 5 columns");
    const auto target = titles.find(fields[0]);
    const auto source = titles.find(fields[2]);
    if (!target || !source) throw Error(ErrorCode::parse_failure, where + "unknown title");
    auto& ranking = rankings[*target];
    ranking.target = *target;
    ranking.method = parse_method(fields[4]);
    const auto rank = io::parse_int(fields[1]);
    if (rank != static_cast<std::int64_t>(ranking.entries.size()) + 1)
      throw Error(ErrorCode::parse_failure, where + "ranks must be consecutive from 1");
    ranking.entries.push_back({*source, io::parse_double(fields[3]), 0.0, 0});
  });
  std::vector<RankedSuggestions> result;
  for (auto& [target, ranking] : rankings) result.push_back(std::move(ranking));
  return result;
}

}  // namespace pathlinks
