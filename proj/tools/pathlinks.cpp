// Command-line front end: ingest, mine, rank, eval, analyze, synth.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pathlinks/corpus.hpp"
#include "pathlinks/error.hpp"
#include "pathlinks/eval.hpp"
#include "pathlinks/groundtruth.hpp"
#include "pathlinks/io.hpp"
#include "pathlinks/miner.hpp"
#include "pathlinks/parallel.hpp"
#include "pathlinks/ranking.hpp"
#include "pathlinks/synth.hpp"
#include "pathlinks/traces.hpp"
#include "pathlinks/version.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace pathlinks;

namespace {

struct CommonOptions {
  std::string corpus_dir;
  std::string titles, links, anchors, texts;
  Timestamp reference_time = 0;
  unsigned threads = 1;
  std::uint64_t seed = 1;
  double min_link_probability = 0.065;
  double min_target_share = 0.01;
  bool case_sensitive = false;
};

std::string pick(const std::string& explicit_path, const std::string& dir, const char* name) {
  if (!explicit_path.empty()) return explicit_path;
  if (!dir.empty()) return (fs::path(dir) / name).string();
  throw Error(ErrorCode::invalid_argument,
              std::string("no path for ") + name + "; pass --corpus or the individual file flag");
}

struct Inputs {
  const CommonOptions& common;
  io::Metadata metadata;

  std::string titles() { return add("titles", pick(common.titles, common.corpus_dir, "titles.txt")); }
  std::string links() { return add("links", pick(common.links, common.corpus_dir, "links.tsv")); }
  std::string anchors() { return add("anchors", pick(common.anchors, common.corpus_dir, "anchors.tsv")); }
  std::string texts() {
    const auto dir = pick(common.texts, common.corpus_dir, "texts");
    if (!fs::is_directory(dir)) throw Error(ErrorCode::missing_file, "no text directory " + dir);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
      if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    std::string listing;
    for (const auto& file : files) listing += file.filename().string() + '\t' + io::sha256_file(file) + '\n';
    metadata.input_checksums["texts"] = io::sha256_hex(listing);
    return dir;
  }
  std::string add(const std::string& name, const std::string& file) {
    metadata.input_checksums[name] = io::sha256_file(file);
    return file;
  }

  CorpusPaths corpus() { return {titles(), links(), anchors(), texts()}; }
  AnchorThresholds thresholds() const { return {common.min_link_probability, common.min_target_share}; }
  MatchOptions match() const { return {common.case_sensitive, true}; }
};

// Every option of the main app and the subcommand that has a long name, except
// bookkeeping flags that do not change results.
std::map<std::string, std::string> echo_config(const CLI::App& app, const CLI::App& sub) {
  std::map<std::string, std::string> config;
  const auto collect = [&](const CLI::App& from) {
    for (const auto* option : from.get_options()) {
      const auto& name = option->get_single_name();
      if (name.empty() || name == "help" || name == "config" || name == "threads" || name == "version")
        continue;
      std::string value;
      if (option->count() > 0) {
        for (const auto& result : option->results()) value += (value.empty() ? "" : ",") + result;
      } else {
        value = option->get_default_str();
      }
      config[name] = value;
    }
  };
  collect(app);
  collect(sub);
  return config;
}

void report_diagnostics(const Diagnostics& diagnostics) {
  for (const auto& [category, count] : diagnostics.counts())
    std::cerr << "warning=" << category << " count=" << count << '\n';
}

json diagnostics_json(const Diagnostics& diagnostics) {
  json out = json::object();
  for (const auto& [category, count] : diagnostics.counts()) out[category] = count;
  return out;
}

json metadata_json(const io::Metadata& metadata) {
  json out;
  out["tool"] = metadata.tool;
  out["version"] = metadata.version;
  out["command"] = metadata.command;
  out["config_hash"] = metadata.config_hash();
  out["config"] = metadata.config;
  out["inputs"] = metadata.input_checksums;
  return out;
}

void write_json(const fs::path& file, const json& value) {
  auto out = io::open_output(file);
  out << value.dump(2) << '\n';
}

Selection selection_of(const fs::path& file) {
  const auto block = io::read_comment_block(file);
  const auto it = block.find("config.selection");
  if (it == block.end())
    throw Error(ErrorCode::parse_failure, file.string() + ": no selection recorded in the metadata block");
  return parse_selection(it->second);
}

// --- ingest -------------------------------------------------------------------

struct IngestOptions {
  std::vector<std::string> finished, unfinished, jsonl;
  bool include_unfinished = false;
  bool keep_detours = false;
  std::string out;
};

void run_ingest(Inputs& in, const IngestOptions& opt) {
  const auto titles = TitleTable::load(in.titles());
  Diagnostics diagnostics;
  std::vector<RawPathRecord> records;
  const auto append = [&](std::vector<RawPathRecord> more) {
    records.insert(records.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
  };
  for (std::size_t i = 0; i < opt.finished.size(); ++i)
    append(parse_wikispeedia(in.add("finished." + std::to_string(i), opt.finished[i]), PathFileKind::finished, diagnostics));
  for (std::size_t i = 0; i < opt.unfinished.size(); ++i)
    append(parse_wikispeedia(in.add("unfinished." + std::to_string(i), opt.unfinished[i]), PathFileKind::unfinished, diagnostics));
  for (std::size_t i = 0; i < opt.jsonl.size(); ++i)
    append(parse_generic_paths(in.add("jsonl." + std::to_string(i), opt.jsonl[i]), diagnostics));
  if (records.empty() && diagnostics.total() == 0)
    throw Error(ErrorCode::invalid_argument, "no path files given");

  const NormalizeOptions normalize{opt.keep_detours, opt.include_unfinished};
  auto paths = normalize_paths(records, titles, normalize, diagnostics);
  {
    auto out = io::open_output(fs::path(opt.out) / "paths.tsv");
    in.metadata.write_comment_block(out);
    write_paths(out, paths, titles);
  }
  const auto index = TargetIndex::build(std::move(paths));
  const auto stats = dataset_stats(index);
  json report;
  report["metadata"] = metadata_json(in.metadata);
  report["records"] = records.size();
  report["stats"] = {{"n_paths", stats.n_paths},
                     {"n_finished", stats.n_finished},
                     {"n_missions", stats.n_missions},
                     {"n_targets", stats.n_targets},
                     {"mean_paths_per_target", stats.mean_paths_per_target},
                     {"median_paths_per_target", stats.median_paths_per_target},
                     {"targets_with_100_paths", stats.targets_with_100},
                     {"targets_with_500_paths", stats.targets_with_500}};
  report["warnings"] = diagnostics_json(diagnostics);
  write_json(fs::path(opt.out) / "stats.json", report);
  report_diagnostics(diagnostics);
  std::cout << "paths=" << stats.n_paths << " finished=" << stats.n_finished << " targets=" << stats.n_targets
            << " median_paths_per_target=" << io::format_double(stats.median_paths_per_target) << '\n';
}

// --- mine ---------------------------------------------------------------------

struct MineOptions {
  std::string paths;
  std::string selection = "path";
  std::size_t min_paths = 100;
  double position_threshold = 0.5;
  std::uint32_t min_support = 1;
  std::string out;
};

void run_mine(Inputs& in, const MineOptions& opt) {
  const auto selection = parse_selection(opt.selection);
  Diagnostics diagnostics;
  const auto corpus = load_corpus(in.corpus(), in.common.reference_time, in.thresholds(), in.match(), diagnostics);
  const auto index = TargetIndex::build(read_paths(in.add("paths", opt.paths), corpus.titles));
  std::vector<ArticleId> targets;
  for (const auto t : index.targets())
    if (index.n_paths(t) >= opt.min_paths) targets.push_back(t);

  const MinerConfig config{opt.position_threshold, opt.min_support};
  std::vector<CandidateSet> sets(targets.size());
  std::vector<FilterCounts> counts(targets.size());
  parallel_for(targets.size(), in.common.threads, [&](std::size_t i) {
    sets[i] = selection == Selection::path
                  ? mine_target(targets[i], index, corpus.graph, corpus.mentions, config, &counts[i])
                  : baseline_all_mentions(targets[i], corpus.graph, corpus.mentions, &index);
  });
  FilterCounts total;
  std::size_t n_candidates = 0;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    total += counts[i];
    n_candidates += sets[i].candidates.size();
  }
  auto out = io::open_output(opt.out);
  in.metadata.write_comment_block(out);
  write_candidates_csv(out, sets, corpus.titles);
  report_diagnostics(diagnostics);
  std::cout << "targets=" << targets.size() << " candidates=" << n_candidates;
  if (selection == Selection::path)
    std::cout << " examined=" << total.examined << " linked=" << total.linked
              << " not_mentioned=" << total.not_mentioned << " early_position=" << total.early_position
              << " low_support=" << total.low_support;
  std::cout << '\n';
}

// --- rank ---------------------------------------------------------------------

struct RankOptions {
  std::string candidates;
  std::string method = "mw";
  std::size_t rank_k = 256;
  double tolerance = 1e-10;
  std::size_t max_iterations = 500;
  std::string model_in, model_out;
  std::string out;
};

void run_rank(Inputs& in, const RankOptions& opt) {
  const auto method = parse_method(opt.method);
  const auto titles = TitleTable::load(in.titles());
  const auto graph = LinkGraph::load(in.links(), titles, in.common.reference_time);
  const auto selection = selection_of(opt.candidates);
  const auto sets = read_candidates_csv(in.add("candidates", opt.candidates), titles, selection);
  in.metadata.config["selection"] = std::string(selection_name(selection));

  std::optional<SvdModel> model;
  if (method == RankMethod::svd) {
    if (!opt.model_in.empty()) {
      model = SvdModel::load(in.add("svd_model", opt.model_in));
    } else {
      model = SvdModel::build(graph, {opt.rank_k, in.common.seed, opt.tolerance, 10, opt.max_iterations});
    }
    if (!opt.model_out.empty()) model->save(opt.model_out);
  }
  const RankingContext context{&titles, &graph, model ? &*model : nullptr};
  std::vector<RankedSuggestions> rankings(sets.size());
  parallel_for(sets.size(), in.common.threads,
               [&](std::size_t i) { rankings[i] = rank_candidates(sets[i], method, context); });
  auto out = io::open_output(opt.out);
  in.metadata.write_comment_block(out);
  write_rankings_csv(out, rankings, titles);
  std::cout << "targets=" << rankings.size() << " method=" << method_name(method) << '\n';
}

// --- eval ---------------------------------------------------------------------

struct EvalOptions {
  std::string rankings, candidates, history, creation;
  double alpha = 0.30;
  std::size_t max_k = 10;
  std::string label_mode = "standard";
  Timestamp static_snapshot_time = 0;
  std::string static_links;
  std::vector<std::size_t> volume_grid;
  std::string out;
};

void run_eval(Inputs& in, const EvalOptions& opt) {
  if (opt.max_k == 0) throw Error(ErrorCode::invalid_argument, "--max-k must be at least 1");
  const auto titles = TitleTable::load(in.titles());
  const auto selection = selection_of(opt.rankings);
  auto rankings = read_rankings_csv(in.add("rankings", opt.rankings), titles);
  for (auto& ranking : rankings) ranking.selection = selection;
  in.metadata.config["selection"] = std::string(selection_name(selection));

  // Path statistics come from the candidate file the rankings were built from.
  if (!opt.candidates.empty()) {
    std::unordered_map<LinkPair, const SourceCandidate*, LinkPairHash> by_pair;
    const auto sets = read_candidates_csv(in.add("candidates", opt.candidates), titles, selection);
    for (const auto& set : sets)
      for (const auto& c : set.candidates) by_pair[{c.source, c.target}] = &c;
    for (auto& ranking : rankings)
      for (auto& entry : ranking.entries)
        if (const auto it = by_pair.find({entry.source, ranking.target}); it != by_pair.end()) {
          entry.path_frequency = it->second->path_frequency;
          entry.penultimate_count = it->second->penultimate_count;
        }
  }

  if (in.common.reference_time == 0)
    throw Error(ErrorCode::invalid_argument, "labels need --reference-time");
  Diagnostics diagnostics;
  const auto history = LinkHistory::load(in.add("history", opt.history), in.add("creation", opt.creation), titles, diagnostics);
  LabelConfig label_config;
  label_config.alpha = opt.alpha;
  label_config.reference_time = in.common.reference_time;
  label_config.static_snapshot_time = opt.static_snapshot_time;
  std::optional<LinkGraph> static_graph;
  if (opt.label_mode == "strict") {
    label_config.mode = LabelMode::strict;
    if (opt.static_links.empty())
      throw Error(ErrorCode::invalid_argument, "strict labels need --static-links");
    static_graph = LinkGraph::load(in.add("static_links", opt.static_links), titles, opt.static_snapshot_time);
  } else if (opt.label_mode != "standard") {
    throw Error(ErrorCode::invalid_argument, "unknown label mode '" + opt.label_mode + "'");
  }
  const Labeler labels = [&](ArticleId s, ArticleId t) {
    return label_config.mode == LabelMode::strict
               ? strict_label_candidate(s, t, history, label_config, *static_graph)
               : label_candidate(s, t, history, label_config);
  };

  std::vector<std::optional<std::vector<double>>> slots(rankings.size());
  parallel_for(rankings.size(), in.common.threads,
               [&](std::size_t i) { slots[i] = precision_at_k(rankings[i], labels, opt.max_k); });
  std::vector<TargetPrecision> per_target;
  for (std::size_t i = 0; i < rankings.size(); ++i)
    if (slots[i]) per_target.push_back({rankings[i].target, std::move(*slots[i])});
  auto report = aggregate_report(per_target, opt.max_k);
  report.n_targets_ranked = rankings.size();
  report.alpha = opt.alpha;

  const fs::path dir(opt.out);
  json out;
  out["metadata"] = metadata_json(in.metadata);
  out["selection"] = selection_name(selection);
  out["method"] = rankings.empty() ? std::string() : std::string(method_name(rankings.front().method));
  out["label_mode"] = opt.label_mode;
  out["alpha"] = opt.alpha;
  out["max_k"] = opt.max_k;
  out["n_targets_ranked"] = report.n_targets_ranked;
  out["n_targets_eligible"] = report.per_target.size();
  out["precision_at_k"] = report.mean_precision;
  out["auc"] = report.auc;
  json per = json::array();
  for (const auto& target : report.per_target)
    per.push_back({{"target", titles.title(target.target)}, {"precision_at_k", target.precision}});
  out["per_target"] = per;

  {
    auto csv = io::open_output(dir / "precision.csv");
    in.metadata.write_comment_block(csv);
    write_precision_csv(csv, report);
  }
  if (selection == Selection::path && !opt.candidates.empty()) {
    const auto curve = final_click_curve(rankings, opt.max_k);
    out["final_click"] = curve;
    auto csv = io::open_output(dir / "final_click.csv");
    in.metadata.write_comment_block(csv);
    write_curve_csv(csv, "final_click_fraction", curve);
  }
  const auto volume = volume_precision_curve(rankings, labels, &titles, opt.volume_grid);
  json volume_json = json::array();
  for (const auto& point : volume) volume_json.push_back({point.n_suggestions, point.precision});
  out["volume_precision"] = volume_json;
  {
    auto csv = io::open_output(dir / "volume.csv");
    in.metadata.write_comment_block(csv);
    write_volume_csv(csv, volume);
  }
  out["warnings"] = diagnostics_json(diagnostics);
  write_json(dir / "report.json", out);
  report_diagnostics(diagnostics);
  std::cout << "eligible=" << report.per_target.size() << "/" << report.n_targets_ranked
            << " auc=" << io::format_double(report.auc) << '\n';
}

// --- analyze ------------------------------------------------------------------

struct AnalyzeOptions {
  std::string paths, history, creation, candidates, human_labels;
  std::vector<double> alphas{0.1, 0.3, 0.5};
  double alpha = 0.30;
  std::size_t bins = 10;
  std::string out;
};

void run_analyze(Inputs& in, const AnalyzeOptions& opt) {
  Diagnostics diagnostics;
  const auto corpus = load_corpus(in.corpus(), in.common.reference_time, in.thresholds(), in.match(), diagnostics);
  const auto paths = read_paths(in.add("paths", opt.paths), corpus.titles);
  std::optional<LinkHistory> history;
  if ((!opt.history.empty() || !opt.creation.empty()) && in.common.reference_time == 0)
    throw Error(ErrorCode::invalid_argument, "link rates need --reference-time");
  if (!opt.history.empty() || !opt.creation.empty())
    history = LinkHistory::load(in.add("history", opt.history), in.add("creation", opt.creation), corpus.titles, diagnostics);
  const LinkRateFn rate = [&](ArticleId s, ArticleId t) {
    return link_rate(s, t, *history, in.common.reference_time);
  };
  const auto table = bucket_analysis(paths, corpus.mentions, corpus.graph, history ? &rate : nullptr, opt.alphas);
  const auto stats = corpus_path_stats(paths, corpus.mentions, corpus.graph);
  const fs::path dir(opt.out);
  {
    auto csv = io::open_output(dir / "buckets.csv");
    in.metadata.write_comment_block(csv);
    write_buckets_csv(csv, table);
  }
  json out;
  out["metadata"] = metadata_json(in.metadata);
  out["bucket_paths"] = table.n_paths;
  out["path_stats"] = {{"n_paths", stats.n_paths},
                       {"mean_mentioning_pages", stats.mean_mentioning_pages()},
                       {"mentioning_visits", stats.mentioning_visits},
                       {"linking", stats.linking},
                       {"non_linking", stats.non_linking},
                       {"linking_fraction", stats.linking_fraction()}};

  if (!opt.human_labels.empty()) {
    if (!history || opt.candidates.empty())
      throw Error(ErrorCode::invalid_argument, "--human-labels needs --candidates, --history and --creation");
    const auto selection = selection_of(opt.candidates);
    AutoLabels auto_labels;
    for (const auto& set : read_candidates_csv(in.add("candidates", opt.candidates), corpus.titles, selection))
      for (const auto& c : set.candidates) auto_labels[{c.source, c.target}] = rate(c.source, c.target) > opt.alpha;
    const auto human = load_human_labels(in.add("human_labels", opt.human_labels), corpus.titles);
    const auto histogram = false_negative_histogram(auto_labels, human, opt.bins);
    auto csv = io::open_output(dir / "false_negatives.csv");
    in.metadata.write_comment_block(csv);
    write_histogram_csv(csv, histogram);
    out["false_negative_histogram"] = histogram.counts;
  }
  out["warnings"] = diagnostics_json(diagnostics);
  write_json(dir / "analysis.json", out);
  report_diagnostics(diagnostics);
  std::cout << "bucket_paths=" << table.n_paths
            << " mean_mentioning_pages=" << io::format_double(stats.mean_mentioning_pages()) << '\n';
}

// --- synth --------------------------------------------------------------------

void run_synth(Inputs& in, SynthConfig config, const std::string& out) {
  config.seed = in.common.seed;
  const auto world = generate_world(config);
  Diagnostics diagnostics;
  const auto paths = simulate_paths(world, diagnostics);
  write_world(world, paths, out, &in.metadata);
  report_diagnostics(diagnostics);
  const auto finished = std::count_if(paths.begin(), paths.end(), [](const auto& p) { return p.finished(); });
  std::cout << "articles=" << world.titles.size() << " snapshot_links=" << world.snapshot.n_edges()
            << " planted=" << world.planted.size() << " paths=" << paths.size() << " finished=" << finished
            << " reference_time=" << world.reference_time << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mine missing links from navigation traces"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();
  app.set_config("--config", "", "flat key = value file; command-line flags win");

  CommonOptions common;
  app.add_option("--corpus", common.corpus_dir, "directory with titles.txt, links.tsv, anchors.tsv, texts/");
  app.add_option("--titles", common.titles, "titles file (overrides --corpus)");
  app.add_option("--links", common.links, "snapshot links file (overrides --corpus)");
  app.add_option("--anchors", common.anchors, "anchor occurrence file (overrides --corpus)");
  app.add_option("--texts", common.texts, "article text directory (overrides --corpus)");
  app.add_option("--reference-time", common.reference_time, "snapshot time T (unix seconds)");
  app.add_option("--threads", common.threads, "worker threads; results do not depend on it")->check(CLI::PositiveNumber);
  app.add_option("--seed", common.seed, "random seed (synth, svd)");
  app.add_option("--min-link-probability", common.min_link_probability, "anchor link-probability floor")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--min-target-share", common.min_target_share, "anchor target-share floor")
      ->check(CLI::Range(0.0, 1.0));
  app.add_flag("--case-sensitive", common.case_sensitive, "match mentions case-sensitively");

  IngestOptions ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "parse traces, normalize paths, report dataset statistics");
  ingest_cmd->add_option("--finished", ingest.finished, "Wikispeedia finished-paths TSV (repeatable)");
  ingest_cmd->add_option("--unfinished", ingest.unfinished, "Wikispeedia unfinished-paths TSV (repeatable)");
  ingest_cmd->add_option("--jsonl", ingest.jsonl, "JSON-lines path file (repeatable)");
  ingest_cmd->add_flag("--include-unfinished", ingest.include_unfinished, "keep unfinished paths");
  ingest_cmd->add_flag("--keep-detours", ingest.keep_detours, "keep pages abandoned by back-clicks");
  ingest_cmd->add_option("--out", ingest.out, "output directory for paths.tsv and stats.json")->required();

  MineOptions mine;
  auto* mine_cmd = app.add_subcommand("mine", "select source candidates per target");
  mine_cmd->add_option("--paths", mine.paths, "normalized paths.tsv from ingest")->required();
  mine_cmd->add_option("--selection", mine.selection, "path | none")->check(CLI::IsMember({"path", "none"}));
  mine_cmd->add_option("--min-paths", mine.min_paths, "only targets with at least this many paths");
  mine_cmd->add_option("--position-threshold", mine.position_threshold, "minimum mean relative position (exclusive)")
      ->check(CLI::Range(0.0, 1.0));
  mine_cmd->add_option("--min-support", mine.min_support, "minimum number of paths through a source");
  mine_cmd->add_option("--out", mine.out, "candidates CSV")->required();

  RankOptions rank;
  auto* rank_cmd = app.add_subcommand("rank", "score and order candidates");
  rank_cmd->add_option("--candidates", rank.candidates, "candidates CSV from mine")->required();
  rank_cmd->add_option("--method", rank.method, "mw | svd | freq")->check(CLI::IsMember({"mw", "svd", "freq"}));
  rank_cmd->add_option("--rank-k", rank.rank_k, "SVD rank")->check(CLI::PositiveNumber);
  rank_cmd->add_option("--svd-tolerance", rank.tolerance, "relative residual tolerance");
  rank_cmd->add_option("--svd-max-iterations", rank.max_iterations, "subspace iteration budget");
  rank_cmd->add_option("--svd-model-in", rank.model_in, "reuse a saved SVD model");
  rank_cmd->add_option("--svd-model-out", rank.model_out, "save the SVD model");
  rank_cmd->add_option("--out", rank.out, "rankings CSV")->required();

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "precision@k, AUC and curves against link-history labels");
  eval_cmd->add_option("--rankings", eval.rankings, "rankings CSV from rank")->required();
  eval_cmd->add_option("--candidates", eval.candidates, "candidates CSV (path statistics for curves)");
  eval_cmd->add_option("--history", eval.history, "link presence intervals")->required();
  eval_cmd->add_option("--creation", eval.creation, "article creation times")->required();
  eval_cmd->add_option("--alpha", eval.alpha, "link-rate threshold (exclusive)")->check(CLI::Range(0.0, 1.0));
  eval_cmd->add_option("--max-k", eval.max_k, "K; targets with fewer candidates are ineligible");
  eval_cmd->add_option("--label-mode", eval.label_mode, "standard | strict")
      ->check(CLI::IsMember({"standard", "strict"}));
  eval_cmd->add_option("--static-snapshot-time", eval.static_snapshot_time, "date of the static game snapshot");
  eval_cmd->add_option("--static-links", eval.static_links, "links of the static game snapshot");
  eval_cmd->add_option("--volume-grid", eval.volume_grid, "suggestion counts for the volume curve (default: all)");
  eval_cmd->add_option("--out", eval.out, "output directory")->required();

  AnalyzeOptions analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "position buckets and mention statistics along paths");
  analyze_cmd->add_option("--paths", analyze.paths, "normalized paths.tsv")->required();
  analyze_cmd->add_option("--history", analyze.history, "link presence intervals");
  analyze_cmd->add_option("--creation", analyze.creation, "article creation times");
  analyze_cmd->add_option("--alphas", analyze.alphas, "link-rate thresholds for the bucket table");
  analyze_cmd->add_option("--alpha", analyze.alpha, "threshold for automatic labels of human-rated pairs");
  analyze_cmd->add_option("--candidates", analyze.candidates, "candidates CSV for the false-negative histogram");
  analyze_cmd->add_option("--human-labels", analyze.human_labels, "CSV source,target,n_positive,n_raters");
  analyze_cmd->add_option("--bins", analyze.bins, "histogram bins")->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--out", analyze.out, "output directory")->required();

  SynthConfig synth;
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic world with planted missing links");
  synth_cmd->add_option("--n-articles", synth.n_articles);
  synth_cmd->add_option("--dimension", synth.dimension, "latent sphere dimension");
  synth_cmd->add_option("--link-density", synth.link_density);
  synth_cmd->add_option("--rho", synth.removal_fraction, "fraction of links removed before the snapshot");
  synth_cmd->add_option("--epsilon", synth.epsilon, "navigator's random-click probability");
  synth_cmd->add_option("--n-paths", synth.n_paths);
  synth_cmd->add_option("--max-length", synth.max_path_length, "clicks before a navigator gives up");
  synth_cmd->add_option("--n-targets", synth.n_targets);
  synth_cmd->add_option("--alpha", synth.alpha, "threshold the planted link rates must exceed");
  synth_cmd->add_option("--out", synth_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error=invalid_argument message=" << e.what() << '\n';
    return exit_status(ErrorCode::invalid_argument);
  }

  const CLI::App* chosen = app.get_subcommands().front();
  Inputs inputs{common, {}};
  inputs.metadata.version = kVersion;
  inputs.metadata.command = chosen->get_name();
  inputs.metadata.config = echo_config(app, *chosen);

  try {
    if (chosen == ingest_cmd) run_ingest(inputs, ingest);
    else if (chosen == mine_cmd) run_mine(inputs, mine);
    else if (chosen == rank_cmd) run_rank(inputs, rank);
    else if (chosen == eval_cmd) run_eval(inputs, eval);
    else if (chosen == analyze_cmd) run_analyze(inputs, analyze);
    else run_synth(inputs, synth, synth_out);
  } catch (const Error& e) {
    std::string message = e.what();
    std::replace(message.begin(), message.end(), '\n', ' ');
    std::cerr << "error=" << error_code_name(e.code()) << " message=" << message << '\n';
    return exit_status(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error=internal message=" << e.what() << '\n';
    return 1;
  }
  return 0;
}
