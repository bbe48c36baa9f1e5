// fcsnet: feature co-selection network pipeline over case-control genotype
// data. Stages communicate through TSV/JSON files; every stage is seeded and
// byte-reproducible.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "fcsnet/pipeline.hpp"

namespace {

using namespace fcsnet;

int cmd_synth(double heritability, double maf, std::size_t cases, std::size_t controls,
              std::size_t features, std::uint64_t seed, const std::string& out) {
  if (features < 3) throw ValidationError("need at least 3 features (2 functional + noise)");
  const PenetranceModel model = make_xor_model(heritability, maf);
  SynthConfig config;
  config.n_cases = cases;
  config.n_controls = controls;
  config.n_noise_features = features - 2;
  config.seed = seed;
  const SynthResult result = generate(model, config);
  save_dataset(result.dataset, out);

  json sidecar = {{"penetrance", model.penetrance},
                  {"maf", {model.maf_a, model.maf_b}},
                  {"heritability", result.heritability},
                  {"prevalence", result.prevalence},
                  {"functional_positions",
                   {result.functional_positions.first, result.functional_positions.second}},
                  {"functional_ids",
                   {result.dataset.feature_ids()[result.functional_positions.first],
                    result.dataset.feature_ids()[result.functional_positions.second]}},
                  {"proposals_used", result.proposals_used},
                  {"seed", seed}};
  write_text_file(out + ".model.json", sidecar.dump(2) + "\n");
  write_provenance(out, "synth", seed, sidecar, {});
  std::cout << "wrote " << result.dataset.n_samples() << " samples x "
            << result.dataset.n_features() << " features to " << out << "\n";
  return 0;
}

int cmd_select(const std::string& data_path, const std::string& fitness, int n_runs,
               const std::string& config_path, const std::string& out, std::uint64_t seed,
               int threads) {
  const GenotypeDataset data = load_dataset(data_path);
  PipelineConfig config =
      config_path.empty() ? PipelineConfig{} : load_pipeline_config(config_path);
  config.ga.fitness_model = config.ml;
  config.ga.fitness_model.kind = parse_model_kind(fitness);
  config.ga.seed = derive_seed(seed, hash_string("select"));
  config.ga.validate();

  const auto results = run_batch(data, config.ga, n_runs, resolve_threads(threads));

  std::vector<SubsetRecord> records;
  records.reserve(results.size());
  for (const auto& r : results) {
    SubsetRecord rec;
    rec.seed = r.seed;
    rec.best_fitness = r.best_fitness;
    for (std::size_t f : r.best_subset) rec.feature_ids.push_back(data.feature_ids()[f]);
    rec.generations = r.generations_executed;
    rec.evaluations = r.evaluations_count;
    records.push_back(std::move(rec));
  }
  write_subsets_jsonl(out, records);
  write_provenance(out, "select", seed, pipeline_config_to_json(config), {data_path});
  std::cout << "wrote " << records.size() << " run records to " << out << "\n";
  return 0;
}

std::vector<std::size_t> parse_int_range(const std::string& s) {
  // "a..b" inclusive, or a single value
  const auto dots = s.find("..");
  if (dots == std::string::npos) return {std::stoull(s)};
  const std::size_t lo = std::stoull(s.substr(0, dots));
  const std::size_t hi = std::stoull(s.substr(dots + 2));
  if (hi < lo) throw ValidationError("bad range: " + s);
  std::vector<std::size_t> out;
  for (std::size_t v = lo; v <= hi; ++v) out.push_back(v);
  return out;
}

std::vector<double> parse_real_grid(const std::string& s) {
  // "a..b:step", "a..b" (step 0.01), or a single value
  const auto dots = s.find("..");
  if (dots == std::string::npos) return {std::stod(s)};
  const double lo = std::stod(s.substr(0, dots));
  std::string rest = s.substr(dots + 2);
  double step = 0.01;
  if (const auto colon = rest.find(':'); colon != std::string::npos) {
    step = std::stod(rest.substr(colon + 1));
    rest = rest.substr(0, colon);
  }
  const double hi = std::stod(rest);
  if (!(step > 0.0) || hi < lo) throw ValidationError("bad grid: " + s);
  std::vector<double> out;
  for (int i = 0;; ++i) {
    const double v = lo + step * i;
    if (v > hi + 1e-12) break;
    out.push_back(v);
  }
  return out;
}

int cmd_network(const std::string& subsets_path, std::size_t tau_occ, double tau_cos,
                const std::string& out_edges, const std::string& out_communities,
                const std::string& sweep_occ, const std::string& sweep_cos,
                const std::string& sweep_out, const std::string& lists_dir) {
  const auto records = read_subsets_jsonl(subsets_path);

  // feature universe: ids in first-appearance order across records
  std::vector<std::string> feature_ids;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& r : records)
    for (const auto& id : r.feature_ids)
      if (index.emplace(id, feature_ids.size()).second) feature_ids.push_back(id);

  std::vector<std::vector<std::size_t>> subsets;
  subsets.reserve(records.size());
  for (const auto& r : records) {
    std::vector<std::size_t> row;
    for (const auto& id : r.feature_ids) row.push_back(index.at(id));
    subsets.push_back(std::move(row));
  }
  const SelectionMatrix m = build_selection_matrix(subsets, feature_ids);

  if (!sweep_out.empty()) {
    const auto occ_grid = parse_int_range(sweep_occ.empty() ? "1..10" : sweep_occ);
    const auto cos_grid = parse_real_grid(sweep_cos.empty() ? "0.0..0.2:0.01" : sweep_cos);
    write_sweep_tsv(sweep_out, threshold_sweep(m, occ_grid, cos_grid));
    std::cout << "wrote sweep table (" << occ_grid.size() * cos_grid.size() << " cells) to "
              << sweep_out << "\n";
  }

  const CoSelectionGraph graph = build_graph(m, tau_occ, tau_cos);
  if (!out_edges.empty()) {
    write_edges_tsv(out_edges, graph, feature_ids);
    write_provenance(out_edges, "network", 0, {{"tau_occ", tau_occ}, {"tau_cos", tau_cos}},
                     {subsets_path});
  }
  std::cout << "graph: " << graph.nodes.size() << " nodes, " << graph.edges.size() << " edges\n";

  if (graph.nodes.empty()) {
    std::cout << "no edges survive the thresholds; skipping community detection\n";
    return 0;
  }
  const CommunityPartition part = greedy_communities(graph);
  std::cout << "communities: " << part.n_communities << ", modularity "
            << format_double(part.modularity) << "\n";

  CommunitiesFile file;
  file.modularity = part.modularity;
  file.tau_occ = tau_occ;
  file.tau_cos = tau_cos;
  file.communities.resize(part.n_communities);
  for (std::size_t c = 0; c < part.n_communities; ++c) file.communities[c].id = c;
  for (std::size_t pos = 0; pos < graph.nodes.size(); ++pos)
    file.communities[part.assignment[pos]].feature_ids.push_back(feature_ids[graph.nodes[pos]]);
  if (!out_communities.empty()) {
    write_communities_json(out_communities, file);
    write_provenance(out_communities, "network", 0,
                     {{"tau_occ", tau_occ}, {"tau_cos", tau_cos}}, {subsets_path});
  }

  if (!lists_dir.empty()) {
    std::filesystem::create_directories(lists_dir);
    for (const auto& c : file.communities) {
      std::string content;
      for (const auto& id : c.feature_ids) content += id + "\n";
      write_text_file(lists_dir + "/community_" + std::to_string(c.id + 1) + ".txt", content);
    }
    std::cout << "wrote " << file.communities.size() << " feature-list files to " << lists_dir
              << "\n";
  }
  return 0;
}

int cmd_crs(const std::string& train_path, const std::string& target_path,
            const std::string& communities_path, const std::string& model, int resamples,
            double fraction, std::size_t min_size, std::uint64_t seed, const std::string& out,
            int threads) {
  const GenotypeDataset train = load_dataset(train_path);
  const GenotypeDataset target = load_dataset(target_path);
  const CommunitiesFile communities = read_communities_json(communities_path);

  ModelSpec spec;
  spec.kind = parse_model_kind(model);
  CRSConfig config;
  config.n_resamples = resamples;
  config.sample_fraction = fraction;
  config.min_community_size = min_size;
  config.seed = derive_seed(seed, hash_string("crs"));

  const CRSMatrix matrix = compute_crs(train, target, communities.communities, spec, config,
                                       resolve_threads(threads));
  const auto& labels = target.labels();
  write_crs_tsv(out, matrix, target.sample_ids(), &labels);
  write_provenance(out, "crs", seed,
                   {{"model", model},
                    {"resamples", resamples},
                    {"fraction", fraction},
                    {"min_size", min_size}},
                   {train_path, target_path, communities_path});
  std::cout << "wrote CRS matrix (" << matrix.scores.rows << " x " << matrix.scores.cols
            << " communities) to " << out << "\n";
  if (!matrix.excluded_ids.empty()) {
    std::cout << "excluded communities below min size " << min_size << ":";
    for (auto id : matrix.excluded_ids) std::cout << ' ' << id;
    std::cout << "\n";
  }
  return 0;
}

int cmd_crs_eval(const std::string& crs_path, const std::string& out) {
  const CrsFile file = read_crs_tsv(crs_path);
  if (!file.labels)
    throw ValidationError("CRS file has no label column; re-run `fcsnet crs` on a labelled "
                          "target dataset");
  CRSMatrix matrix;
  matrix.scores = file.scores;
  matrix.community_labels = file.columns;
  const auto evals = evaluate_crs(matrix, *file.labels);

  std::ostringstream table;
  table << "community\tauc\tt\tp\n";
  for (const auto& e : evals)
    table << e.label << '\t' << format_double(e.auc) << '\t' << format_double(e.t) << '\t'
          << format_double(e.p) << '\n';
  write_text_file(out, table.str());
  write_provenance(out, "crs-eval", 0, json::object(), {crs_path});
  std::cout << "wrote per-community evaluation (" << evals.size() << " rows) to " << out << "\n";
  return 0;
}

int cmd_subtype(const std::string& crs_path, bool cases_only, std::size_t k,
                const std::string& out, const std::string& summary_out,
                const std::string& dendrogram_out, const std::string& elbow_out) {
  const CrsFile file = read_crs_tsv(crs_path);

  std::vector<std::size_t> rows;
  if (cases_only) {
    if (!file.labels)
      throw ValidationError("--cases-only requires a label column in the CRS file");
    for (std::size_t i = 0; i < file.sample_ids.size(); ++i)
      if ((*file.labels)[i] == 1) rows.push_back(i);
  } else {
    rows.resize(file.sample_ids.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
  }
  if (rows.size() < 2) throw ValidationError("fewer than 2 individuals to cluster");

  Matrix points(rows.size(), file.columns.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < file.columns.size(); ++c)
      points.at(r, c) = file.scores.at(rows[r], c);

  const Dendrogram tree = ward_dendrogram(points);
  const auto assignment = cut_tree(tree, k);

  std::ostringstream clusters;
  clusters << "sample_id\tcluster\n";
  for (std::size_t r = 0; r < rows.size(); ++r)
    clusters << file.sample_ids[rows[r]] << '\t' << assignment[r] + 1 << '\n';
  write_text_file(out, clusters.str());
  write_provenance(out, "subtype", 0, {{"k", k}, {"cases_only", cases_only}}, {crs_path});

  if (!summary_out.empty()) {
    const auto stats = summarize_clusters(points, assignment);
    std::ostringstream summary;
    summary << "cluster\tsize\tcrs\tmean\tmedian\tq1\tq3\n";
    for (const auto& s : stats)
      for (std::size_t d = 0; d < file.columns.size(); ++d)
        summary << s.cluster + 1 << '\t' << s.size << '\t' << file.columns[d] << '\t'
                << format_double(s.mean[d]) << '\t' << format_double(s.median[d]) << '\t'
                << format_double(s.q1[d]) << '\t' << format_double(s.q3[d]) << '\n';
    write_text_file(summary_out, summary.str());
  }

  if (!dendrogram_out.empty()) {
    std::ostringstream dendro;
    dendro << "left\tright\theight\tsize\n";
    for (const auto& m : tree.merges)
      dendro << m.left << '\t' << m.right << '\t' << format_double(m.height) << '\t' << m.size
             << '\n';
    write_text_file(dendrogram_out, dendro.str());
  }

  // within-cluster variance for k = 2..10 to guide the choice of k
  std::ostringstream elbow;
  elbow << "k\twithin_cluster_ss\n";
  for (std::size_t kk = 2; kk <= std::min<std::size_t>(10, rows.size()); ++kk)
    elbow << kk << '\t' << format_double(within_cluster_ss(points, cut_tree(tree, kk))) << '\n';
  if (!elbow_out.empty())
    write_text_file(elbow_out, elbow.str());
  else
    std::cout << elbow.str();

  std::cout << "clustered " << rows.size() << " individuals into " << k << " subtypes -> " << out
            << "\n";
  return 0;
}

int cmd_overfit(const std::string& data_path, const std::string& config_path,
                const std::string& fitness, const std::string& crs_model, int n_runs,
                double test_fraction, std::size_t tau_occ, double tau_cos, std::uint64_t seed,
                const std::string& out, int threads) {
  const GenotypeDataset data = load_dataset(data_path);
  PipelineConfig config =
      config_path.empty() ? PipelineConfig{} : load_pipeline_config(config_path);

  OverfitOptions options;
  options.test_fraction = test_fraction;
  options.n_runs = n_runs;
  options.ga = config.ga;
  options.ga.fitness_model = config.ml;
  options.ga.fitness_model.kind = parse_model_kind(fitness);
  options.crs_model = config.ml;
  options.crs_model.kind = parse_model_kind(crs_model);
  options.crs = config.crs;
  options.network.tau_occ = tau_occ;
  options.network.tau_cos = tau_cos;
  options.seed = seed;
  options.n_threads = threads;

  const json report = overfit_analysis(data, options);
  write_text_file(out, report.dump(2) + "\n");
  write_provenance(out, "overfit", seed, pipeline_config_to_json(config), {data_path});

  std::cout << "train " << report.at("n_train").get<std::size_t>() << " / test "
            << report.at("n_test").get<std::size_t>() << " samples\n";
  if (report.contains("n_communities"))
    std::cout << report.at("n_communities").get<std::size_t>() << " communities, "
              << report.at("communities").size() << " evaluated\n";
  for (const auto& c : report.at("communities"))
    std::cout << "  " << c.at("label").get<std::string>() << " (size "
              << c.at("size").get<std::size_t>() << "): auc " << c.at("auc").get<double>()
              << ", p " << c.at("p").get<double>() << "\n";
  std::cout << "report -> " << out << "\n";
  return 0;
}

int cmd_repro_sim(const std::string& scale, std::uint64_t seed, const std::string& fitness,
                  const std::string& out, int threads) {
  ReproSimOptions options;
  if (scale == "desk")
    options.scale = SimScale::desk;
  else if (scale == "paper")
    options.scale = SimScale::paper;
  else
    throw ValidationError("scale must be 'desk' or 'paper'");
  options.seed = seed;
  options.n_threads = threads;
  options.only_fitness = fitness;

  const json report = repro_sim(options);
  if (!out.empty()) {
    write_text_file(out, report.dump(2) + "\n");
    write_provenance(out, "repro-sim", seed, {{"scale", scale}}, {});
  }
  std::cout << repro_sim_summary(report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"feature co-selection network pipeline for case-control genotype data"};
  app.require_subcommand(1);
  app.fallthrough();  // --threads may follow the subcommand
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = all cores)")->capture_default_str();

  // synth
  auto* synth = app.add_subcommand("synth", "generate a pure-epistasis benchmark dataset");
  double heritability = 0.4, maf = 0.5;
  std::size_t cases = 400, controls = 400, features = 100;
  std::uint64_t seed = 0;
  std::string out;
  synth->add_option("--heritability", heritability, "target broad-sense heritability")
      ->capture_default_str();
  synth->add_option("--maf", maf, "minor allele frequency of the functional loci")
      ->capture_default_str();
  synth->add_option("--cases", cases, "number of cases")->capture_default_str();
  synth->add_option("--controls", controls, "number of controls")->capture_default_str();
  synth->add_option("--features", features, "total feature count incl. the functional pair")
      ->capture_default_str();
  synth->add_option("--seed", seed, "RNG seed")->capture_default_str();
  synth->add_option("--out", out, "output dataset TSV")->required();

  // select
  auto* select = app.add_subcommand("select", "repeated GA feature selection");
  std::string data_path, fitness = "dt", config_path;
  int n_runs = 10;
  select->add_option("--data", data_path, "dataset TSV")->required();
  select->add_option("--fitness", fitness, "fitness model: lr or dt")->capture_default_str();
  select->add_option("--runs", n_runs, "independent GA runs")->capture_default_str();
  select->add_option("--config", config_path, "pipeline config JSON");
  select->add_option("--seed", seed, "base seed; run i uses a derived seed + i")
      ->capture_default_str();
  select->add_option("--out", out, "output subsets JSONL")->required();

  // network
  auto* network = app.add_subcommand("network", "build and partition the co-selection graph");
  std::string subsets_path, communities_out, sweep_occ, sweep_cos, sweep_out, lists_dir;
  std::size_t tau_occ = 5;
  double tau_cos = 0.09;
  network->add_option("--subsets", subsets_path, "subsets JSONL from `select`")->required();
  network->add_option("--tau-occ", tau_occ, "co-occurrence edge threshold")->capture_default_str();
  network->add_option("--tau-cos", tau_cos, "cosine similarity edge threshold")
      ->capture_default_str();
  network->add_option("--out", out, "edge list TSV");
  network->add_option("--communities", communities_out, "communities JSON");
  network->add_option("--sweep-occ", sweep_occ, "occ grid, e.g. 1..10");
  network->add_option("--sweep-cos", sweep_cos, "cosine grid, e.g. 0.00..0.20:0.01");
  network->add_option("--sweep-out", sweep_out, "threshold sweep TSV");
  network->add_option("--community-lists", lists_dir,
                      "directory for per-community feature-id list files");

  // crs
  auto* crs = app.add_subcommand("crs", "community risk scores on a target cohort");
  std::string train_path, target_path, communities_path, model = "dt";
  int resamples = 1000;
  double fraction = 0.8;
  std::size_t min_size = 3;
  crs->add_option("--train", train_path, "training dataset TSV")->required();
  crs->add_option("--target", target_path, "target dataset TSV (scored cohort)")->required();
  crs->add_option("--communities", communities_path, "communities JSON")->required();
  crs->add_option("--model", model, "lr, dt, or rf")->capture_default_str();
  crs->add_option("--resamples", resamples, "resampling runs per community")
      ->capture_default_str();
  crs->add_option("--fraction", fraction, "training fraction per resample")
      ->capture_default_str();
  crs->add_option("--min-size", min_size, "minimum community size")->capture_default_str();
  crs->add_option("--seed", seed, "RNG seed")->capture_default_str();
  crs->add_option("--out", out, "output CRS TSV")->required();

  // crs-eval
  auto* crs_eval = app.add_subcommand("crs-eval", "per-community AUC and t-test");
  std::string crs_path;
  crs_eval->add_option("--crs", crs_path, "CRS TSV with label column")->required();
  crs_eval->add_option("--out", out, "output evaluation TSV")->required();

  // subtype
  auto* subtype = app.add_subcommand("subtype", "hierarchical clustering in CRS space");
  bool cases_only = false;
  std::size_t k = 4;
  std::string summary_out, dendrogram_out, elbow_out;
  subtype->add_option("--crs", crs_path, "CRS TSV")->required();
  subtype->add_flag("--cases-only", cases_only, "cluster diseased individuals only");
  subtype->add_option("--k", k, "number of subtypes")->capture_default_str();
  subtype->add_option("--out", out, "cluster assignment TSV")->required();
  subtype->add_option("--summary", summary_out, "per-cluster per-CRS summary TSV");
  subtype->add_option("--dendrogram", dendrogram_out, "merge list TSV");
  subtype->add_option("--elbow", elbow_out, "within-cluster variance per k TSV");

  // overfit
  auto* overfit = app.add_subcommand("overfit", "holdout overfitting analysis");
  std::string crs_model = "dt";
  double test_fraction = 0.2;
  std::size_t of_tau_occ = 2;
  double of_tau_cos = 0.0;
  overfit->add_option("--data", data_path, "dataset TSV")->required();
  overfit->add_option("--config", config_path, "pipeline config JSON");
  overfit->add_option("--fitness", fitness, "GA fitness model: lr or dt")->capture_default_str();
  overfit->add_option("--crs-model", crs_model, "CRS model: lr, dt, or rf")
      ->capture_default_str();
  overfit->add_option("--runs", n_runs, "GA runs on the training side")->capture_default_str();
  overfit->add_option("--test-fraction", test_fraction, "holdout fraction")
      ->capture_default_str();
  overfit->add_option("--tau-occ", of_tau_occ, "co-occurrence threshold")->capture_default_str();
  overfit->add_option("--tau-cos", of_tau_cos, "cosine threshold")->capture_default_str();
  overfit->add_option("--seed", seed, "RNG seed")->capture_default_str();
  overfit->add_option("--out", out, "report JSON")->required();

  // repro-sim
  auto* repro = app.add_subcommand("repro-sim", "rerun the planted-epistasis simulation study");
  std::string scale = "desk", only_fitness;
  repro->add_option("--scale", scale, "desk or paper")->capture_default_str();
  repro->add_option("--seed", seed, "RNG seed")->capture_default_str();
  repro->add_option("--fitness", only_fitness, "restrict to one fitness kind (lr or dt)");
  repro->add_option("--out", out, "report JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed())
      return cmd_synth(heritability, maf, cases, controls, features, seed, out);
    if (select->parsed())
      return cmd_select(data_path, fitness, n_runs, config_path, out, seed, threads);
    if (network->parsed())
      return cmd_network(subsets_path, tau_occ, tau_cos, out, communities_out, sweep_occ,
                         sweep_cos, sweep_out, lists_dir);
    if (crs->parsed())
      return cmd_crs(train_path, target_path, communities_path, model, resamples, fraction,
                     min_size, seed, out, threads);
    if (crs_eval->parsed()) return cmd_crs_eval(crs_path, out);
    if (subtype->parsed())
      return cmd_subtype(crs_path, cases_only, k, out, summary_out, dendrogram_out, elbow_out);
    if (overfit->parsed())
      return cmd_overfit(data_path, config_path, fitness, crs_model, n_runs, test_fraction,
                         of_tau_occ, of_tau_cos, seed, out, threads);
    if (repro->parsed()) return cmd_repro_sim(scale, seed, only_fitness, out, threads);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
