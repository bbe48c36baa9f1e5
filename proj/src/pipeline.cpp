#include "fcsnet/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace fcsnet {

namespace {

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& context) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* a) { return key == a; }) == allowed.end())
      throw ValidationError("unknown key '" + key + "' in " + context + " config");
  }
}

}  // namespace

PipelineConfig parse_pipeline_config(const json& doc) {
  PipelineConfig config;
  check_keys(doc, {"ga", "ml", "network", "crs", "seed"}, "top-level");
  if (doc.contains("seed")) config.seed = doc.at("seed").get<std::uint64_t>();

  if (doc.contains("ga")) {
    const json& g = doc.at("ga");
    check_keys(g,
               {"pop_size", "ngen", "tour_size", "cxpb", "mutpb", "size_limit", "per_bit_rate",
                "elitism_count", "cv_folds"},
               "ga");
    if (g.contains("pop_size")) config.ga.pop_size = g.at("pop_size").get<int>();
    if (g.contains("ngen")) config.ga.ngen = g.at("ngen").get<int>();
    if (g.contains("tour_size")) config.ga.tour_size = g.at("tour_size").get<int>();
    if (g.contains("cxpb")) config.ga.cxpb = g.at("cxpb").get<double>();
    if (g.contains("mutpb")) config.ga.mutpb = g.at("mutpb").get<double>();
    if (g.contains("size_limit")) config.ga.size_limit = g.at("size_limit").get<int>();
    if (g.contains("per_bit_rate")) config.ga.per_bit_rate = g.at("per_bit_rate").get<double>();
    if (g.contains("elitism_count")) config.ga.elitism_count = g.at("elitism_count").get<int>();
    if (g.contains("cv_folds")) config.ga.cv_folds = g.at("cv_folds").get<int>();
  }

  if (doc.contains("ml")) {
    const json& m = doc.at("ml");
    check_keys(m, {"lr", "tree", "forest"}, "ml");
    if (m.contains("lr")) {
      const json& lr = m.at("lr");
      check_keys(lr, {"l2_penalty", "max_iterations", "convergence_tol"}, "ml.lr");
      if (lr.contains("l2_penalty")) config.ml.lr.l2_penalty = lr.at("l2_penalty").get<double>();
      if (lr.contains("max_iterations"))
        config.ml.lr.max_iterations = lr.at("max_iterations").get<int>();
      if (lr.contains("convergence_tol"))
        config.ml.lr.convergence_tol = lr.at("convergence_tol").get<double>();
    }
    if (m.contains("tree")) {
      const json& t = m.at("tree");
      check_keys(t, {"max_depth", "min_samples_leaf"}, "ml.tree");
      if (t.contains("max_depth")) config.ml.tree.max_depth = t.at("max_depth").get<int>();
      if (t.contains("min_samples_leaf"))
        config.ml.tree.min_samples_leaf = t.at("min_samples_leaf").get<int>();
    }
    if (m.contains("forest")) {
      const json& f = m.at("forest");
      check_keys(f, {"n_trees", "bootstrap", "feature_subsample", "max_depth",
                     "min_samples_leaf"},
                 "ml.forest");
      if (f.contains("n_trees")) config.ml.forest.n_trees = f.at("n_trees").get<int>();
      if (f.contains("bootstrap")) config.ml.forest.bootstrap = f.at("bootstrap").get<bool>();
      if (f.contains("max_depth"))
        config.ml.forest.tree.max_depth = f.at("max_depth").get<int>();
      if (f.contains("min_samples_leaf"))
        config.ml.forest.tree.min_samples_leaf = f.at("min_samples_leaf").get<int>();
      if (f.contains("feature_subsample")) {
        const std::string mode = f.at("feature_subsample").get<std::string>();
        if (mode == "sqrt")
          config.ml.forest.subsample = FeatureSubsample::sqrt;
        else if (mode == "all")
          config.ml.forest.subsample = FeatureSubsample::all;
        else
          throw ValidationError("feature_subsample must be 'sqrt' or 'all'");
      }
    }
  }

  if (doc.contains("network")) {
    const json& n = doc.at("network");
    check_keys(n, {"tau_occ", "tau_cos"}, "network");
    if (n.contains("tau_occ")) config.network.tau_occ = n.at("tau_occ").get<std::size_t>();
    if (n.contains("tau_cos")) config.network.tau_cos = n.at("tau_cos").get<double>();
  }

  if (doc.contains("crs")) {
    const json& c = doc.at("crs");
    check_keys(c, {"n_resamples", "sample_fraction", "min_community_size"}, "crs");
    if (c.contains("n_resamples")) config.crs.n_resamples = c.at("n_resamples").get<int>();
    if (c.contains("sample_fraction"))
      config.crs.sample_fraction = c.at("sample_fraction").get<double>();
    if (c.contains("min_community_size"))
      config.crs.min_community_size = c.at("min_community_size").get<std::size_t>();
  }

  config.ga.fitness_model = config.ml;
  config.ga.validate();
  config.crs.validate();
  return config;
}

PipelineConfig load_pipeline_config(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw ValidationError("config file " + path + " is not valid JSON: " + e.what());
  }
  return parse_pipeline_config(doc);
}

json pipeline_config_to_json(const PipelineConfig& config) {
  json doc;
  doc["seed"] = config.seed;
  doc["ga"] = {{"pop_size", config.ga.pop_size},       {"ngen", config.ga.ngen},
               {"tour_size", config.ga.tour_size},     {"cxpb", config.ga.cxpb},
               {"mutpb", config.ga.mutpb},             {"size_limit", config.ga.size_limit},
               {"per_bit_rate", config.ga.per_bit_rate},
               {"elitism_count", config.ga.elitism_count},
               {"cv_folds", config.ga.cv_folds}};
  doc["ml"] = {{"lr",
                {{"l2_penalty", config.ml.lr.l2_penalty},
                 {"max_iterations", config.ml.lr.max_iterations},
                 {"convergence_tol", config.ml.lr.convergence_tol}}},
               {"tree",
                {{"max_depth", config.ml.tree.max_depth},
                 {"min_samples_leaf", config.ml.tree.min_samples_leaf}}},
               {"forest",
                {{"n_trees", config.ml.forest.n_trees},
                 {"bootstrap", config.ml.forest.bootstrap},
                 {"max_depth", config.ml.forest.tree.max_depth},
                 {"min_samples_leaf", config.ml.forest.tree.min_samples_leaf},
                 {"feature_subsample",
                  config.ml.forest.subsample == FeatureSubsample::sqrt ? "sqrt" : "all"}}}};
  doc["network"] = {{"tau_occ", config.network.tau_occ}, {"tau_cos", config.network.tau_cos}};
  doc["crs"] = {{"n_resamples", config.crs.n_resamples},
                {"sample_fraction", config.crs.sample_fraction},
                {"min_community_size", config.crs.min_community_size}};
  return doc;
}

// ---------------------------------------------------------------------------
// Artifact files.
// ---------------------------------------------------------------------------

void write_subsets_jsonl(const std::string& path, const std::vector<SubsetRecord>& records) {
  std::ostringstream out;
  for (const auto& r : records) {
    json line = {{"seed", r.seed},
                 {"best_fitness", r.best_fitness},
                 {"feature_ids", r.feature_ids},
                 {"generations", r.generations},
                 {"evaluations", r.evaluations}};
    out << line.dump() << '\n';
  }
  write_text_file(path, out.str());
}

std::vector<SubsetRecord> read_subsets_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open subsets file: " + path);
  std::vector<SubsetRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ValidationError("bad JSON at " + path + ":" + std::to_string(line_no) + ": " +
                            e.what());
    }
    SubsetRecord r;
    r.seed = doc.at("seed").get<std::uint64_t>();
    r.best_fitness = doc.at("best_fitness").get<double>();
    r.feature_ids = doc.at("feature_ids").get<std::vector<std::string>>();
    r.generations = doc.value("generations", 0);
    r.evaluations = doc.value("evaluations", std::size_t{0});
    records.push_back(std::move(r));
  }
  if (records.empty()) throw ValidationError("subsets file is empty: " + path);
  return records;
}

void write_communities_json(const std::string& path, const CommunitiesFile& file) {
  json communities = json::object();
  for (const auto& c : file.communities)
    communities[std::to_string(c.id)] = c.feature_ids;
  json doc = {{"communities", communities},
              {"modularity", file.modularity},
              {"thresholds", {{"tau_occ", file.tau_occ}, {"tau_cos", file.tau_cos}}}};
  write_text_file(path, doc.dump(2) + "\n");
}

CommunitiesFile read_communities_json(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw ValidationError("communities file " + path + " is not valid JSON: " + e.what());
  }
  CommunitiesFile file;
  file.modularity = doc.value("modularity", 0.0);
  if (doc.contains("thresholds")) {
    file.tau_occ = doc.at("thresholds").value("tau_occ", std::size_t{1});
    file.tau_cos = doc.at("thresholds").value("tau_cos", 0.0);
  }
  for (const auto& [key, ids] : doc.at("communities").items()) {
    Community c;
    c.id = std::stoull(key);
    c.feature_ids = ids.get<std::vector<std::string>>();
    file.communities.push_back(std::move(c));
  }
  std::sort(file.communities.begin(), file.communities.end(),
            [](const Community& a, const Community& b) { return a.id < b.id; });
  if (file.communities.empty()) throw ValidationError("communities file has no communities");
  return file;
}

void write_crs_tsv(const std::string& path, const CRSMatrix& matrix,
                   const std::vector<std::string>& sample_ids,
                   const std::vector<std::uint8_t>* labels) {
  if (sample_ids.size() != matrix.scores.rows)
    throw ValidationError("sample id count does not match CRS rows");
  std::ostringstream out;
  out << "sample_id";
  for (const auto& c : matrix.community_labels) out << '\t' << c;
  if (labels) out << "\tlabel";
  out << '\n';
  for (std::size_t i = 0; i < matrix.scores.rows; ++i) {
    out << sample_ids[i];
    for (std::size_t c = 0; c < matrix.scores.cols; ++c)
      out << '\t' << format_double(matrix.scores.at(i, c));
    if (labels) out << '\t' << static_cast<int>((*labels)[i]);
    out << '\n';
  }
  write_text_file(path, out.str());
}

CrsFile read_crs_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open CRS file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty CRS file: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::vector<std::string> header;
  std::istringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, '\t')) header.push_back(cell);
  if (header.empty() || header[0] != "sample_id")
    throw ValidationError("CRS header must start with sample_id");
  const bool has_label = header.back() == "label";

  CrsFile file;
  file.columns.assign(header.begin() + 1, header.end() - (has_label ? 1 : 0));
  if (file.columns.empty()) throw ValidationError("CRS file has no score columns");
  if (has_label) file.labels.emplace();

  std::vector<double> values;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::vector<std::string> cells;
    while (std::getline(ls, cell, '\t')) cells.push_back(cell);
    if (cells.size() != header.size())
      throw ValidationError("ragged CRS row at line " + std::to_string(line_no));
    file.sample_ids.push_back(cells[0]);
    for (std::size_t c = 0; c < file.columns.size(); ++c) {
      const std::string& s = cells[c + 1];
      double v = 0.0;
      auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ValidationError("bad CRS value '" + s + "' at line " + std::to_string(line_no));
      values.push_back(v);
    }
    if (has_label) {
      const std::string& s = cells.back();
      if (s == "0")
        file.labels->push_back(0);
      else if (s == "1")
        file.labels->push_back(1);
      else
        throw ValidationError("bad label '" + s + "' at line " + std::to_string(line_no));
    }
  }
  if (file.sample_ids.empty()) throw ValidationError("CRS file has no rows: " + path);
  file.scores = Matrix(file.sample_ids.size(), file.columns.size());
  file.scores.data = std::move(values);
  return file;
}

void write_edges_tsv(const std::string& path, const CoSelectionGraph& graph,
                     const std::vector<std::string>& feature_ids) {
  std::ostringstream out;
  out << "u\tv\tocc\tcosine\n";
  for (const auto& e : graph.edges)
    out << feature_ids[e.u] << '\t' << feature_ids[e.v] << '\t' << e.occ_count << '\t'
        << format_double(e.cosine) << '\n';
  write_text_file(path, out.str());
}

void write_sweep_tsv(const std::string& path, const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "tau_occ\ttau_cos\tn_nodes\tn_edges\tn_components\tn_communities\tmodularity\n";
  for (const auto& r : rows)
    out << r.tau_occ << '\t' << format_double(r.tau_cos) << '\t' << r.n_nodes << '\t' << r.n_edges
        << '\t' << r.n_components << '\t' << r.n_communities << '\t'
        << format_double(r.modularity) << '\n';
  write_text_file(path, out.str());
}

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

void write_provenance(const std::string& artifact_path, const std::string& command,
                      std::uint64_t seed, const json& config,
                      const std::vector<std::string>& input_paths) {
  json inputs = json::object();
  for (const auto& p : input_paths) inputs[p] = hex64(fnv1a64_file(p));
  json doc = {{"tool", "fcsnet"},
              {"version", kVersion},
              {"command", command},
              {"seed", seed},
              {"config_hash", hex64(hash_string(config.dump()))},
              {"inputs", inputs}};
  write_text_file(artifact_path + ".prov.json", doc.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Simulation study.
// ---------------------------------------------------------------------------

namespace {

struct PairStats {
  std::size_t cooccurrence = 0;
  double cosine = 0.0;
  std::size_t rank_by_cosine = 0;  // competition rank among pairs with occ >= 2; 0 = absent
  std::size_t n_ranked_pairs = 0;
};

PairStats functional_pair_stats(const SelectionMatrix& m, std::size_t fa, std::size_t fb) {
  const CoSelectionCounts counts(m);
  PairStats stats;
  stats.cooccurrence = counts.count(fa, fb);
  stats.cosine = counts.cosine(fa, fb);
  if (stats.cooccurrence < 2) return stats;
  std::size_t greater = 0, total = 0;
  for (const auto& p : counts.pairs()) {
    if (p.count < 2) continue;
    ++total;
    if (counts.cosine(p.u, p.v) > stats.cosine) ++greater;
  }
  stats.rank_by_cosine = greater + 1;
  stats.n_ranked_pairs = total;
  return stats;
}

GAConfig simulation_ga_config(const ModelSpec& fitness) {
  GAConfig ga;
  ga.pop_size = 200;
  ga.ngen = 50;
  ga.tour_size = 3;
  ga.cxpb = 0.5;
  ga.mutpb = 0.2;
  ga.size_limit = 5;
  ga.fitness_model = fitness;
  return ga;
}

json run_sim_arm(const GenotypeDataset& data, const ModelSpec& fitness, int n_runs,
                 std::uint64_t seed, int n_threads, std::size_t fa, std::size_t fb) {
  GAConfig ga = simulation_ga_config(fitness);
  ga.seed = seed;
  const auto results = run_batch(data, ga, n_runs, n_threads);

  std::vector<std::vector<std::size_t>> subsets;
  subsets.reserve(results.size());
  double fitness_sum = 0.0;
  std::size_t evaluations = 0, hits = 0;
  for (const auto& r : results) {
    subsets.push_back(r.best_subset);
    fitness_sum += r.best_fitness;
    evaluations += r.evaluations_count;
    hits += r.cache_hits;
  }
  const SelectionMatrix m = build_selection_matrix(subsets, data.feature_ids());
  const PairStats stats = functional_pair_stats(m, fa, fb);
  const auto counts = m.selection_counts();

  json top_selected = json::array();
  std::vector<std::size_t> order(counts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return counts[a] != counts[b] ? counts[a] > counts[b] : a < b;
  });
  for (std::size_t i = 0; i < std::min<std::size_t>(20, order.size()); ++i)
    top_selected.push_back({{"feature", data.feature_ids()[order[i]]},
                            {"count", counts[order[i]]}});

  return {{"fitness", model_kind_name(fitness.kind)},
          {"n_runs", n_runs},
          {"pair_cooccurrence", stats.cooccurrence},
          {"pair_cooccurrence_fraction",
           static_cast<double>(stats.cooccurrence) / static_cast<double>(n_runs)},
          {"pair_cosine", stats.cosine},
          {"pair_rank_by_cosine", stats.rank_by_cosine},
          {"n_pairs_with_occ_ge_2", stats.n_ranked_pairs},
          {"functional_selection_counts", {counts[fa], counts[fb]}},
          {"mean_best_fitness", fitness_sum / static_cast<double>(n_runs)},
          {"evaluations", evaluations},
          {"cache_hits", hits},
          {"top_selected", top_selected}};
}

}  // namespace

json repro_sim(const ReproSimOptions& options) {
  const bool desk = options.scale == SimScale::desk;
  const std::size_t n_features = desk ? 100 : 1000;
  const std::size_t n_per_class = desk ? 400 : 800;
  const int n_runs = desk ? 200 : 1000;
  const int threads = resolve_threads(options.n_threads);

  const PenetranceModel model = make_xor_model(0.4, 0.5);
  SynthConfig synth;
  synth.n_cases = n_per_class;
  synth.n_controls = n_per_class;
  synth.n_noise_features = n_features - 2;
  synth.seed = derive_seed(options.seed, hash_string("repro-sim-data"));
  const SynthResult data = generate(model, synth);
  const auto [fa, fb] = data.functional_positions;

  // Fitness-path model settings: tree depth stays at the library default; the
  // logistic fitness uses a looser stopping rule because subset ranking
  // stabilizes long before gradient-norm 1e-6 and the GA evaluates it
  // millions of times across a batch.
  ModelSpec lr_fitness;
  lr_fitness.kind = ModelKind::logistic_regression;
  lr_fitness.lr.max_iterations = 60;
  lr_fitness.lr.convergence_tol = 1e-4;
  ModelSpec dt_fitness;
  dt_fitness.kind = ModelKind::decision_tree;

  json arms = json::object();
  if (options.only_fitness.empty() || options.only_fitness == "dt")
    arms["decision_tree"] =
        run_sim_arm(data.dataset, dt_fitness, n_runs,
                    derive_seed(options.seed, hash_string("sim-dt")), threads, fa, fb);
  if (options.only_fitness.empty() || options.only_fitness == "lr")
    arms["logistic_regression"] =
        run_sim_arm(data.dataset, lr_fitness, n_runs,
                    derive_seed(options.seed, hash_string("sim-lr")), threads, fa, fb);

  return {{"scale", desk ? "desk" : "paper"},
          {"seed", options.seed},
          {"dataset",
           {{"n_features", n_features},
            {"n_samples", 2 * n_per_class},
            {"heritability", data.heritability},
            {"prevalence", data.prevalence},
            {"maf", 0.5},
            {"functional_positions", {fa, fb}},
            {"functional_ids",
             {data.dataset.feature_ids()[fa], data.dataset.feature_ids()[fb]}}}},
          {"ga", pipeline_config_to_json(PipelineConfig{simulation_ga_config(dt_fitness),
                                                        ModelSpec{}, NetworkConfig{}, CRSConfig{},
                                                        options.seed})["ga"]},
          {"arms", arms}};
}

std::string repro_sim_summary(const json& report) {
  std::ostringstream out;
  out << "simulation study (scale=" << report.at("scale").get<std::string>()
      << ", seed=" << report.at("seed").get<std::uint64_t>() << ")\n";
  const auto& ds = report.at("dataset");
  out << "  data: " << ds.at("n_samples").get<std::size_t>() << " samples x "
      << ds.at("n_features").get<std::size_t>() << " features, h2="
      << ds.at("heritability").get<double>() << ", functional pair = ("
      << ds.at("functional_ids")[0].get<std::string>() << ", "
      << ds.at("functional_ids")[1].get<std::string>() << ")\n";
  for (const auto& [name, arm] : report.at("arms").items()) {
    out << "  " << name << ": pair co-occurrence " << arm.at("pair_cooccurrence").get<std::size_t>()
        << "/" << arm.at("n_runs").get<int>() << " runs, cosine "
        << format_double(arm.at("pair_cosine").get<double>());
    const auto rank = arm.at("pair_rank_by_cosine").get<std::size_t>();
    if (rank > 0)
      out << ", cosine rank " << rank << " of " << arm.at("n_pairs_with_occ_ge_2").get<std::size_t>()
          << " pairs (occ >= 2)";
    else
      out << ", pair not ranked (occ < 2)";
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Overfitting analysis.
// ---------------------------------------------------------------------------

json overfit_analysis(const GenotypeDataset& dataset, const OverfitOptions& options) {
  const int threads = resolve_threads(options.n_threads);
  const HoldoutSplit split = holdout_split(
      dataset, options.test_fraction, derive_seed(options.seed, hash_string("overfit-split")),
      true);

  GAConfig ga = options.ga;
  ga.seed = derive_seed(options.seed, hash_string("overfit-select"));
  const auto runs = run_batch(split.train, ga, options.n_runs, threads);

  std::vector<std::vector<std::size_t>> subsets;
  for (const auto& r : runs) subsets.push_back(r.best_subset);
  const SelectionMatrix m = build_selection_matrix(subsets, split.train.feature_ids());
  const CoSelectionGraph graph = build_graph(m, options.network.tau_occ, options.network.tau_cos);

  json report = {{"seed", options.seed},
                 {"test_fraction", options.test_fraction},
                 {"n_train", split.train.n_samples()},
                 {"n_test", split.test.n_samples()},
                 {"n_runs", options.n_runs},
                 {"fitness", model_kind_name(ga.fitness_model.kind)},
                 {"crs_model", model_kind_name(options.crs_model.kind)},
                 {"tau_occ", options.network.tau_occ},
                 {"tau_cos", options.network.tau_cos},
                 {"n_nodes", graph.nodes.size()},
                 {"n_edges", graph.edges.size()}};

  if (graph.nodes.empty()) {
    report["communities"] = json::array();
    report["note"] = "no edges survive the thresholds; no communities to evaluate";
    return report;
  }

  const CommunityPartition part = greedy_communities(graph);
  report["modularity"] = part.modularity;
  report["n_communities"] = part.n_communities;

  std::vector<Community> communities(part.n_communities);
  for (std::size_t i = 0; i < part.n_communities; ++i) communities[i].id = i;
  for (std::size_t pos = 0; pos < graph.nodes.size(); ++pos)
    communities[part.assignment[pos]].feature_ids.push_back(
        split.train.feature_ids()[graph.nodes[pos]]);

  CRSConfig crs_config = options.crs;
  crs_config.seed = derive_seed(options.seed, hash_string("overfit-crs"));
  const CRSMatrix crs =
      compute_crs(split.train, split.test, communities, options.crs_model, crs_config, threads);
  const auto evals = evaluate_crs(crs, split.test.labels());

  json community_rows = json::array();
  for (std::size_t c = 0; c < crs.community_labels.size(); ++c) {
    const Community& community = communities[crs.community_ids[c]];
    community_rows.push_back({{"label", crs.community_labels[c]},
                              {"community_id", crs.community_ids[c]},
                              {"size", crs.community_sizes[c]},
                              {"feature_ids", community.feature_ids},
                              {"auc", evals[c].auc},
                              {"t", evals[c].t},
                              {"p", evals[c].p}});
  }
  report["communities"] = community_rows;
  report["excluded_small_communities"] = crs.excluded_ids;
  const CommunityEval& max_eval = evals.back();
  report["max"] = {{"auc", max_eval.auc}, {"t", max_eval.t}, {"p", max_eval.p}};
  return report;
}

}  // namespace fcsnet
