#include <doctest.h>

#include <cmath>

#include "fcsnet/crs.hpp"
#include "fcsnet/synth.hpp"

using namespace fcsnet;

namespace {

GenotypeDataset epistasis_data(double h2, std::size_t per_class, std::size_t n_features,
                               std::uint64_t seed) {
  SynthConfig config;
  config.n_cases = per_class;
  config.n_controls = per_class;
  config.n_noise_features = n_features - 2;
  config.seed = seed;
  config.functional_positions = {{0, 1}};
  return generate(make_xor_model(h2), config).dataset;
}

std::vector<Community> noise_communities(const GenotypeDataset& data, std::size_t n_communities,
                                         std::size_t size, std::size_t first_feature) {
  std::vector<Community> out;
  std::size_t f = first_feature;
  for (std::size_t c = 0; c < n_communities; ++c) {
    Community community;
    community.id = c;
    for (std::size_t i = 0; i < size; ++i)
      community.feature_ids.push_back(data.feature_ids()[f++]);
    out.push_back(std::move(community));
  }
  return out;
}

}  // namespace

TEST_CASE("a constant model yields CRS identically 0.5") {
  const auto data = epistasis_data(0.4, 50, 10, 21);
  ModelSpec spec;
  spec.kind = ModelKind::decision_tree;
  spec.tree.max_depth = 0;  // single leaf
  CRSConfig config;
  config.n_resamples = 20;
  config.seed = 5;
  const auto communities = noise_communities(data, 2, 3, 2);
  const auto crs = compute_crs(data, data, communities, spec, config);
  // stratified 80% of a balanced cohort stays balanced, so every leaf is 0.5
  for (double v : crs.scores.data) CHECK(v == 0.5);
}

TEST_CASE("averaging identical resamples changes nothing") {
  // fraction ~1 with tiny classes: every stratified resample is the full set
  const auto data = epistasis_data(1.0, 5, 8, 33);
  ModelSpec spec;
  spec.kind = ModelKind::decision_tree;
  spec.tree.min_samples_leaf = 1;
  CRSConfig config;
  config.sample_fraction = 0.99;
  config.min_community_size = 2;
  config.seed = 9;
  const auto communities = noise_communities(data, 1, 2, 0);

  config.n_resamples = 1;
  const auto one = compute_crs(data, data, communities, spec, config);
  config.n_resamples = 5;
  const auto five = compute_crs(data, data, communities, spec, config);
  for (std::size_t i = 0; i < one.scores.data.size(); ++i)
    CHECK(one.scores.data[i] == five.scores.data[i]);
}

TEST_CASE("the functional community transfers at h2 = 1") {
  const auto train = epistasis_data(1.0, 200, 20, 41);
  const auto target = epistasis_data(1.0, 150, 20, 42);
  std::vector<Community> communities;
  Community functional;
  functional.id = 0;
  functional.feature_ids = {train.feature_ids()[0], train.feature_ids()[1],
                            train.feature_ids()[2]};
  communities.push_back(functional);

  ModelSpec spec;
  spec.kind = ModelKind::decision_tree;
  CRSConfig config;
  config.n_resamples = 50;
  config.seed = 3;
  const auto crs = compute_crs(train, target, communities, spec, config);
  std::vector<double> column(crs.scores.rows);
  for (std::size_t i = 0; i < crs.scores.rows; ++i) column[i] = crs.scores.at(i, 0);
  CHECK(auc_roc(column, target.labels()) >= 0.95);
}

TEST_CASE("CRS is bit-reproducible across worker counts") {
  const auto data = epistasis_data(0.4, 40, 14, 77);
  ModelSpec spec;
  spec.kind = ModelKind::decision_tree;
  CRSConfig config;
  config.n_resamples = 12;
  config.seed = 100;
  const auto communities = noise_communities(data, 4, 3, 2);
  const auto a = compute_crs(data, data, communities, spec, config, 1);
  const auto b = compute_crs(data, data, communities, spec, config, 3);
  CHECK(a.scores.data == b.scores.data);
  CHECK(a.community_labels == b.community_labels);
}

TEST_CASE("columns are labelled by descending community size") {
  const auto data = epistasis_data(0.4, 30, 20, 13);
  std::vector<Community> communities;
  Community small, large, medium;
  small.id = 0;
  small.feature_ids = {data.feature_ids()[2], data.feature_ids()[3], data.feature_ids()[4]};
  large.id = 1;
  for (int f = 5; f < 11; ++f) large.feature_ids.push_back(data.feature_ids()[f]);
  medium.id = 2;
  for (int f = 11; f < 15; ++f) medium.feature_ids.push_back(data.feature_ids()[f]);
  communities = {small, large, medium};

  ModelSpec spec;
  spec.kind = ModelKind::decision_tree;
  CRSConfig config;
  config.n_resamples = 2;
  const auto crs = compute_crs(data, data, communities, spec, config);
  CHECK(crs.community_labels == std::vector<std::string>{"C1", "C2", "C3"});
  CHECK(crs.community_ids == std::vector<std::size_t>{1, 2, 0});
  CHECK(crs.community_sizes == std::vector<std::size_t>{6, 4, 3});
}

TEST_CASE("undersized communities are excluded and reported") {
  const auto data = epistasis_data(0.4, 30, 12, 14);
  std::vector<Community> communities = noise_communities(data, 2, 3, 2);
  Community tiny;
  tiny.id = 9;
  tiny.feature_ids = {data.feature_ids()[10]};
  communities.push_back(tiny);

  ModelSpec spec;
  spec.kind = ModelKind::decision_tree;
  CRSConfig config;
  config.n_resamples = 2;
  const auto crs = compute_crs(data, data, communities, spec, config);
  CHECK(crs.scores.cols == 2);
  CHECK(crs.excluded_ids == std::vector<std::size_t>{9});

  CRSConfig strict = config;
  strict.min_community_size = 50;
  CHECK_THROWS_AS(compute_crs(data, data, communities, spec, strict), ValidationError);
}

TEST_CASE("CRS entries stay in the unit interval") {
  const auto data = epistasis_data(1.0, 60, 16, 15);
  ModelSpec spec;
  spec.kind = ModelKind::random_forest;
  spec.forest.n_trees = 10;
  CRSConfig config;
  config.n_resamples = 5;
  const auto crs = compute_crs(data, data, noise_communities(data, 3, 4, 2), spec, config);
  for (double v : crs.scores.data) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("max_crs picks row maxima") {
  CRSMatrix m;
  m.scores = Matrix(2, 2);
  m.scores.at(0, 0) = 0.2;
  m.scores.at(0, 1) = 0.8;
  m.scores.at(1, 0) = 0.5;
  m.scores.at(1, 1) = 0.1;
  m.community_labels = {"C1", "C2"};
  CHECK(max_crs(m) == std::vector<double>{0.8, 0.5});

  CRSMatrix single;
  single.scores = Matrix(3, 1);
  single.scores.at(0, 0) = 0.3;
  single.scores.at(1, 0) = 0.9;
  single.scores.at(2, 0) = 0.1;
  single.community_labels = {"C1"};
  CHECK(max_crs(single) == std::vector<double>{0.3, 0.9, 0.1});
}

TEST_CASE("evaluate_crs scores perfect, constant and reversed columns") {
  const std::vector<std::uint8_t> labels = {1, 0, 1, 0, 1, 0};
  CRSMatrix m;
  m.scores = Matrix(6, 3);
  for (std::size_t i = 0; i < 6; ++i) {
    m.scores.at(i, 0) = labels[i];          // perfect
    m.scores.at(i, 1) = 0.4;                // constant
    m.scores.at(i, 2) = 1.0 - labels[i];    // reversed
  }
  m.community_labels = {"C1", "C2", "C3"};
  const auto evals = evaluate_crs(m, labels);
  REQUIRE(evals.size() == 4);  // 3 columns + Max
  CHECK(evals[0].auc == doctest::Approx(1.0));
  CHECK(evals[0].p < 1e-6);
  CHECK(evals[1].auc == doctest::Approx(0.5));
  CHECK(evals[1].t == 0.0);
  CHECK(evals[2].auc == doctest::Approx(0.0));
  CHECK(evals.back().label == "Max");
  CHECK(evals.back().auc >= 0.0);
  CHECK(evals.back().auc <= 1.0);
}
