#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fcsnet/bitset.hpp"
#include "fcsnet/models.hpp"

namespace fcsnet {

/// GA individual: a binary feature-selection vector with cached fitness and,
/// in decision-tree mode, the union of features its CV trees actually split
/// on.
struct Chromosome {
  Bitset selected;
  std::optional<double> fitness;
  std::optional<Bitset> used;
};

struct GAConfig {
  int pop_size = 200;
  int ngen = 50;
  int tour_size = 3;
  double cxpb = 0.5;
  double mutpb = 0.2;
  int size_limit = 5;
  ModelSpec fitness_model;
  /// Per-bit flip probability inside a triggered mutation; 0 = 1/n_features.
  double per_bit_rate = 0.0;
  int elitism_count = 1;
  int cv_folds = 5;
  std::uint64_t seed = 0;

  void validate() const;
};

struct RunResult {
  std::vector<std::size_t> best_subset;
  double best_fitness = 0.0;
  int generations_executed = 0;
  std::size_t evaluations_count = 0;
  std::size_t cache_hits = 0;
  std::uint64_t seed = 0;
};

// Variation operators. All repair to [1, size_limit] selected bits.
std::size_t tournament_select(const std::vector<Chromosome>& population, int tour_size, Rng& rng);
void uniform_crossover(Chromosome& a, Chromosome& b, int size_limit, Rng& rng);
void tree_aware_crossover(Chromosome& a, Chromosome& b, int size_limit, Rng& rng);
void bitflip_mutation(Chromosome& c, double per_bit_rate, int size_limit, Rng& rng);
void repair_size_limit(Bitset& selected, int size_limit, Rng& rng);

/// Called after each generation is evaluated (generation 0 = initial
/// population); used for progress reporting and invariant checks.
using GenerationObserver = std::function<void(int, const std::vector<Chromosome>&)>;

/// One GA run: generational loop with elitism, tournament selection,
/// crossover (tree-aware under decision-tree fitness), bit-flip mutation and
/// size-limit repair. Deterministic for a fixed config seed; fitness
/// evaluation parallelizes over the population without affecting results.
RunResult evolve(const GenotypeDataset& dataset, const GAConfig& config, int n_threads = 1,
                 const GenerationObserver& on_generation = {});

/// n_runs independent evolve() calls with seeds config.seed + i, fanned out
/// over a worker pool; the result order matches the run index.
std::vector<RunResult> run_batch(const GenotypeDataset& dataset, const GAConfig& config,
                                 int n_runs, int n_threads = 1);

}  // namespace fcsnet
