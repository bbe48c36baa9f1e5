#include "fcsnet/ga.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace fcsnet {

void GAConfig::validate() const {
  if (pop_size < 1) throw ValidationError("pop_size must be >= 1");
  if (ngen < 0) throw ValidationError("ngen must be >= 0");
  if (tour_size < 1) throw ValidationError("tour_size must be >= 1");
  if (!(cxpb >= 0.0 && cxpb <= 1.0)) throw ValidationError("cxpb must be in [0,1]");
  if (!(mutpb >= 0.0 && mutpb <= 1.0)) throw ValidationError("mutpb must be in [0,1]");
  if (size_limit < 1) throw ValidationError("size_limit must be >= 1");
  if (!(per_bit_rate >= 0.0 && per_bit_rate <= 1.0))
    throw ValidationError("per_bit_rate must be in [0,1]");
  if (elitism_count < 0 || elitism_count > pop_size)
    throw ValidationError("elitism_count must be in [0, pop_size]");
  if (cv_folds < 2) throw ValidationError("cv_folds must be >= 2");
  fitness_model.validate();
}

namespace {

// domain restricts where the empty-chromosome repair bit may go; tree-aware
// crossover must not resurrect features outside the parental used-set union
void repair_within(Bitset& selected, int size_limit, Rng& rng, const Bitset* domain) {
  const std::size_t count = selected.count();
  if (count == 0) {
    if (domain && domain->any()) {
      const auto candidates = domain->ones();
      selected.set(candidates[rng.next_below(candidates.size())]);
    } else {
      selected.set(rng.next_below(selected.size()));
    }
    return;
  }
  if (count <= static_cast<std::size_t>(size_limit)) return;
  auto ones = selected.ones();
  // uniform removal of (count - limit) selected bits by partial Fisher-Yates
  const std::size_t remove = count - static_cast<std::size_t>(size_limit);
  for (std::size_t i = 0; i < remove; ++i) {
    const std::size_t j = i + rng.next_below(ones.size() - i);
    std::swap(ones[i], ones[j]);
    selected.set(ones[i], false);
  }
}

}  // namespace

void repair_size_limit(Bitset& selected, int size_limit, Rng& rng) {
  repair_within(selected, size_limit, rng, nullptr);
}

std::size_t tournament_select(const std::vector<Chromosome>& population, int tour_size, Rng& rng) {
  if (population.empty()) throw ValidationError("tournament over an empty population");
  std::vector<std::size_t> entrants(tour_size);
  for (auto& e : entrants) e = rng.next_below(population.size());
  for (const auto& e : entrants)
    if (!population[e].fitness) throw ValidationError("unevaluated individual in tournament");

  // best fitness, ties to smaller subsets, remaining ties uniform at random
  std::vector<std::size_t> best;
  for (std::size_t e : entrants) {
    if (best.empty()) {
      best.push_back(e);
      continue;
    }
    const double bf = *population[best[0]].fitness;
    const double ef = *population[e].fitness;
    if (ef > bf) {
      best.assign(1, e);
    } else if (ef == bf) {
      const std::size_t bc = population[best[0]].selected.count();
      const std::size_t ec = population[e].selected.count();
      if (ec < bc)
        best.assign(1, e);
      else if (ec == bc)
        best.push_back(e);
    }
  }
  return best.size() == 1 ? best[0] : best[rng.next_below(best.size())];
}

void uniform_crossover(Chromosome& a, Chromosome& b, int size_limit, Rng& rng) {
  if (a.selected.size() != b.selected.size())
    throw ValidationError("crossover parents have different lengths");
  for (std::size_t i = 0; i < a.selected.size(); ++i) {
    if (rng.next_bool()) {
      const bool av = a.selected.test(i);
      const bool bv = b.selected.test(i);
      a.selected.set(i, bv);
      b.selected.set(i, av);
    }
  }
  repair_size_limit(a.selected, size_limit, rng);
  repair_size_limit(b.selected, size_limit, rng);
  a.fitness.reset();
  a.used.reset();
  b.fitness.reset();
  b.used.reset();
}

void tree_aware_crossover(Chromosome& a, Chromosome& b, int size_limit, Rng& rng) {
  if (!a.used || !b.used)
    throw ValidationError("tree-aware crossover requires used-feature sets on both parents");
  // deselect everything the fold trees never split on, then cross as usual;
  // bits outside used(a) | used(b) stay zero in both children, including the
  // repair bit an empty child receives
  const Bitset bit_union = *a.used | *b.used;
  a.selected = *a.used;
  b.selected = *b.used;
  for (std::size_t i = 0; i < a.selected.size(); ++i) {
    if (rng.next_bool()) {
      const bool av = a.selected.test(i);
      const bool bv = b.selected.test(i);
      a.selected.set(i, bv);
      b.selected.set(i, av);
    }
  }
  repair_within(a.selected, size_limit, rng, &bit_union);
  repair_within(b.selected, size_limit, rng, &bit_union);
  a.fitness.reset();
  a.used.reset();
  b.fitness.reset();
  b.used.reset();
}

void bitflip_mutation(Chromosome& c, double per_bit_rate, int size_limit, Rng& rng) {
  for (std::size_t i = 0; i < c.selected.size(); ++i)
    if (rng.bernoulli(per_bit_rate)) c.selected.flip(i);
  repair_size_limit(c.selected, size_limit, rng);
  c.fitness.reset();
  c.used.reset();
}

namespace {

struct BitsetHash {
  std::size_t operator()(const Bitset& b) const { return b.hash(); }
};

struct CacheEntry {
  double fitness = 0.0;
  Bitset used;
};

using FitnessCache = std::unordered_map<Bitset, CacheEntry, BitsetHash>;

Bitset to_bitset(const std::vector<std::size_t>& indices, std::size_t n) {
  Bitset b(n);
  for (auto i : indices) b.set(i);
  return b;
}

std::vector<std::size_t> to_indices(const Bitset& b) {
  std::vector<std::size_t> out;
  for (auto i : b.ones()) out.push_back(i);
  return out;
}

struct Evaluator {
  const GenotypeDataset& dataset;
  const GAConfig& config;
  std::uint64_t eval_seed;  // fixed per run: CV folds are stable within a run
  FitnessCache cache;
  std::size_t evaluations = 0;
  std::size_t hits = 0;

  void evaluate(std::vector<Chromosome>& population, int n_threads) {
    std::vector<const Bitset*> pending;
    std::vector<std::size_t> owner;  // population index that introduced the bits
    FitnessCache batch_seen;
    for (std::size_t i = 0; i < population.size(); ++i) {
      const Bitset& bits = population[i].selected;
      if (cache.count(bits) || batch_seen.count(bits)) {
        ++hits;
        continue;
      }
      batch_seen.emplace(bits, CacheEntry{});
      owner.push_back(i);
      pending.push_back(&population[i].selected);
    }
    evaluations += pending.size();

    std::vector<CacheEntry> results(pending.size());
    parallel_for(pending.size(), n_threads, [&](std::size_t t) {
      CvFitness fit = cv_fitness(dataset, to_indices(*pending[t]), config.fitness_model,
                                 config.cv_folds, eval_seed);
      results[t].fitness = fit.mean_auc;
      results[t].used = to_bitset(fit.used_features, pending[t]->size());
    });
    for (std::size_t t = 0; t < pending.size(); ++t) cache.emplace(*pending[t], results[t]);

    for (auto& ind : population) {
      const CacheEntry& e = cache.at(ind.selected);
      ind.fitness = e.fitness;
      ind.used = e.used;
    }
  }
};

std::vector<std::size_t> rank_population(const std::vector<Chromosome>& population) {
  std::vector<std::size_t> order(population.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (*population[a].fitness != *population[b].fitness)
      return *population[a].fitness > *population[b].fitness;
    return population[a].selected.count() < population[b].selected.count();
  });
  return order;
}

}  // namespace

RunResult evolve(const GenotypeDataset& dataset, const GAConfig& config, int n_threads,
                 const GenerationObserver& on_generation) {
  config.validate();
  if (dataset.count_label(0) == 0 || dataset.count_label(1) == 0)
    throw ValidationError("GA requires both classes in the dataset");

  const std::size_t n = dataset.n_features();
  const double per_bit =
      config.per_bit_rate > 0.0 ? config.per_bit_rate : 1.0 / static_cast<double>(n);
  const bool tree_mode = config.fitness_model.kind == ModelKind::decision_tree;

  Rng rng(derive_seed(config.seed, hash_string("evolve")));
  Evaluator evaluator{dataset, config, derive_seed(config.seed, hash_string("fitness")), {}, 0, 0};

  std::vector<Chromosome> population(config.pop_size);
  for (auto& ind : population) {
    ind.selected = Bitset(n);
    for (std::size_t i = 0; i < n; ++i) ind.selected.set(i, rng.next_bool());
    repair_size_limit(ind.selected, config.size_limit, rng);
  }
  evaluator.evaluate(population, n_threads);
  if (on_generation) on_generation(0, population);

  Chromosome best;
  auto update_best = [&] {
    for (const auto& ind : population)
      if (!best.fitness || *ind.fitness > *best.fitness) best = ind;
  };
  update_best();

  for (int gen = 0; gen < config.ngen; ++gen) {
    std::vector<Chromosome> next;
    next.reserve(config.pop_size);
    const auto order = rank_population(population);
    for (int e = 0; e < config.elitism_count; ++e) next.push_back(population[order[e]]);

    while (static_cast<int>(next.size()) < config.pop_size) {
      Chromosome c1 = population[tournament_select(population, config.tour_size, rng)];
      Chromosome c2 = population[tournament_select(population, config.tour_size, rng)];
      if (rng.bernoulli(config.cxpb)) {
        const bool can_tree_cross =
            tree_mode && c1.used && c2.used && (*c1.used | *c2.used).any();
        if (can_tree_cross)
          tree_aware_crossover(c1, c2, config.size_limit, rng);
        else
          uniform_crossover(c1, c2, config.size_limit, rng);
      }
      if (rng.bernoulli(config.mutpb)) bitflip_mutation(c1, per_bit, config.size_limit, rng);
      if (rng.bernoulli(config.mutpb)) bitflip_mutation(c2, per_bit, config.size_limit, rng);
      next.push_back(std::move(c1));
      if (static_cast<int>(next.size()) < config.pop_size) next.push_back(std::move(c2));
    }
    population.swap(next);
    evaluator.evaluate(population, n_threads);
    if (on_generation) on_generation(gen + 1, population);
    update_best();
  }

  RunResult result;
  result.best_subset = to_indices(best.selected);
  result.best_fitness = *best.fitness;
  result.generations_executed = config.ngen;
  result.evaluations_count = evaluator.evaluations;
  result.cache_hits = evaluator.hits;
  result.seed = config.seed;
  return result;
}

std::vector<RunResult> run_batch(const GenotypeDataset& dataset, const GAConfig& config,
                                 int n_runs, int n_threads) {
  if (n_runs < 1) throw ValidationError("n_runs must be >= 1");
  std::vector<RunResult> results(n_runs);
  parallel_for(n_runs, n_threads, [&](std::size_t i) {
    GAConfig run_config = config;
    run_config.seed = config.seed + i;
    results[i] = evolve(dataset, run_config, 1);
  });
  return results;
}

}  // namespace fcsnet
