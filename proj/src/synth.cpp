#include "fcsnet/synth.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace fcsnet {

std::array<double, 3> PenetranceModel::hw_frequencies(double maf) {
  const double p = maf;
  const double q = 1.0 - maf;
  return {q * q, 2.0 * p * q, p * p};
}

void PenetranceModel::validate() const {
  if (!(maf_a > 0.0 && maf_a <= 0.5) || !(maf_b > 0.0 && maf_b <= 0.5))
    throw ValidationError("minor allele frequencies must be in (0, 0.5]");
  for (const auto& row : penetrance)
    for (double f : row)
      if (!(f >= 0.0 && f <= 1.0)) throw ValidationError("penetrance entries must be in [0,1]");
}

double PenetranceModel::marginal_a(int i) const {
  auto gb = hw_frequencies(maf_b);
  double m = 0.0;
  for (int j = 0; j < 3; ++j) m += gb[j] * penetrance[i][j];
  return m;
}

double PenetranceModel::marginal_b(int j) const {
  auto ga = hw_frequencies(maf_a);
  double m = 0.0;
  for (int i = 0; i < 3; ++i) m += ga[i] * penetrance[i][j];
  return m;
}

bool PenetranceModel::is_pure_epistasis(double tol) const {
  for (int i = 1; i < 3; ++i)
    if (std::abs(marginal_a(i) - marginal_a(0)) > tol) return false;
  for (int j = 1; j < 3; ++j)
    if (std::abs(marginal_b(j) - marginal_b(0)) > tol) return false;
  return true;
}

std::pair<double, double> heritability_and_prevalence(const PenetranceModel& model) {
  model.validate();
  auto ga = PenetranceModel::hw_frequencies(model.maf_a);
  auto gb = PenetranceModel::hw_frequencies(model.maf_b);
  double prevalence = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) prevalence += ga[i] * gb[j] * model.penetrance[i][j];
  double variance = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double d = model.penetrance[i][j] - prevalence;
      variance += ga[i] * gb[j] * d * d;
    }
  if (variance == 0.0 || prevalence <= 0.0 || prevalence >= 1.0)
    throw ValidationError("zero heritability: penetrance table carries no genotype effect");
  return {variance / (prevalence * (1.0 - prevalence)), prevalence};
}

PenetranceModel make_xor_model(double target_heritability, double maf) {
  if (!(target_heritability > 0.0 && target_heritability <= 1.0))
    throw ValidationError("target heritability must be in (0, 1]");
  if (std::abs(maf - 0.5) > 1e-12)
    throw ValidationError(
        "XOR parity model is pure-epistatic only at maf = 0.5; requested maf = " +
        format_double(maf) + " is unattainable");

  // Parity plateau t solves h = 0.5 t / (1 - 0.5 t) at maf 0.5.
  const double h = target_heritability;
  const double plateau = 2.0 * h / (1.0 + h);

  PenetranceModel model;
  model.maf_a = maf;
  model.maf_b = maf;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) model.penetrance[i][j] = ((i + j) % 2 == 1) ? plateau : 0.0;

  auto [h2, k] = heritability_and_prevalence(model);
  (void)k;
  if (std::abs(h2 - target_heritability) > 1e-9)
    throw std::runtime_error("XOR model solve failed to reach target heritability");
  if (!model.is_pure_epistasis())
    throw std::runtime_error("XOR model failed the pure-epistasis check");
  return model;
}

void SynthConfig::validate() const {
  if (n_cases < 1 || n_controls < 1) throw ValidationError("case and control counts must be >= 1");
  if (!(noise_maf_min > 0.0 && noise_maf_min <= noise_maf_max && noise_maf_max <= 0.5))
    throw ValidationError("noise maf range must lie within (0, 0.5]");
}

namespace {

int sample_hw_genotype(Rng& rng, double maf) {
  return (rng.bernoulli(maf) ? 1 : 0) + (rng.bernoulli(maf) ? 1 : 0);
}

}  // namespace

SynthResult generate(const PenetranceModel& model, const SynthConfig& config) {
  model.validate();
  config.validate();

  double max_pen = 0.0, min_pen = 1.0;
  for (const auto& row : model.penetrance)
    for (double f : row) {
      max_pen = std::max(max_pen, f);
      min_pen = std::min(min_pen, f);
    }
  if (max_pen == 0.0 && config.n_cases > 0)
    throw ValidationError("case quota unreachable: penetrance is identically zero");
  if (min_pen == 1.0 && config.n_controls > 0)
    throw ValidationError("control quota unreachable: penetrance is identically one");

  const std::size_t n_features = config.n_noise_features + 2;
  const std::size_t n_samples = config.n_cases + config.n_controls;

  Rng rng(derive_seed(config.seed, hash_string("synthgen")));

  std::pair<std::size_t, std::size_t> positions;
  if (config.functional_positions) {
    positions = *config.functional_positions;
    if (positions.first >= n_features || positions.second >= n_features ||
        positions.first == positions.second)
      throw ValidationError("functional positions must be distinct column indices");
  } else {
    positions.first = rng.next_below(n_features);
    do {
      positions.second = rng.next_below(n_features);
    } while (positions.second == positions.first);
  }

  // Functional genotype pairs, rejection-sampled to fill both quotas.
  std::vector<std::array<std::uint8_t, 2>> functional;
  std::vector<std::uint8_t> labels;
  functional.reserve(n_samples);
  labels.reserve(n_samples);
  std::size_t cases = 0, controls = 0, proposals = 0;
  while (cases < config.n_cases || controls < config.n_controls) {
    int a = sample_hw_genotype(rng, model.maf_a);
    int b = sample_hw_genotype(rng, model.maf_b);
    ++proposals;
    bool is_case = rng.next_double() < model.penetrance[a][b];
    if (is_case) {
      if (cases == config.n_cases) continue;
      ++cases;
    } else {
      if (controls == config.n_controls) continue;
      ++controls;
    }
    functional.push_back({static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)});
    labels.push_back(is_case ? 1 : 0);
  }

  // Per-feature noise mafs, then label-independent binomial draws.
  std::vector<double> noise_maf(n_features, 0.0);
  for (std::size_t f = 0; f < n_features; ++f) {
    if (f == positions.first || f == positions.second) continue;
    noise_maf[f] =
        config.noise_maf_min + (config.noise_maf_max - config.noise_maf_min) * rng.next_double();
  }

  std::vector<std::uint8_t> genotypes(n_samples * n_features, 0);
  for (std::size_t s = 0; s < n_samples; ++s) {
    for (std::size_t f = 0; f < n_features; ++f) {
      std::uint8_t g;
      if (f == positions.first)
        g = functional[s][0];
      else if (f == positions.second)
        g = functional[s][1];
      else
        g = static_cast<std::uint8_t>(sample_hw_genotype(rng, noise_maf[f]));
      genotypes[s * n_features + f] = g;
    }
  }

  std::vector<std::string> feature_ids(n_features);
  for (std::size_t f = 0; f < n_features; ++f) feature_ids[f] = "snp" + std::to_string(f + 1);
  std::vector<std::string> sample_ids(n_samples);
  for (std::size_t s = 0; s < n_samples; ++s) sample_ids[s] = "ind" + std::to_string(s + 1);

  SynthResult result{
      GenotypeDataset(std::move(feature_ids), std::move(sample_ids), std::move(genotypes),
                      std::move(labels)),
      positions, proposals, std::numeric_limits<double>::quiet_NaN(),
      std::numeric_limits<double>::quiet_NaN()};
  try {
    auto [h2, k] = heritability_and_prevalence(model);
    result.heritability = h2;
    result.prevalence = k;
  } catch (const ValidationError&) {
    // constant table: data is generatable but heritability is undefined
  }
  return result;
}

double estimate_prevalence(const PenetranceModel& model, std::size_t n_proposals,
                           std::uint64_t seed) {
  model.validate();
  if (n_proposals == 0) throw ValidationError("n_proposals must be >= 1");
  Rng rng(derive_seed(seed, hash_string("prevalence")));
  std::size_t cases = 0;
  for (std::size_t i = 0; i < n_proposals; ++i) {
    int a = sample_hw_genotype(rng, model.maf_a);
    int b = sample_hw_genotype(rng, model.maf_b);
    if (rng.next_double() < model.penetrance[a][b]) ++cases;
  }
  return static_cast<double>(cases) / static_cast<double>(n_proposals);
}

}  // namespace fcsnet
