#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>

#include "fcsnet/dataset.hpp"

namespace fcsnet {

/// Two-locus disease model: penetrance[i][j] is the disease probability given
/// minor-allele counts (i, j) at the two functional loci.
struct PenetranceModel {
  std::array<std::array<double, 3>, 3> penetrance{};
  double maf_a = 0.5;
  double maf_b = 0.5;

  /// Hardy-Weinberg genotype frequencies (counts 0,1,2) for a given maf.
  static std::array<double, 3> hw_frequencies(double maf);

  void validate() const;

  /// Marginal penetrance of genotype i at locus A (averaged over locus B).
  double marginal_a(int i) const;
  double marginal_b(int j) const;

  /// True when all marginal penetrances are equal within tol, i.e. neither
  /// locus carries a main effect on its own.
  bool is_pure_epistasis(double tol = 1e-12) const;
};

/// Broad-sense heritability and prevalence by exact 9-cell enumeration:
/// K = sum g_i g_j f_ij, h2 = sum g_i g_j (f_ij - K)^2 / (K (1-K)).
std::pair<double, double> heritability_and_prevalence(const PenetranceModel& model);

/// Parity (XOR) penetrance table: plateau value on odd i+j, zero elsewhere.
/// Only maf = 0.5 yields zero marginals, so other mafs are rejected.
PenetranceModel make_xor_model(double target_heritability, double maf = 0.5);

struct SynthConfig {
  std::size_t n_cases = 400;
  std::size_t n_controls = 400;
  std::size_t n_noise_features = 98;
  double noise_maf_min = 0.05;
  double noise_maf_max = 0.5;
  std::uint64_t seed = 0;
  /// Column indices of the two functional loci; random placement when unset.
  std::optional<std::pair<std::size_t, std::size_t>> functional_positions;

  void validate() const;
};

struct SynthResult {
  GenotypeDataset dataset;
  std::pair<std::size_t, std::size_t> functional_positions;
  std::size_t proposals_used = 0;
  double heritability = 0.0;
  double prevalence = 0.0;
};

/// Rejection-sample genotype pairs against the penetrance table until the
/// case/control quotas fill; noise features are label-independent binomials.
SynthResult generate(const PenetranceModel& model, const SynthConfig& config);

/// Fraction of cases among n_proposals raw penetrance draws (no quotas).
double estimate_prevalence(const PenetranceModel& model, std::size_t n_proposals,
                           std::uint64_t seed);

}  // namespace fcsnet
