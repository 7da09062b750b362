#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rankcorr/asymptotics.hpp"
#include "rankcorr/copulas.hpp"

namespace rankcorr {

enum class Coefficient { Pearson, Spearman, Kendall, Rnew, Rtilde };

inline constexpr Coefficient kAllCoefficients[] = {Coefficient::Pearson, Coefficient::Spearman, Coefficient::Kendall,
                                                   Coefficient::Rnew, Coefficient::Rtilde};

std::string_view coefficient_name(Coefficient c) noexcept;
Coefficient parse_coefficient(std::string_view text);

struct SimulationConfig {
  Family family = Family::FGM;
  std::vector<double> t;
  std::size_t n = 1000;
  std::size_t reps = 1000;
  std::uint64_t seed = 0;
  std::vector<Coefficient> coefficients{std::begin(kAllCoefficients), std::end(kAllCoefficients)};
  unsigned threads = 1;

  /// Throws ParameterOutOfRange unless reps >= 2, n >= 2, t is non-empty and
  /// every t is valid for the family.
  void validate() const;
};

struct CellResult {
  std::size_t t_index = 0;
  double t = 0.0;
  Coefficient coefficient = Coefficient::Kendall;
  double mean = 0.0;
  double variance = 0.0;  // divisor reps - 1
  std::size_t reps = 0;
};

struct SimulationResult {
  SimulationConfig config;
  std::vector<CellResult> cells;  // t-major, coefficients in config order
  double wall_seconds = 0.0;

  /// Throws MismatchedConfig when the cell was not simulated.
  const CellResult& cell(std::size_t t_index, Coefficient c) const;
};

/// Replication k at parameter index ti draws from RandomStream(seed, ti, k),
/// so the output is bit-identical for any thread count.
SimulationResult run(const SimulationConfig& config);

/// Order-fixed pairwise sum; the grouping depends only on the length.
double pairwise_sum(std::span<const double> values);
/// Sample mean and unbiased variance of values, both via pairwise_sum.
std::pair<double, double> mean_and_variance(std::span<const double> values);

struct TheoryComparison {
  double t = 0.0;
  Coefficient coefficient = Coefficient::Kendall;
  double observed = 0.0;  // S^2
  double theory = 0.0;    // leading_coeff / n
  double ratio = 0.0;     // observed / theory
  bool flagged = false;   // ratio outside the loose band
  /// Two-sided 99.9% chi-square band for ratio with reps - 1 degrees of
  /// freedom; filled when the comparison is strict.
  std::optional<std::pair<double, double>> strict_band;
  bool strict_flagged = false;
};

inline constexpr double kLooseBandLow = 0.8;
inline constexpr double kLooseBandHigh = 1.25;

/// Pairs every report with the simulated cell of the same family, t and
/// estimator. Throws MismatchedConfig when a report has no such cell.
std::vector<TheoryComparison> compare_with_theory(const SimulationResult& result,
                                                  const std::vector<VarianceReport>& reports, bool strict = false);

}  // namespace rankcorr
