#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rankcorr {

// Exact accumulator for the weighted concordance sum. T_n grows like n^3/3,
// which overflows 64 bits well before n = 10^7.
using WideCount = unsigned __int128;

/// Raw paired observations (x_i, y_i), i = 1..n, with n >= 2.
class PairedSample {
 public:
  PairedSample(std::vector<double> xs, std::vector<double> ys);

  std::size_t size() const noexcept { return xs_.size(); }
  std::span<const double> xs() const noexcept { return xs_; }
  std::span<const double> ys() const noexcept { return ys_; }

  bool has_x_ties() const noexcept { return x_ties_; }
  bool has_y_ties() const noexcept { return y_ties_; }
  bool has_ties() const noexcept { return x_ties_ || y_ties_; }

 private:
  std::vector<double> xs_;
  std::vector<double> ys_;
  bool x_ties_ = false;
  bool y_ties_ = false;
};

/// Ranks of the concomitants: entry i (0-based) is the rank, in 1..n, of the
/// y-value paired with the (i+1)-th smallest x. Always a permutation of 1..n.
class ConcomitantRanks {
 public:
  explicit ConcomitantRanks(std::vector<std::uint32_t> ranks);

  std::size_t size() const noexcept { return ranks_.size(); }
  std::span<const std::uint32_t> ranks() const noexcept { return ranks_; }
  std::uint32_t operator[](std::size_t i) const noexcept { return ranks_[i]; }

  static ConcomitantRanks identity(std::size_t n);
  static ConcomitantRanks reversal(std::size_t n);

 private:
  std::vector<std::uint32_t> ranks_;
};

enum class TiePolicy {
  Reject,  // throw TiesPresent
  Jitter,  // break ties by a seeded random order among equal values
};

struct RankingOptions {
  TiePolicy ties = TiePolicy::Reject;
  std::uint64_t jitter_seed = 0;
};

enum class Algorithm { Auto, Naive, Fast };

// Below this size the quadratic loops beat the tree-based ones.
inline constexpr std::size_t kFastPathThreshold = 64;

ConcomitantRanks concomitant_ranks(const PairedSample& sample, const RankingOptions& options = {});

double pearson(const PairedSample& sample);
/// Pearson correlation computed directly from two coordinate vectors.
double pearson(std::span<const double> xs, std::span<const double> ys);

/// Number of pairs j < i with r_j < r_i.
std::uint64_t concordant_pairs(const ConcomitantRanks& ranks, Algorithm algo = Algorithm::Auto);
double kendall(const ConcomitantRanks& ranks, Algorithm algo = Algorithm::Auto);

double spearman(const ConcomitantRanks& ranks);

/// T_n = sum over j < i of (n - i + j) * I(r_j <= r_i), positions 1-based.
WideCount weighted_T(const ConcomitantRanks& ranks, Algorithm algo = Algorithm::Auto);
/// Upper bound of T_n, attained by the identity permutation: n(n-1)(2n-1)/6.
WideCount weighted_T_max(std::size_t n);

double r_new(const ConcomitantRanks& ranks, Algorithm algo = Algorithm::Auto);
double r_tilde(const ConcomitantRanks& ranks);

struct CorrelationEstimates {
  double pearson = 0.0;
  double spearman = 0.0;
  double kendall = 0.0;
  double r_new = 0.0;
  double r_tilde = 0.0;
  std::size_t n = 0;
};

CorrelationEstimates estimate_all(const PairedSample& sample, const RankingOptions& options = {});
/// All rank coefficients from precomputed ranks; `pearson` is left at zero.
CorrelationEstimates rank_estimates(const ConcomitantRanks& ranks);

}  // namespace rankcorr
