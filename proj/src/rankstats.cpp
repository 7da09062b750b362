#include "rankcorr/rankstats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rankcorr/error.hpp"
#include "rankcorr/random.hpp"

namespace rankcorr {

namespace {

bool has_duplicates(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

// Permutation of 0..n-1 that sorts `values` ascending. Equal values are
// ordered by `keys` when given, else rejected.
std::vector<std::uint32_t> sorting_order(std::span<const double> values, const std::vector<std::uint64_t>* keys,
                                         const char* axis) {
  std::vector<std::uint32_t> order(values.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (values[a] != values[b]) return values[a] < values[b];
    if (keys != nullptr && (*keys)[a] != (*keys)[b]) return (*keys)[a] < (*keys)[b];
    return a < b;
  });
  if (keys == nullptr) {
    for (std::size_t i = 1; i < order.size(); ++i) {
      if (values[order[i]] == values[order[i - 1]]) {
        throw TiesPresent(std::string("tied ") + axis + " values at rows " + std::to_string(order[i - 1] + 1) +
                          " and " + std::to_string(order[i] + 1));
      }
    }
  }
  return order;
}

std::vector<std::uint64_t> jitter_keys(std::size_t n, std::uint64_t seed, std::uint32_t axis) {
  RandomStream stream(seed, 0x7469u, axis);
  std::vector<std::uint64_t> keys(n);
  for (auto& k : keys) k = stream.next_u64();
  return keys;
}

void check_permutation(std::span<const std::uint32_t> ranks) {
  std::vector<bool> seen(ranks.size() + 1, false);
  for (auto r : ranks) {
    if (r == 0 || r > ranks.size() || seen[r]) {
      throw InputError("concomitant ranks must be a permutation of 1..n");
    }
    seen[r] = true;
  }
}

std::uint64_t count_inversions(std::vector<std::uint32_t>& a, std::vector<std::uint32_t>& scratch, std::size_t lo,
                               std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t inv = count_inversions(a, scratch, lo, mid) + count_inversions(a, scratch, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (a[i] <= a[j]) {
      scratch[k++] = a[i++];
    } else {
      inv += mid - i;
      scratch[k++] = a[j++];
    }
  }
  while (i < mid) scratch[k++] = a[i++];
  while (j < hi) scratch[k++] = a[j++];
  std::copy(scratch.begin() + lo, scratch.begin() + hi, a.begin() + lo);
  return inv;
}

bool use_fast(Algorithm algo, std::size_t n) {
  switch (algo) {
    case Algorithm::Naive: return false;
    case Algorithm::Fast: return true;
    case Algorithm::Auto: break;
  }
  return n >= kFastPathThreshold;
}

long double to_long_double(WideCount v) { return static_cast<long double>(v); }

}  // namespace

PairedSample::PairedSample(std::vector<double> xs, std::vector<double> ys) : xs_(std::move(xs)), ys_(std::move(ys)) {
  if (xs_.size() != ys_.size()) {
    throw LengthMismatch("x and y have different lengths (" + std::to_string(xs_.size()) + " vs " +
                         std::to_string(ys_.size()) + ")");
  }
  if (xs_.size() < 2) throw InputError("a paired sample needs at least 2 observations");
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    if (!std::isfinite(xs_[i]) || !std::isfinite(ys_[i])) {
      throw InputError("non-finite value at row " + std::to_string(i + 1));
    }
  }
  x_ties_ = has_duplicates(xs_);
  y_ties_ = has_duplicates(ys_);
}

ConcomitantRanks::ConcomitantRanks(std::vector<std::uint32_t> ranks) : ranks_(std::move(ranks)) {
  check_permutation(ranks_);
}

ConcomitantRanks ConcomitantRanks::identity(std::size_t n) {
  std::vector<std::uint32_t> r(n);
  std::iota(r.begin(), r.end(), 1u);
  return ConcomitantRanks(std::move(r));
}

ConcomitantRanks ConcomitantRanks::reversal(std::size_t n) {
  std::vector<std::uint32_t> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = static_cast<std::uint32_t>(n - i);
  return ConcomitantRanks(std::move(r));
}

ConcomitantRanks concomitant_ranks(const PairedSample& sample, const RankingOptions& options) {
  const std::size_t n = sample.size();
  std::vector<std::uint64_t> x_keys, y_keys;
  const bool jitter = options.ties == TiePolicy::Jitter;
  if (jitter) {
    x_keys = jitter_keys(n, options.jitter_seed, 0);
    y_keys = jitter_keys(n, options.jitter_seed, 1);
  }
  const auto by_x = sorting_order(sample.xs(), jitter ? &x_keys : nullptr, "x");
  const auto by_y = sorting_order(sample.ys(), jitter ? &y_keys : nullptr, "y");

  std::vector<std::uint32_t> y_rank(n);
  for (std::size_t pos = 0; pos < n; ++pos) y_rank[by_y[pos]] = static_cast<std::uint32_t>(pos + 1);

  std::vector<std::uint32_t> ranks(n);
  for (std::size_t i = 0; i < n; ++i) ranks[i] = y_rank[by_x[i]];
  return ConcomitantRanks(std::move(ranks));
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw LengthMismatch("x and y have different lengths");
  const std::size_t n = xs.size();
  if (n < 2) throw InputError("pearson needs at least 2 observations");
  // Heavy-tailed samples reach 1e200 and beyond; work on max-scaled copies
  // so the squared deviations stay finite.
  auto max_abs = [](std::span<const double> v) {
    double m = 0.0;
    for (double e : v) m = std::max(m, std::abs(e));
    return m > 0.0 ? m : 1.0;
  };
  const double scale_x = max_abs(xs);
  const double scale_y = max_abs(ys);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i] / scale_x;
    my += ys[i] / scale_y;
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] / scale_x - mx;
    const double dy = ys[i] / scale_y - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw DegenerateSample("pearson is undefined for a constant coordinate");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double pearson(const PairedSample& sample) { return pearson(sample.xs(), sample.ys()); }

std::uint64_t concordant_pairs(const ConcomitantRanks& ranks, Algorithm algo) {
  const std::size_t n = ranks.size();
  if (!use_fast(algo, n)) {
    std::uint64_t count = 0;
    for (std::size_t i = 1; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j) count += ranks[j] < ranks[i];
    }
    return count;
  }
  std::vector<std::uint32_t> work(ranks.ranks().begin(), ranks.ranks().end());
  std::vector<std::uint32_t> scratch(n);
  const std::uint64_t pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  return pairs - count_inversions(work, scratch, 0, n);
}

double kendall(const ConcomitantRanks& ranks, Algorithm algo) {
  const auto n = static_cast<long double>(ranks.size());
  if (ranks.size() < 2) throw InputError("kendall needs n >= 2");
  const long double pairs = n * (n - 1) / 2;
  return static_cast<double>(2.0L * static_cast<long double>(concordant_pairs(ranks, algo)) / pairs - 1.0L);
}

double spearman(const ConcomitantRanks& ranks) {
  const std::size_t n = ranks.size();
  if (n < 2) throw InputError("spearman needs n >= 2");
  WideCount d2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const long long d = static_cast<long long>(ranks[i]) - static_cast<long long>(i + 1);
    d2 += static_cast<WideCount>(d * d);
  }
  const WideCount nn = n;
  const long double denom = to_long_double(nn * nn * nn - nn);
  return static_cast<double>(1.0L - 6.0L * to_long_double(d2) / denom);
}

WideCount weighted_T_max(std::size_t n) {
  const WideCount nn = n;
  return nn * (nn - 1) * (2 * nn - 1) / 6;
}

WideCount weighted_T(const ConcomitantRanks& ranks, Algorithm algo) {
  const std::size_t n = ranks.size();
  WideCount total = 0;
  if (!use_fast(algo, n)) {
    for (std::size_t i = 2; i <= n; ++i) {
      for (std::size_t j = 1; j < i; ++j) {
        if (ranks[j - 1] <= ranks[i - 1]) total += n - i + j;
      }
    }
    return total;
  }
  // Fenwick trees over rank values: how many earlier positions hold a smaller
  // rank, and the sum of those positions.
  std::vector<std::uint64_t> count(n + 1, 0), possum(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    const std::uint32_t r = ranks[i - 1];
    std::uint64_t c = 0, s = 0;
    for (std::size_t k = r - 1; k > 0; k -= k & (~k + 1)) {
      c += count[k];
      s += possum[k];
    }
    total += static_cast<WideCount>(n - i) * c + s;
    for (std::size_t k = r; k <= n; k += k & (~k + 1)) {
      count[k] += 1;
      possum[k] += i;
    }
  }
  return total;
}

double r_new(const ConcomitantRanks& ranks, Algorithm algo) {
  if (ranks.size() < 2) throw InputError("r_new needs n >= 2");
  const long double t = to_long_double(weighted_T(ranks, algo));
  const long double tmax = to_long_double(weighted_T_max(ranks.size()));
  return static_cast<double>(2.0L * t / tmax - 1.0L);
}

double r_tilde(const ConcomitantRanks& ranks) { return (3.0 * kendall(ranks) - spearman(ranks)) / 2.0; }

CorrelationEstimates rank_estimates(const ConcomitantRanks& ranks) {
  CorrelationEstimates out;
  out.n = ranks.size();
  out.spearman = spearman(ranks);
  out.kendall = kendall(ranks);
  out.r_new = r_new(ranks);
  out.r_tilde = (3.0 * out.kendall - out.spearman) / 2.0;
  return out;
}

CorrelationEstimates estimate_all(const PairedSample& sample, const RankingOptions& options) {
  const double p = pearson(sample);
  auto out = rank_estimates(concomitant_ranks(sample, options));
  out.pearson = p;
  return out;
}

}  // namespace rankcorr
