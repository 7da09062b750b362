#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "rankcorr/rankstats.hpp"

using namespace rankcorr;

namespace {

PairedSample random_sample(std::mt19937_64& gen, std::size_t n) {
  std::normal_distribution<double> z;
  std::uniform_real_distribution<double> rho(-0.95, 0.95);
  const double r = rho(gen);
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = z(gen);
    y[i] = r * x[i] + std::sqrt(1 - r * r) * z(gen);
  }
  return PairedSample(std::move(x), std::move(y));
}

}  // namespace

TEST_CASE("randomized invariants") {
  std::mt19937_64 gen(31337);
  std::uniform_int_distribution<std::size_t> size(2, 300);
  for (int rep = 0; rep < 300; ++rep) {
    const auto s = random_sample(gen, size(gen));
    const auto e = estimate_all(s);
    for (double v : {e.pearson, e.spearman, e.kendall, e.r_new, e.r_tilde}) {
      CHECK(v >= -1.0);
      CHECK(v <= 1.0);
    }
    CHECK(e.r_tilde == doctest::Approx((3 * e.kendall - e.spearman) / 2).epsilon(1e-14));

    // Strictly increasing transforms leave every rank coefficient unchanged.
    std::vector<double> tx(s.size()), ty(s.size()), ny(s.size()), nx(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      tx[i] = std::exp(s.xs()[i]);
      ty[i] = std::pow(s.ys()[i], 3) + s.ys()[i];
      nx[i] = -s.xs()[i];
      ny[i] = -s.ys()[i];
    }
    const auto t = estimate_all(PairedSample(tx, ty));
    CHECK(t.spearman == e.spearman);
    CHECK(t.kendall == e.kendall);
    CHECK(t.r_new == e.r_new);

    // Reversing either coordinate negates them.
    for (const auto& flipped : {estimate_all(PairedSample(std::vector<double>(s.xs().begin(), s.xs().end()), ny)),
                                estimate_all(PairedSample(nx, std::vector<double>(s.ys().begin(), s.ys().end())))}) {
      CHECK(flipped.kendall == doctest::Approx(-e.kendall).epsilon(1e-14));
      CHECK(flipped.spearman == doctest::Approx(-e.spearman).epsilon(1e-14));
      CHECK(flipped.r_new == doctest::Approx(-e.r_new).epsilon(1e-14));
      CHECK(flipped.pearson == doctest::Approx(-e.pearson).epsilon(1e-12));
    }
  }
}

TEST_CASE("every permutation of small n: fast equals naive") {
  for (std::size_t n = 2; n <= 7; ++n) {
    std::vector<std::uint32_t> p(n);
    std::iota(p.begin(), p.end(), 1u);
    do {
      const ConcomitantRanks r(p);
      REQUIRE(weighted_T(r, Algorithm::Fast) == weighted_T(r, Algorithm::Naive));
      REQUIRE(concordant_pairs(r, Algorithm::Fast) == concordant_pairs(r, Algorithm::Naive));
    } while (std::next_permutation(p.begin(), p.end()));
  }
}
