#include "rankcorr/normal.hpp"

#include <algorithm>
#include <array>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <numbers>

#include "rankcorr/error.hpp"
#include "rankcorr/quadrature.hpp"

namespace rankcorr::normal {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Positive half of an even-order Gauss-Legendre rule on [-1, 1].
struct HalfRule {
  std::array<double, 10> x{};
  std::array<double, 10> w{};
  int size = 0;
};

HalfRule half_rule(int order) {
  const auto rule = gauss_legendre(static_cast<std::size_t>(order));
  HalfRule half;
  half.size = order / 2;
  for (int i = 0; i < half.size; ++i) {
    // Map nodes back from (0, 1) to [-1, 1]; keep the upper half.
    const std::size_t idx = static_cast<std::size_t>(order - 1 - i);
    half.x[static_cast<std::size_t>(i)] = rule.nodes[idx] - rule.complements[idx];
    half.w[static_cast<std::size_t>(i)] = 2.0 * rule.weights[idx];
  }
  return half;
}

const HalfRule& rule_for(double abs_r) {
  static const HalfRule r6 = half_rule(6);
  static const HalfRule r12 = half_rule(12);
  static const HalfRule r20 = half_rule(20);
  if (abs_r < 0.3) return r6;
  if (abs_r < 0.75) return r12;
  return r20;
}

}  // namespace

double pdf(double x) noexcept { return std::exp(-0.5 * x * x) / std::sqrt(kTwoPi); }

double cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double sf(double x) noexcept { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ParameterOutOfRange("normal quantile needs p in (0, 1)");
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double upper_quantile(double q) {
  if (!(q > 0.0 && q < 1.0)) throw ParameterOutOfRange("normal quantile needs q in (0, 1)");
  return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * q);
}

// Drezner-Wesolowsky integration as refined by Genz (2004).
double bivariate_upper(double h, double k, double r) {
  if (r == 0.0) return sf(h) * sf(k);
  const double abs_r = std::abs(r);
  const HalfRule& rule = rule_for(abs_r);
  double hk = h * k;
  double bvn = 0.0;
  if (abs_r < 0.925) {
    const double hs = (h * h + k * k) / 2.0;
    const double asr = std::asin(r);
    for (int i = 0; i < rule.size; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      for (double sign : {-1.0, 1.0}) {
        const double sn = std::sin(asr * (1.0 + sign * rule.x[ui]) / 2.0);
        bvn += rule.w[ui] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
      }
    }
    bvn = bvn * asr / (2.0 * kTwoPi) + sf(h) * sf(k);
  } else {
    if (r < 0.0) {
      k = -k;
      hk = -hk;
    }
    if (abs_r < 1.0) {
      const double as = (1.0 - r) * (1.0 + r);
      double a = std::sqrt(as);
      const double bs = (h - k) * (h - k);
      const double c = (4.0 - hk) / 8.0;
      const double d = (12.0 - hk) / 16.0;
      double asr = -(bs / as + hk) / 2.0;
      if (asr > -100.0) {
        bvn = a * std::exp(asr) * (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 + c * d * as * as / 5.0);
      }
      if (hk > -100.0) {
        const double b = std::sqrt(bs);
        const double sp = std::sqrt(kTwoPi) * cdf(-b / a);
        bvn -= std::exp(-hk / 2.0) * sp * b * (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
      }
      a /= 2.0;
      for (int i = 0; i < rule.size; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        for (double sign : {-1.0, 1.0}) {
          const double xs = std::pow(a * (sign * rule.x[ui] + 1.0), 2);
          const double rs = std::sqrt(1.0 - xs);
          asr = -(bs / xs + hk) / 2.0;
          if (asr > -100.0) {
            const double sp = 1.0 + c * xs * (1.0 + d * xs);
            const double ep = std::exp(-hk * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs;
            bvn += a * rule.w[ui] * std::exp(asr) * (ep - sp);
          }
        }
      }
      bvn = -bvn / kTwoPi;
    }
    if (r > 0.0) {
      bvn += sf(std::max(h, k));
    } else if (h >= k) {
      bvn = -bvn;
    } else {
      const double span = h < 0.0 ? cdf(k) - cdf(h) : sf(h) - sf(k);
      bvn = span - bvn;
    }
  }
  return std::clamp(bvn, 0.0, 1.0);
}

double bivariate_cdf(double x, double y, double r) { return bivariate_upper(-x, -y, r); }

double bivariate_pdf(double x, double y, double r) noexcept {
  const double s = 1.0 - r * r;
  return std::exp(-(x * x - 2.0 * r * x * y + y * y) / (2.0 * s)) / (kTwoPi * std::sqrt(s));
}

}  // namespace rankcorr::normal
