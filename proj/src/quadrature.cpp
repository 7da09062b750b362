#include "rankcorr/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

#include "rankcorr/copulas.hpp"
#include "rankcorr/error.hpp"

namespace rankcorr {

namespace {

// Legendre P_m and P_{m-1} at x by the three-term recurrence.
std::pair<double, double> legendre_pair(std::size_t m, double x) {
  double p0 = 1.0, p1 = x;
  for (std::size_t k = 2; k <= m; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
    p0 = p1;
    p1 = p2;
  }
  return {p1, p0};
}

void check_finite(double value, const UnitPoint& p) {
  if (!std::isfinite(value)) {
    throw NonFiniteIntegrand("integrand is not finite at (" + std::to_string(p.u) + ", " + std::to_string(p.v) +
                             ")");
  }
}

double row_dot(const double* row, const std::vector<double>& w) {
  double s = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * row[j];
  return s;
}

}  // namespace

QuadratureRule gauss_legendre(std::size_t m) {
  if (m == 0) throw ParameterOutOfRange("quadrature needs at least one node");
  QuadratureRule rule;
  rule.nodes.resize(m);
  rule.complements.resize(m);
  rule.weights.resize(m);
  const std::size_t half = (m + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    // Newton iteration on P_m(cos theta) in the angle, so that 1 -/+ x can be
    // formed from half-angle sines without cancellation.
    double theta = std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(m) + 0.5);
    auto derivative = [m](double th, double& value) {
      const double x = std::cos(th);
      const double s = std::sin(th);
      const auto [p, pm1] = legendre_pair(m, x);
      value = p;
      return static_cast<double>(m) * (x * p - pm1) / (-s * s);
    };
    double p = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      const double dp = derivative(theta, p);
      const double step = p / (-std::sin(theta) * dp);
      theta -= step;
      if (std::abs(step) < 1e-17) break;
    }
    const double dp = derivative(theta, p);
    const double sin_half = std::sin(theta / 2.0);
    const double cos_half = std::cos(theta / 2.0);
    const double lower = sin_half * sin_half;  // (1 - x) / 2
    const double upper = cos_half * cos_half;  // (1 + x) / 2
    const double sin_t = std::sin(theta);
    const double w = 1.0 / (sin_t * sin_t * dp * dp);  // half of the [-1,1] weight
    rule.nodes[i] = lower;
    rule.complements[i] = upper;
    rule.weights[i] = w;
    rule.nodes[m - 1 - i] = upper;
    rule.complements[m - 1 - i] = lower;
    rule.weights[m - 1 - i] = w;
  }
  return rule;
}

QuadratureRule graded_gauss_legendre(std::size_t m, int grading) {
  if (grading < 1) throw ParameterOutOfRange("grading exponent must be >= 1");
  QuadratureRule base = gauss_legendre(m);
  if (grading == 1) return base;
  const double p = grading;
  QuadratureRule rule;
  rule.nodes.resize(m);
  rule.complements.resize(m);
  rule.weights.resize(m);
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double s = base.nodes[i];
    const double sb = base.complements[i];
    const double a = std::pow(s, p);
    const double b = std::pow(sb, p);
    rule.nodes[i] = a / (a + b);
    rule.complements[i] = b / (a + b);
    rule.weights[i] = base.weights[i] * p * std::pow(s * sb, p - 1.0) / ((a + b) * (a + b));
    total += rule.weights[i];
  }
  for (auto& w : rule.weights) w /= total;
  return rule;
}

Grid2D::Grid2D(std::shared_ptr<const QuadratureRule> rule, std::vector<double> values)
    : rule_(std::move(rule)), values_(std::move(values)) {
  if (values_.size() != m() * m()) throw InputError("grid values do not match the rule size");
}

Grid2D::Grid2D(std::shared_ptr<const QuadratureRule> rule) : rule_(std::move(rule)), values_(m() * m(), 0.0) {}

UnitPoint Grid2D::point(std::size_t i, std::size_t j) const noexcept {
  return {rule_->nodes[i], rule_->nodes[j], rule_->complements[i], rule_->complements[j]};
}

double Grid2D::integral() const {
  const auto& w = rule_->weights;
  double total = 0.0;
  for (std::size_t i = 0; i < m(); ++i) total += w[i] * row_dot(&values_[i * m()], w);
  return total;
}

Grid2D tabulate(std::shared_ptr<const QuadratureRule> rule, const Integrand& f, unsigned threads) {
  Grid2D grid(std::move(rule));
  const std::size_t m = grid.m();
  auto fill_rows = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        const UnitPoint p = grid.point(i, j);
        grid.at(i, j) = f(p);
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(m)));
  if (threads == 1) {
    fill_rows(0, m);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (m + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(m, begin + chunk);
      if (begin < end) pool.emplace_back(fill_rows, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) check_finite(grid.at(i, j), grid.point(i, j));
  }
  return grid;
}

double integrate(const Integrand& f, std::size_t m, int grading) {
  auto rule = std::make_shared<const QuadratureRule>(graded_gauss_legendre(m, grading));
  return tabulate(std::move(rule), f).integral();
}

Grid2D cumulative_quadrant(const Grid2D& field, Quadrant direction) {
  const std::size_t m = field.m();
  const auto& w = field.rule().weights;
  const bool low_u = direction == Quadrant::LowerLeft || direction == Quadrant::LowerRight;
  const bool low_v = direction == Quadrant::LowerLeft || direction == Quadrant::UpperLeft;

  // Pass 1 along v within each row, pass 2 along u within each column.
  Grid2D partial(field.shared_rule());
  for (std::size_t i = 0; i < m; ++i) {
    double run = 0.0;
    for (std::size_t step = 0; step < m; ++step) {
      const std::size_t j = low_v ? step : m - 1 - step;
      const double term = w[j] * field.at(i, j);
      partial.at(i, j) = run + 0.5 * term;
      run += term;
    }
  }
  Grid2D out(field.shared_rule());
  for (std::size_t j = 0; j < m; ++j) {
    double run = 0.0;
    for (std::size_t step = 0; step < m; ++step) {
      const std::size_t i = low_u ? step : m - 1 - step;
      const double term = w[i] * partial.at(i, j);
      out.at(i, j) = run + 0.5 * term;
      run += term;
    }
  }
  return out;
}

double coefficient_on_grid(const BivariateModel& model, Functional which, std::size_t m, int grading,
                           unsigned threads) {
  auto rule = std::make_shared<const QuadratureRule>(graded_gauss_legendre(m, grading));
  // E[UV] equals the plain integral of C, which needs no density and stays
  // accurate when the density is sharply peaked.
  const Grid2D values = tabulate(
      rule,
      [&](const UnitPoint& p) {
        switch (which) {
          case Functional::RhoS: return model.copula(p);
          case Functional::Tau: return model.copula(p) * model.copula_density(p);
          case Functional::R: {
            const double c = model.copula(p);
            return c * model.copula_density(p) - c;
          }
        }
        return 0.0;
      },
      threads);
  const double e = values.integral();
  switch (which) {
    case Functional::RhoS: return 12.0 * e - 3.0;
    case Functional::Tau: return 4.0 * e - 1.0;
    case Functional::R: return 6.0 * e;
  }
  return 0.0;
}

double coefficient_by_quadrature(const BivariateModel& model, Functional which, const QuadratureOptions& options) {
  std::size_t m = options.m;
  double previous = coefficient_on_grid(model, which, m, options.grading, options.threads);
  while (2 * m <= options.max_m) {
    m *= 2;
    const double current = coefficient_on_grid(model, which, m, options.grading, options.threads);
    if (std::abs(current - previous) < options.tolerance) return current;
    previous = current;
  }
  throw QuadratureNotConverged("coefficient quadrature for " + model.name() + " did not settle within " +
                               std::to_string(options.tolerance) + " by m = " + std::to_string(options.max_m));
}

}  // namespace rankcorr
