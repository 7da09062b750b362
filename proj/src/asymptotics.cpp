#include "rankcorr/asymptotics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

#include "rankcorr/error.hpp"

namespace rankcorr {

namespace {

void require_n(std::size_t n) {
  if (n < 2) throw ParameterOutOfRange("sample size n must be at least 2");
}

// E F(X,Y) = (tau + 1) / 4 and rho_S, from closed forms when the family has
// them, otherwise from quadrature.
struct Moments {
  double tau;
  double rho_s;
};

Moments population_moments(const BivariateModel& model) {
  const auto coeffs = theoretical_coefficients(model);
  return {coeffs.tau, coeffs.rho_s};
}

double tau_closed_form(const BivariateModel& model, bool& available) {
  const double t = model.t();
  available = true;
  switch (model.family()) {
    case Family::FGM:
      // Equals 16 (E[C + Fbar]^2 - 4 (E C)^2) with E[C + Fbar]^2 = 5/18 + t/9 + t^2/150
      // and E C = 1/4 + t/18.
      return 4.0 / 9.0 - 184.0 * t * t / 2025.0;
    case Family::Normal: {
      const double s = std::asin(t / 2.0);
      return 4.0 * (1.0 / 9.0 - 4.0 * s * s / (std::numbers::pi * std::numbers::pi));
    }
    case Family::Pareto: break;
  }
  available = false;
  return 0.0;
}

bool all_close(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(std::abs(a[i] - b[i]) < tol)) return false;
  }
  return true;
}

// Evaluates `compute` at successively doubled m until every reported number
// moves by less than the tolerance.
template <typename Compute>
auto refine(const BivariateModel& model, const QuadratureOptions& options, Compute compute, std::size_t& m_used) {
  std::size_t m = options.m;
  auto previous = compute(m);
  while (2 * m <= options.max_m) {
    m *= 2;
    auto current = compute(m);
    if (all_close(current.first, previous.first, options.tolerance)) {
      m_used = m;
      return current;
    }
    previous = std::move(current);
  }
  throw QuadratureNotConverged("variance quadrature for " + model.name() + " did not settle within " +
                               std::to_string(options.tolerance) + " by m = " + std::to_string(options.max_m));
}

// Per-row partial sums of the conditional route.
enum Sum { kC, kUV, kTauSq, kMain, kCB, kQ2, kBA, kQ3, kA2, kQ4, kSums };

}  // namespace

ConditionalEvaluation evaluate_conditional(const BivariateModel& model, std::size_t m, int grading, bool with_rnew,
                                           unsigned threads) {
  const QuadratureRule rule = graded_gauss_legendre(m, grading);
  const auto& x = rule.nodes;
  const auto& xb = rule.complements;
  const auto& w = rule.weights;
  // Integral over s of C at (s, v) or (u, s).
  auto column_integral = [&](double v, double v_bar) {
    double total = 0.0;
    for (std::size_t k = 0; k < m; ++k) total += w[k] * model.copula(UnitPoint{x[k], v, xb[k], v_bar});
    return total;
  };
  auto row_integral = [&](double u, double u_bar) {
    double total = 0.0;
    for (std::size_t k = 0; k < m; ++k) total += w[k] * model.copula(UnitPoint{u, x[k], u_bar, xb[k]});
    return total;
  };

  std::vector<std::array<double, kSums>> rows(m);
  auto do_row = [&](std::size_t i) {
    auto& acc = rows[i];
    acc.fill(0.0);
    const double u = x[i];
    const double b = with_rnew ? row_integral(u, xb[i]) - u * u / 2.0 : 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const UnitPoint p = model.conditional_point(u, xb[i], x[j], xb[j]);
      const double c = model.copula(p);
      const double s = model.copula_survival(p);
      const double wj = w[j];
      acc[kC] += wj * c;
      acc[kUV] += wj * u * p.v;
      acc[kTauSq] += wj * (c + s) * (c + s);
      if (!with_rnew) continue;
      const double a = p.v - xb[i] * (1.0 + u) / 2.0 - column_integral(p.v, p.v_bar);
      const double mixed = (1.0 + u) * s + (1.0 - u) * c;
      acc[kMain] += wj * mixed * mixed;
      acc[kCB] += wj * c * b;
      acc[kQ2] += wj * u * (c - s) * b;
      acc[kBA] += wj * b * a;
      acc[kQ3] += wj * (c + s) * a;
      acc[kA2] += wj * a * a;
      acc[kQ4] += wj * u * (s - c) * a;
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(m)));
  if (workers == 1) {
    for (std::size_t i = 0; i < m; ++i) do_row(i);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < m; i += workers) do_row(i);
      });
    }
    for (auto& th : pool) th.join();
  }

  std::array<double, kSums> e{};
  for (std::size_t i = 0; i < m; ++i) {
    for (int k = 0; k < kSums; ++k) e[k] += w[i] * rows[i][k];
  }
  for (double value : e) {
    if (!std::isfinite(value)) throw NonFiniteIntegrand("variance integrand for " + model.name() + " is not finite");
  }
  ConditionalEvaluation out;
  out.tau = 4.0 * e[kC] - 1.0;
  out.rho_s = 12.0 * e[kUV] - 3.0;
  out.var_tau = 16.0 * (e[kTauSq] - 4.0 * e[kC] * e[kC]);
  if (with_rnew) {
    const double centre = (out.tau + 1.0) / 2.0 - (out.rho_s + 1.0) / 4.0;
    RnewComponents c;
    c.main = e[kMain];
    c.centering = centre * centre;
    c.q1 = -4.0 * e[kCB];
    c.q2 = 4.0 * e[kQ2] - 2.0 * e[kBA];
    c.q3 = 2.0 * e[kQ3];
    c.q4 = e[kA2] + 2.0 * e[kQ4];
    out.rnew = c;
  }
  return out;
}

std::string_view estimator_name(Estimator e) noexcept {
  switch (e) {
    case Estimator::Pearson: return "pearson";
    case Estimator::Kendall: return "kendall";
    case Estimator::Rnew: return "r_new";
  }
  return "?";
}

KernelGrids KernelGrids::build(const BivariateModel& model, std::size_t m, int grading, unsigned threads) {
  auto rule = std::make_shared<const QuadratureRule>(graded_gauss_legendre(m, grading));
  Grid2D copula = tabulate(rule, [&](const UnitPoint& p) { return model.copula(p); }, threads);
  Grid2D density = tabulate(rule, [&](const UnitPoint& p) { return model.copula_density(p); }, threads);
  const auto& w = rule->weights;
  const auto& u = rule->nodes;
  std::vector<double> k(m, 0.0), b(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double l = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double c = copula.at(i, j);
      l += w[j] * c;
      k[j] += w[i] * c;
    }
    b[i] = l - u[i] * u[i] / 2.0;
  }
  return KernelGrids(std::move(copula), std::move(density), std::move(k), std::move(b));
}

double KernelGrids::survival(std::size_t i, std::size_t j) const noexcept {
  const auto& r = rule();
  return (r.complements[i] - r.nodes[j]) + copula_.at(i, j);
}

double KernelGrids::a(std::size_t i, std::size_t j) const noexcept {
  const auto& r = rule();
  const double u = r.nodes[i];
  return r.nodes[j] - r.complements[i] * (1.0 + u) / 2.0 - k_[j];
}

KernelGrids::QuadrantSums KernelGrids::quadrant_sums() const {
  Grid2D field(copula_.shared_rule());
  for (std::size_t i = 0; i < m(); ++i) {
    for (std::size_t j = 0; j < m(); ++j) field.at(i, j) = rule().nodes[i] * density_.at(i, j);
  }
  return {cumulative_quadrant(field, Quadrant::LowerLeft), cumulative_quadrant(field, Quadrant::UpperRight)};
}

double expected_r_n(const BivariateModel& model, std::size_t n) {
  require_n(n);
  const auto [tau, rho_s] = population_moments(model);
  const double r = (3.0 * tau - rho_s) / 2.0;
  const double ef = (tau + 1.0) / 4.0;
  const double d = 2.0 * static_cast<double>(n) - 1.0;
  return (1.0 - 3.0 / d) * r - 3.0 / d + 12.0 * ef / d;
}

double expected_r_tilde(const BivariateModel& model, std::size_t n) {
  require_n(n);
  const auto [tau, rho_s] = population_moments(model);
  const double nn = static_cast<double>(n);
  return (3.0 * nn * tau - (nn - 2.0) * rho_s) / (2.0 * (nn + 1.0));
}

double var_tau_on_grid(const KernelGrids& g) {
  const double ec = g.expect([&](std::size_t i, std::size_t j) { return g.copula().at(i, j); });
  const double e2 = g.expect([&](std::size_t i, std::size_t j) {
    const double s = g.copula().at(i, j) + g.survival(i, j);
    return s * s;
  });
  return 16.0 * (e2 - 4.0 * ec * ec);
}

RnewComponents var_r_components_on_grid(const KernelGrids& g) {
  const auto& u = g.rule().nodes;
  const auto& v = g.rule().nodes;
  RnewComponents out;
  // One pass accumulates every expectation the leading term needs.
  double e_c = 0.0, e_uv = 0.0, main = 0.0, cb = 0.0, q2_first = 0.0, ba = 0.0, q3 = 0.0, a2 = 0.0, q4_second = 0.0;
  const auto& w = g.rule().weights;
  for (std::size_t i = 0; i < g.m(); ++i) {
    double r_c = 0.0, r_uv = 0.0, r_main = 0.0, r_cb = 0.0, r_q2 = 0.0, r_ba = 0.0, r_q3 = 0.0, r_a2 = 0.0,
           r_q4 = 0.0;
    const double ui = u[i];
    const double bi = g.b(i);
    for (std::size_t j = 0; j < g.m(); ++j) {
      const double wc = w[j] * g.density().at(i, j);
      const double c = g.copula().at(i, j);
      const double s = g.survival(i, j);
      const double a = g.a(i, j);
      const double mixed = (1.0 + ui) * s + (1.0 - ui) * c;
      r_c += wc * c;
      r_uv += wc * ui * v[j];
      r_main += wc * mixed * mixed;
      r_cb += wc * c * bi;
      r_q2 += wc * ui * (c - s) * bi;
      r_ba += wc * bi * a;
      r_q3 += wc * (c + s) * a;
      r_a2 += wc * a * a;
      r_q4 += wc * ui * (s - c) * a;
    }
    e_c += w[i] * r_c;
    e_uv += w[i] * r_uv;
    main += w[i] * r_main;
    cb += w[i] * r_cb;
    q2_first += w[i] * r_q2;
    ba += w[i] * r_ba;
    q3 += w[i] * r_q3;
    a2 += w[i] * r_a2;
    q4_second += w[i] * r_q4;
  }
  const double tau = 4.0 * e_c - 1.0;
  const double rho_s = 12.0 * e_uv - 3.0;
  const double centre = (tau + 1.0) / 2.0 - (rho_s + 1.0) / 4.0;
  out.main = main;
  out.centering = centre * centre;
  out.q1 = -4.0 * cb;
  // 2 E[B A_minus] - 2 E[B A_plus] = -2 E[B A].
  out.q2 = 4.0 * q2_first - 2.0 * ba;
  // Twice the single integral of (C + Fbar) A; see the variance expansion of T_n.
  out.q3 = 2.0 * q3;
  out.q4 = a2 + 2.0 * q4_second;
  return out;
}

double rnew_coefficient(const RnewComponents& c) {
  return 36.0 * (c.main - c.centering + c.q1 + c.q2 + c.q3 + c.q4);
}

VarianceReport var_tau_leading(const BivariateModel& model, VarianceMethod method, const QuadratureOptions& options) {
  VarianceReport report;
  report.estimator = Estimator::Kendall;
  report.model = model;
  bool available = false;
  const double closed = tau_closed_form(model, available);
  if (method == VarianceMethod::ClosedForm && !available) {
    throw ParameterOutOfRange("no closed form for the Kendall variance of " + model.name());
  }
  if (available && method != VarianceMethod::Quadrature) {
    report.leading_coeff = closed;
    report.method = Method::ClosedForm;
    return report;
  }
  std::size_t m_used = 0;
  const auto result = refine(
      model, options,
      [&](std::size_t m) {
        const double value = evaluate_conditional(model, m, options.grading, false, options.threads).var_tau;
        return std::pair{std::vector<double>{value}, value};
      },
      m_used);
  report.leading_coeff = result.second;
  report.method = Method::Quadrature;
  report.grid_m = m_used;
  return report;
}

VarianceReport var_r_leading(const BivariateModel& model, VarianceMethod method, const QuadratureOptions& options) {
  VarianceReport report;
  report.estimator = Estimator::Rnew;
  report.model = model;
  const bool available = model.family() == Family::FGM;
  if (method == VarianceMethod::ClosedForm && !available) {
    throw ParameterOutOfRange("no closed form for the r_n variance of " + model.name());
  }
  if (available && method != VarianceMethod::Quadrature) {
    const double t = model.t();
    report.leading_coeff = 0.25 - 7.0 * t * t / 180.0;
    report.method = Method::ClosedForm;
    return report;
  }
  std::size_t m_used = 0;
  const auto result = refine(
      model, options,
      [&](std::size_t m) {
        const RnewComponents c = *evaluate_conditional(model, m, options.grading, true, options.threads).rnew;
        return std::pair{std::vector<double>{rnew_coefficient(c), c.main, c.q1, c.q2, c.q3, c.q4}, c};
      },
      m_used);
  report.leading_coeff = rnew_coefficient(result.second);
  report.components = result.second;
  report.method = Method::Quadrature;
  report.grid_m = m_used;
  return report;
}

VarianceReport var_pearson_normal(double t) {
  const auto model = BivariateModel::normal(t);
  VarianceReport report;
  report.estimator = Estimator::Pearson;
  report.model = model;
  const double s = 1.0 - t * t;
  report.leading_coeff = s * s;
  report.method = Method::ClosedForm;
  return report;
}

double are_crossover_normal() {
  // Pearson minus Kendall: positive for small t, negative near 1.
  auto gap = [](double t) {
    const double s = std::asin(t / 2.0);
    const double kendall = 4.0 * (1.0 / 9.0 - 4.0 * s * s / (std::numbers::pi * std::numbers::pi));
    const double pearson = (1.0 - t * t) * (1.0 - t * t);
    return pearson - kendall;
  };
  double lo = 0.3, hi = 0.95;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace rankcorr
