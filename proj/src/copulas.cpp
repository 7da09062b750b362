#include "rankcorr/copulas.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rankcorr/error.hpp"
#include "rankcorr/normal.hpp"

namespace rankcorr {

namespace {

// Survival copula of the Pareto law: the Clayton copula with theta = 1/t,
//   (a^-theta + b^-theta - 1)^(-t),
// rewritten around min(a, b) so that nothing overflows for small t.
double clayton(double a, double b, double t) {
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  if (lo <= 0.0) return 0.0;
  const double theta = 1.0 / t;
  const double k = 1.0 + std::pow(lo / hi, theta) - std::pow(lo, theta);
  return lo * std::pow(k, -t);
}

double clayton_density(double a, double b, double t) {
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  const double theta = 1.0 / t;
  const double ratio = std::pow(lo / hi, theta);
  const double k = 1.0 + ratio - std::pow(lo, theta);
  return (1.0 + theta) * ratio * std::pow(k, -t - 2.0) / hi;
}

// Normal score of a copula coordinate, using whichever of u, 1-u is small.
double normal_score(double u, double u_bar) {
  return u <= 0.5 ? normal::quantile(u) : -normal::quantile(u_bar);
}

UnitPoint unit_point(double u, double v) { return {u, v, 1.0 - u, 1.0 - v}; }

void check_unit(double u, const char* what) {
  if (!(u >= 0.0 && u <= 1.0)) throw ParameterOutOfRange(std::string(what) + " must lie in [0, 1]");
}

}  // namespace

std::string_view family_name(Family family) noexcept {
  switch (family) {
    case Family::FGM: return "fgm";
    case Family::Normal: return "normal";
    case Family::Pareto: return "pareto";
  }
  return "?";
}

Family parse_family(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "fgm") return Family::FGM;
  if (lower == "normal" || lower == "gaussian") return Family::Normal;
  if (lower == "pareto") return Family::Pareto;
  throw ParameterOutOfRange("unknown model family '" + std::string(text) + "' (expected fgm, normal or pareto)");
}

std::string_view method_name(Method method) noexcept {
  return method == Method::ClosedForm ? "closed_form" : "quadrature";
}

BivariateModel::BivariateModel(Family family, double t) : family_(family), t_(t) {
  const bool ok = [&] {
    if (!std::isfinite(t)) return false;
    switch (family) {
      case Family::FGM: return t >= -1.0 && t <= 1.0;
      case Family::Normal: return t > -1.0 && t < 1.0;
      case Family::Pareto: return t > 0.0;
    }
    return false;
  }();
  if (!ok) {
    std::ostringstream msg;
    msg << "parameter t = " << t << " is outside the range of the " << family_name(family) << " family";
    throw ParameterOutOfRange(msg.str());
  }
}

std::string BivariateModel::name() const {
  std::ostringstream out;
  out << family_name(family_) << "(t=" << t_ << ")";
  return out.str();
}

double BivariateModel::cdf(double x, double y) const {
  switch (family_) {
    case Family::FGM: {
      const double u = std::clamp(x, 0.0, 1.0);
      const double v = std::clamp(y, 0.0, 1.0);
      return u * v + t_ * (u - u * u) * (v - v * v);
    }
    case Family::Normal: return normal::bivariate_cdf(x, y, t_);
    case Family::Pareto:
      if (x <= 0.0 || y <= 0.0) return 0.0;
      return 1.0 - std::pow(1.0 + x, -t_) - std::pow(1.0 + y, -t_) + std::pow(1.0 + x + y, -t_);
  }
  return 0.0;
}

double BivariateModel::survival(double x, double y) const {
  switch (family_) {
    case Family::FGM: {
      const double u = std::clamp(x, 0.0, 1.0);
      const double v = std::clamp(y, 0.0, 1.0);
      return (1.0 - u) * (1.0 - v) + t_ * u * (1.0 - u) * v * (1.0 - v);
    }
    case Family::Normal: return normal::bivariate_upper(x, y, t_);
    case Family::Pareto: return std::pow(1.0 + std::max(x, 0.0) + std::max(y, 0.0), -t_);
  }
  return 0.0;
}

double BivariateModel::density(double x, double y) const {
  switch (family_) {
    case Family::FGM:
      if (x < 0.0 || x > 1.0 || y < 0.0 || y > 1.0) return 0.0;
      return 1.0 + t_ * (1.0 - 2.0 * x) * (1.0 - 2.0 * y);
    case Family::Normal: return normal::bivariate_pdf(x, y, t_);
    case Family::Pareto:
      if (x <= 0.0 || y <= 0.0) return 0.0;
      return t_ * (t_ + 1.0) * std::pow(1.0 + x + y, -t_ - 2.0);
  }
  return 0.0;
}

double BivariateModel::marginal_cdf_x(double x) const {
  switch (family_) {
    case Family::FGM: return std::clamp(x, 0.0, 1.0);
    case Family::Normal: return normal::cdf(x);
    case Family::Pareto: return x <= 0.0 ? 0.0 : -std::expm1(-t_ * std::log1p(x));
  }
  return 0.0;
}

double BivariateModel::marginal_cdf_y(double y) const { return marginal_cdf_x(y); }

double BivariateModel::marginal_pdf_x(double x) const {
  switch (family_) {
    case Family::FGM: return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0;
    case Family::Normal: return normal::pdf(x);
    case Family::Pareto: return x <= 0.0 ? 0.0 : t_ * std::pow(1.0 + x, -t_ - 1.0);
  }
  return 0.0;
}

double BivariateModel::marginal_pdf_y(double y) const { return marginal_pdf_x(y); }

double BivariateModel::quantile_x(double u) const {
  check_unit(u, "probability");
  switch (family_) {
    case Family::FGM: return u;
    case Family::Normal: return normal_score(u, 1.0 - u);
    case Family::Pareto: return std::expm1(-std::log1p(-u) / t_);
  }
  return 0.0;
}

double BivariateModel::quantile_y(double v) const { return quantile_x(v); }

double BivariateModel::copula(const UnitPoint& p) const {
  switch (family_) {
    case Family::FGM: return p.u * p.v + t_ * p.u * p.u_bar * p.v * p.v_bar;
    case Family::Normal:
      if (p.u <= 0.0 || p.v <= 0.0) return 0.0;
      if (p.u_bar <= 0.0) return p.v;
      if (p.v_bar <= 0.0) return p.u;
      return normal::bivariate_cdf(normal_score(p.u, p.u_bar), normal_score(p.v, p.v_bar), t_);
    case Family::Pareto: return (p.u - p.v_bar) + clayton(p.u_bar, p.v_bar, t_);
  }
  return 0.0;
}

double BivariateModel::copula(double u, double v) const {
  check_unit(u, "u");
  check_unit(v, "v");
  return copula(unit_point(u, v));
}

double BivariateModel::copula_survival(const UnitPoint& p) const {
  switch (family_) {
    case Family::FGM: return p.u_bar * p.v_bar + t_ * p.u * p.u_bar * p.v * p.v_bar;
    case Family::Normal:
      return normal::bivariate_upper(normal_score(p.u, p.u_bar), normal_score(p.v, p.v_bar), t_);
    case Family::Pareto: return clayton(p.u_bar, p.v_bar, t_);
  }
  return 0.0;
}

double BivariateModel::copula_density(const UnitPoint& p) const {
  switch (family_) {
    case Family::FGM: return 1.0 + t_ * (p.u_bar - p.u) * (p.v_bar - p.v);
    case Family::Normal: {
      const double x = normal_score(p.u, p.u_bar);
      const double y = normal_score(p.v, p.v_bar);
      const double s = 1.0 - t_ * t_;
      return std::exp(-(t_ * t_ * (x * x + y * y) - 2.0 * t_ * x * y) / (2.0 * s)) / std::sqrt(s);
    }
    case Family::Pareto: return clayton_density(p.u_bar, p.v_bar, t_);
  }
  return 0.0;
}

double BivariateModel::copula_density(double u, double v) const { return copula_density(unit_point(u, v)); }

double BivariateModel::conditional_quantile(double u, double w) const {
  switch (family_) {
    case Family::FGM: {
      // Solve v + a(v - v^2) = w, a = t(1 - 2u), for the root in [0, 1].
      const double a = t_ * (1.0 - 2.0 * u);
      if (std::abs(a) < 1e-14) return w;
      const double disc = (1.0 + a) * (1.0 + a) - 4.0 * a * w;
      return 2.0 * w / ((1.0 + a) + std::sqrt(std::max(disc, 0.0)));
    }
    case Family::Normal: {
      const double x = normal::quantile(u);
      const double z = normal::quantile(w);
      return normal::cdf(t_ * x + std::sqrt(1.0 - t_ * t_) * z);
    }
    case Family::Pareto: {
      const double x = quantile_x(u);
      const double y = (1.0 + x) * std::expm1(-std::log1p(-w) / (t_ + 1.0));
      return marginal_cdf_y(y);
    }
  }
  return 0.0;
}

UnitPoint BivariateModel::conditional_point(double u, double u_bar, double w, double w_bar) const {
  switch (family_) {
    case Family::FGM: {
      const double v = conditional_quantile(u, w);
      return {u, v, u_bar, 1.0 - v};
    }
    case Family::Normal: {
      const double y = t_ * normal_score(u, u_bar) + std::sqrt(1.0 - t_ * t_) * normal_score(w, w_bar);
      return {u, normal::cdf(y), u_bar, normal::sf(y)};
    }
    case Family::Pareto: {
      // (1 - U, 1 - V) is Clayton with theta = 1/t. Given 1 - U = a, the
      // conditional law of 1 - V at level q = 1 - w has quantile b solving
      //   b^-theta = 1 + a^-theta (q^(-theta/(1+theta)) - 1),
      // evaluated on the log scale.
      if (w_bar <= 0.0) return {u, 1.0, u_bar, 0.0};
      const double theta = 1.0 / t_;
      const double g = std::expm1(-theta / (1.0 + theta) * std::log(w_bar));
      if (g <= 0.0 || u_bar <= 0.0) return {u, 0.0, u_bar, 1.0};
      const double z = std::log(g) - theta * std::log(u_bar);
      const double lp = z > 30.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
      const double log_b = -lp / theta;
      return {u, -std::expm1(log_b), u_bar, std::exp(log_b)};
    }
  }
  return {u, w, u_bar, w_bar};
}

void BivariateModel::sample_into(std::span<double> xs, std::span<double> ys, RandomStream& rng) const {
  const std::size_t n = xs.size();
  const double s = std::sqrt(std::max(0.0, 1.0 - t_ * t_));
  for (std::size_t i = 0; i < n; ++i) {
    const double u1 = rng.uniform();
    const double u2 = rng.uniform();
    switch (family_) {
      case Family::FGM:
        xs[i] = u1;
        ys[i] = conditional_quantile(u1, u2);
        break;
      case Family::Normal: {
        const double z1 = normal::quantile(u1);
        xs[i] = z1;
        ys[i] = t_ * z1 + s * normal::quantile(u2);
        break;
      }
      case Family::Pareto: {
        // u1, u2 play the role of survival probabilities.
        const double x = std::expm1(-std::log(u1) / t_);
        xs[i] = x;
        ys[i] = (1.0 + x) * std::expm1(-std::log(u2) / (t_ + 1.0));
        break;
      }
    }
  }
}

PairedSample BivariateModel::sample(std::size_t n, RandomStream& rng) const {
  if (n < 2) throw ParameterOutOfRange("a paired sample needs n >= 2; use sample_into for single draws");
  std::vector<double> xs(n), ys(n);
  sample_into(xs, ys, rng);
  return PairedSample(std::move(xs), std::move(ys));
}

Copula copula_of(const BivariateModel& model) { return Copula(model); }

TheoreticalCoefficients theoretical_coefficients(const BivariateModel& model, const QuadratureOptions& options) {
  const double t = model.t();
  TheoreticalCoefficients out;
  switch (model.family()) {
    case Family::FGM:
      out.rho = t / 3.0;
      out.rho_s = t / 3.0;
      out.tau = 2.0 * t / 9.0;
      out.r = t / 6.0;
      break;
    case Family::Normal: {
      const double pi = std::numbers::pi;
      out.rho = t;
      out.rho_s = 6.0 / pi * std::asin(t / 2.0);
      out.tau = 2.0 / pi * std::asin(t);
      out.r = 3.0 / pi * (std::asin(t) - std::asin(t / 2.0));
      break;
    }
    case Family::Pareto:
      if (t > 2.0) out.rho = 1.0 / t;
      out.tau = 1.0 / (2.0 * t + 1.0);
      out.rho_s = coefficient_by_quadrature(model, Functional::RhoS, options);
      // r = (3 tau - rho_S)/2 with the exact tau; only rho_S needs quadrature.
      out.r = (3.0 * out.tau - out.rho_s) / 2.0;
      out.rho_s_method = Method::Quadrature;
      out.r_method = Method::Quadrature;
      break;
  }
  return out;
}

}  // namespace rankcorr
