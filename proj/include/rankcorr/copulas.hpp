#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "rankcorr/quadrature.hpp"
#include "rankcorr/random.hpp"
#include "rankcorr/rankstats.hpp"

namespace rankcorr {

enum class Family { FGM, Normal, Pareto };

std::string_view family_name(Family family) noexcept;
/// Accepts "fgm", "normal", "pareto" (case-insensitive).
Family parse_family(std::string_view text);

/// One of the three parametric bivariate laws, fixed at parameter t.
///
///  FGM:    uniform margins on [0,1], F(x,y) = xy + t(x - x^2)(y - y^2), t in [-1, 1]
///  Normal: standard normal margins, correlation t in (-1, 1)
///  Pareto: F(x,y) = 1 - (1+x)^-t - (1+y)^-t + (1+x+y)^-t on x, y > 0, t > 0
///
/// Immutable; every member is a pure function.
class BivariateModel {
 public:
  BivariateModel(Family family, double t);

  static BivariateModel fgm(double t) { return {Family::FGM, t}; }
  static BivariateModel normal(double t) { return {Family::Normal, t}; }
  static BivariateModel pareto(double t) { return {Family::Pareto, t}; }

  Family family() const noexcept { return family_; }
  double t() const noexcept { return t_; }
  std::string name() const;

  // Original scale.
  double cdf(double x, double y) const;
  double survival(double x, double y) const;
  double density(double x, double y) const;
  double marginal_cdf_x(double x) const;
  double marginal_cdf_y(double y) const;
  double marginal_pdf_x(double x) const;
  double marginal_pdf_y(double y) const;
  double quantile_x(double u) const;
  double quantile_y(double v) const;

  // Copula scale, u = H(x), v = G(y).
  double copula(double u, double v) const;
  double copula(const UnitPoint& p) const;
  double copula_density(double u, double v) const;
  double copula_density(const UnitPoint& p) const;
  /// Copula survival 1 - u - v + C(u, v).
  double copula_survival(const UnitPoint& p) const;
  /// Inverse in v of the conditional distribution P(V <= v | U = u).
  double conditional_quantile(double u, double w) const;
  /// The point (u, v) with v = conditional_quantile(u, w), carrying accurate
  /// complements 1 - u and 1 - v. Takes u and w with their complements.
  UnitPoint conditional_point(double u, double u_bar, double w, double w_bar) const;

  /// n i.i.d. draws in the original scale.
  PairedSample sample(std::size_t n, RandomStream& rng) const;
  /// Fills preallocated buffers; avoids PairedSample's validation pass.
  void sample_into(std::span<double> xs, std::span<double> ys, RandomStream& rng) const;

 private:
  Family family_;
  double t_;
};

/// The copula of a model as a standalone capability: C and c on (0,1)^2.
class Copula {
 public:
  explicit Copula(BivariateModel model) : model_(model) {}
  double operator()(double u, double v) const { return model_.copula(u, v); }
  double density(double u, double v) const { return model_.copula_density(u, v); }
  const BivariateModel& model() const noexcept { return model_; }

 private:
  BivariateModel model_;
};

Copula copula_of(const BivariateModel& model);

enum class Method { ClosedForm, Quadrature };
std::string_view method_name(Method method) noexcept;

struct TheoreticalCoefficients {
  std::optional<double> rho;  // absent when second moments do not exist
  double rho_s = 0.0;
  double tau = 0.0;
  double r = 0.0;
  Method rho_method = Method::ClosedForm;
  Method rho_s_method = Method::ClosedForm;
  Method tau_method = Method::ClosedForm;
  Method r_method = Method::ClosedForm;
};

/// Closed forms where known; Pareto rho_S and r come from quadrature.
TheoreticalCoefficients theoretical_coefficients(const BivariateModel& model, const QuadratureOptions& options = {
    .m = 512, .grading = 2, .tolerance = 1e-10, .max_m = 4096, .threads = 1});

}  // namespace rankcorr
