#pragma once

#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "rankcorr/copulas.hpp"
#include "rankcorr/quadrature.hpp"

namespace rankcorr {

enum class Estimator { Pearson, Kendall, Rnew };
std::string_view estimator_name(Estimator e) noexcept;

/// Which evaluation route a caller asks for. Auto prefers a closed form.
enum class VarianceMethod { Auto, ClosedForm, Quadrature };

/// Terms of the leading variance coefficient of r_n:
///   36 * (main - centering + q1 + q2 + q3 + q4).
struct RnewComponents {
  double main = 0.0;       // E[(1 + U) Fbar + (1 - U) C]^2
  double centering = 0.0;  // ((tau + 1)/2 - (rho_S + 1)/4)^2
  double q1 = 0.0;
  double q2 = 0.0;
  double q3 = 0.0;
  double q4 = 0.0;
};

struct VarianceReport {
  Estimator estimator = Estimator::Kendall;
  BivariateModel model = BivariateModel::fgm(0.0);
  /// c such that Var(estimator) = c / n + O(1/n^2).
  double leading_coeff = 0.0;
  Method method = Method::ClosedForm;
  std::optional<RnewComponents> components;
  std::size_t grid_m = 0;  // finest resolution used; 0 for closed forms
};

/// Density-weighted tensor grid: C, Fbar and c at the nodes, together with
/// the kernels
///   A(u,v) = int_{u1<=u, v1<=v} u1 c - int_{u1>=u, v1>=v} u1 c
///   B(u)   = int_{u1>=u} C(u, v1) c(u1, v1)
/// Integrating by parts reduces both to one-dimensional integrals of C:
///   A(u,v) = v - (1 - u^2)/2 - K(v),  K(v) = int_0^1 C(s, v) ds
///   B(u)   = L(u) - u^2/2,            L(u) = int_0^1 C(u, s) ds
/// which the grid evaluates with full-range sums. The two quadrant integrals
/// of A are available separately through quadrant_sums().
///
/// This route weights by the density and so loses accuracy when the density
/// is sharply peaked. The reported variances use the conditional route below;
/// the grid is kept as an independent check.
class KernelGrids {
 public:
  static KernelGrids build(const BivariateModel& model, std::size_t m, int grading, unsigned threads = 1);

  std::size_t m() const noexcept { return copula_.m(); }
  const QuadratureRule& rule() const noexcept { return copula_.rule(); }
  const Grid2D& copula() const noexcept { return copula_; }
  const Grid2D& density() const noexcept { return density_; }

  double survival(std::size_t i, std::size_t j) const noexcept;
  double a(std::size_t i, std::size_t j) const noexcept;
  double b(std::size_t i) const noexcept { return b_[i]; }

  struct QuadrantSums {
    Grid2D a_plus;   // lower-left integral of u1 c
    Grid2D a_minus;  // upper-right integral of u1 c
  };
  /// Cumulative-sum tabulation of the two parts of A on the same nodes.
  QuadrantSums quadrant_sums() const;

  /// Density-weighted expectation E[phi(i, j)] over the grid.
  template <typename F>
  double expect(F&& phi) const {
    const auto& w = rule().weights;
    double total = 0.0;
    for (std::size_t i = 0; i < m(); ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < m(); ++j) row += w[j] * density_.at(i, j) * phi(i, j);
      total += w[i] * row;
    }
    return total;
  }

 private:
  KernelGrids(Grid2D copula, Grid2D density, std::vector<double> k, std::vector<double> b)
      : copula_(std::move(copula)), density_(std::move(density)), k_(std::move(k)), b_(std::move(b)) {}

  Grid2D copula_;
  Grid2D density_;
  std::vector<double> k_;  // K(v_j)
  std::vector<double> b_;  // B(u_i)
};

/// Exact E r_n for sample size n.
double expected_r_n(const BivariateModel& model, std::size_t n);
/// Exact E of (3 tau_n - rho_{n,S}) / 2 for sample size n.
double expected_r_tilde(const BivariateModel& model, std::size_t n);

/// Single-grid evaluation of the Kendall leading term
///   16 (E[C + Fbar]^2 - 4 (E C)^2).
double var_tau_on_grid(const KernelGrids& grids);
/// Single-grid evaluation of the r_n leading term and its components.
RnewComponents var_r_components_on_grid(const KernelGrids& grids);
double rnew_coefficient(const RnewComponents& c);

/// Defaults for the conditional route. Its cost grows like m^3.
inline constexpr QuadratureOptions kVarianceQuadrature{.m = 64, .grading = 2, .tolerance = 1e-7, .max_m = 512,
                                                        .threads = 1};

/// Expectations over (U, V) rewritten as plain integrals over (U, W) on the
/// unit square, V being the W-quantile of V given U. No density is involved.
/// A and B come from the same one-dimensional integrals of C as above, with
/// K evaluated directly at each V.
struct ConditionalEvaluation {
  double tau = 0.0;
  double rho_s = 0.0;
  double var_tau = 0.0;
  std::optional<RnewComponents> rnew;  // filled when requested
};
ConditionalEvaluation evaluate_conditional(const BivariateModel& model, std::size_t m, int grading, bool with_rnew,
                                           unsigned threads = 1);

VarianceReport var_tau_leading(const BivariateModel& model, VarianceMethod method = VarianceMethod::Auto,
                               const QuadratureOptions& options = kVarianceQuadrature);
VarianceReport var_r_leading(const BivariateModel& model, VarianceMethod method = VarianceMethod::Auto,
                             const QuadratureOptions& options = kVarianceQuadrature);
/// (1 - t^2)^2 for the bivariate normal.
VarianceReport var_pearson_normal(double t);

/// Positive t where the normal-model Pearson and Kendall leading variance
/// coefficients coincide.
double are_crossover_normal();

}  // namespace rankcorr
