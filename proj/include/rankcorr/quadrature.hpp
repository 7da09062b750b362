#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

namespace rankcorr {

class BivariateModel;

/// A point of the open unit square together with its complements 1-u, 1-v,
/// each computed without cancellation.
struct UnitPoint {
  double u;
  double v;
  double u_bar;
  double v_bar;
};

/// One-dimensional rule on (0, 1): strictly increasing interior nodes with
/// weights summing to one.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> complements;  // 1 - node, accurate near 1
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// m-point Gauss-Legendre rule mapped to (0, 1). Exact for polynomials of
/// degree <= 2m - 1.
QuadratureRule gauss_legendre(std::size_t m);

/// Gauss-Legendre composed with the sigmoidal map
///   u = s^p / (s^p + (1 - s)^p),
/// which clusters nodes at both ends. Integrands with integrable endpoint
/// singularities (copula densities at the corners) converge much faster.
/// grading == 1 is plain Gauss-Legendre.
QuadratureRule graded_gauss_legendre(std::size_t m, int grading);

/// Tensor grid on (0,1)^2 holding one value per node, row index along u.
class Grid2D {
 public:
  Grid2D(std::shared_ptr<const QuadratureRule> rule, std::vector<double> values);
  explicit Grid2D(std::shared_ptr<const QuadratureRule> rule);

  std::size_t m() const noexcept { return rule_->size(); }
  const QuadratureRule& rule() const noexcept { return *rule_; }
  std::shared_ptr<const QuadratureRule> shared_rule() const noexcept { return rule_; }

  double& at(std::size_t i, std::size_t j) noexcept { return values_[i * m() + j]; }
  double at(std::size_t i, std::size_t j) const noexcept { return values_[i * m() + j]; }
  UnitPoint point(std::size_t i, std::size_t j) const noexcept;
  const std::vector<double>& values() const noexcept { return values_; }

  /// Weighted sum over all nodes (the integral over the unit square).
  double integral() const;

 private:
  std::shared_ptr<const QuadratureRule> rule_;
  std::vector<double> values_;
};

using Integrand = std::function<double(const UnitPoint&)>;

/// Evaluates `f` at every node. Rows are split across `threads` workers;
/// the result does not depend on the split.
Grid2D tabulate(std::shared_ptr<const QuadratureRule> rule, const Integrand& f, unsigned threads = 1);

/// Tensor-product estimate of the integral of f over (0,1)^2 with m nodes per
/// axis. Throws NonFiniteIntegrand when f is NaN or infinite at a node.
double integrate(const Integrand& f, std::size_t m, int grading = 1);

enum class Quadrant { LowerLeft, UpperRight, LowerRight, UpperLeft };

/// Running weighted partial sums: at node (u_i, v_j) the integral of the
/// field over the chosen closed quadrant, e.g. {u1 <= u_i, v1 <= v_j} for
/// LowerLeft. Boundary rows and columns enter with half weight, so the four
/// quadrants at any node add up to the full integral.
Grid2D cumulative_quadrant(const Grid2D& field, Quadrant direction);

struct QuadratureOptions {
  std::size_t m = 512;
  int grading = 2;
  /// Maximum change between successive doublings for a result to be accepted.
  double tolerance = 1e-6;
  std::size_t max_m = 4096;
  unsigned threads = 1;
};

enum class Functional { RhoS, Tau, R };

/// Copula-scale evaluation of a population coefficient:
///   rho_S = 12 E[UV] - 3, tau = 4 E[C(U,V)] - 1, r = 6 E[C(U,V) - UV],
/// with expectations taken against the copula density, except that E[UV] is
/// computed as the plain integral of C. The grid is doubled until successive
/// values agree within `options.tolerance`.
double coefficient_by_quadrature(const BivariateModel& model, Functional which, const QuadratureOptions& options = {});

/// Single-resolution version of the above (no refinement).
double coefficient_on_grid(const BivariateModel& model, Functional which, std::size_t m, int grading,
                           unsigned threads = 1);

}  // namespace rankcorr
