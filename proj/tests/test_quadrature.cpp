#include <doctest.h>

#include <cmath>
#include <numeric>

#include "rankcorr/copulas.hpp"
#include "rankcorr/error.hpp"
#include "rankcorr/quadrature.hpp"

using namespace rankcorr;

TEST_CASE("Gauss-Legendre integrates polynomials up to degree 2m-1 exactly") {
  for (std::size_t m : {1, 2, 3, 5, 8, 20, 64}) {
    const auto rule = gauss_legendre(m);
    REQUIRE(rule.size() == m);
    for (std::size_t deg = 0; deg <= 2 * m - 1; ++deg) {
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) s += rule.weights[i] * std::pow(rule.nodes[i], static_cast<double>(deg));
      CAPTURE(m);
      CAPTURE(deg);
      CHECK(s == doctest::Approx(1.0 / (deg + 1)).epsilon(1e-13));
    }
    if (m <= 8) {
      // Degree 2m is not integrated exactly.
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) s += rule.weights[i] * std::pow(rule.nodes[i], 2.0 * m);
      CHECK(std::abs(s - 1.0 / (2 * m + 1)) > 1e-15);
    }
  }
}

TEST_CASE("rules are increasing, symmetric and carry exact complements") {
  for (int grading : {1, 2}) {
    const auto rule = graded_gauss_legendre(300, grading);
    CHECK(std::accumulate(rule.weights.begin(), rule.weights.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    for (std::size_t i = 0; i < rule.size(); ++i) {
      CHECK(rule.nodes[i] > 0.0);
      CHECK(rule.complements[i] > 0.0);
      CHECK(rule.nodes[i] + rule.complements[i] == doctest::Approx(1.0).epsilon(1e-15));
      CHECK(rule.nodes[i] == doctest::Approx(rule.complements[rule.size() - 1 - i]).epsilon(1e-13));
      if (i > 0) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
    }
  }
}

TEST_CASE("graded rule handles endpoint singularities") {
  // int_0^1 int_0^1 (uv)^(-1/2) = 4; plain Gauss-Legendre converges slowly.
  auto f = [](const UnitPoint& p) { return 1.0 / std::sqrt(p.u * p.v); };
  const double graded = integrate(f, 256, 2);
  const double plain = integrate(f, 256, 1);
  CHECK(std::abs(graded - 4.0) < 1e-6);
  CHECK(std::abs(graded - 4.0) < std::abs(plain - 4.0));
}

TEST_CASE("integrate rejects non-finite integrands") {
  CHECK_THROWS_AS(integrate([](const UnitPoint& p) { return p.u < 0.5 ? NAN : 1.0; }, 16), NonFiniteIntegrand);
}

TEST_CASE("tabulate is independent of the thread count") {
  auto rule = std::make_shared<const QuadratureRule>(graded_gauss_legendre(97, 2));
  auto f = [](const UnitPoint& p) { return std::sin(7 * p.u) * std::exp(p.v); };
  const auto a = tabulate(rule, f, 1);
  const auto b = tabulate(rule, f, 4);
  CHECK(a.values() == b.values());
}

TEST_CASE("cumulative quadrants partition the integral and approach the CDF") {
  const auto model = BivariateModel::normal(0.6);
  double previous_error = 1.0;
  for (std::size_t m : {32, 128, 512}) {
    auto rule = std::make_shared<const QuadratureRule>(graded_gauss_legendre(m, 2));
    const auto density = tabulate(rule, [&](const UnitPoint& p) { return model.copula_density(p); });
    const double total = density.integral();
    CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
    const auto ll = cumulative_quadrant(density, Quadrant::LowerLeft);
    const auto ur = cumulative_quadrant(density, Quadrant::UpperRight);
    const auto lr = cumulative_quadrant(density, Quadrant::LowerRight);
    const auto ul = cumulative_quadrant(density, Quadrant::UpperLeft);
    double worst = 0.0;
    for (std::size_t i = 0; i < m; i += 3) {
      for (std::size_t j = 0; j < m; j += 5) {
        CHECK(ll.at(i, j) + ur.at(i, j) + lr.at(i, j) + ul.at(i, j) == doctest::Approx(total).epsilon(1e-12));
        worst = std::max(worst, std::abs(ll.at(i, j) - model.copula(density.point(i, j))));
        if (i > 0) CHECK(ll.at(i, j) >= ll.at(i - 1, j));
      }
    }
    CHECK(worst < previous_error);
    previous_error = worst;
  }
  CHECK(previous_error < 5e-3);
}

TEST_CASE("coefficient quadrature reproduces closed forms") {
  for (double t : {-0.9, -0.3, 0.4, 0.8}) {
    const auto fgm = BivariateModel::fgm(t);
    CHECK(coefficient_on_grid(fgm, Functional::RhoS, 16, 1) == doctest::Approx(t / 3).epsilon(1e-12));
    CHECK(coefficient_on_grid(fgm, Functional::Tau, 16, 1) == doctest::Approx(2 * t / 9).epsilon(1e-12));
    CHECK(coefficient_on_grid(fgm, Functional::R, 16, 1) == doctest::Approx(t / 6).epsilon(1e-12));
    const auto nor = BivariateModel::normal(t);
    QuadratureOptions q;
    q.m = 128;
    q.tolerance = 1e-9;
    CHECK(std::abs(coefficient_by_quadrature(nor, Functional::RhoS, q) - 6 / M_PI * std::asin(t / 2)) < 1e-8);
    CHECK(std::abs(coefficient_by_quadrature(nor, Functional::Tau, q) - 2 / M_PI * std::asin(t)) < 1e-8);
  }
}

TEST_CASE("refinement gives up with a convergence error") {
  QuadratureOptions q;
  q.m = 8;
  q.max_m = 16;
  q.tolerance = 1e-15;
  CHECK_THROWS_AS(coefficient_by_quadrature(BivariateModel::pareto(0.05), Functional::Tau, q), QuadratureNotConverged);
}
