// Acceptance gate. One PASS/FAIL line per criterion; tolerances are fixed
// here. Exit status is nonzero when any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "cli.hpp"
#include "rankcorr/asymptotics.hpp"
#include "rankcorr/copulas.hpp"
#include "rankcorr/montecarlo.hpp"
#include "rankcorr/rankstats.hpp"
#include "rankcorr/reference_tables.hpp"

using namespace rankcorr;
namespace ref = rankcorr::reference;

namespace {

constexpr std::uint64_t kSeed = 20261016;
constexpr std::size_t kN = 1000;

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<bool(std::vector<std::string>&)> body;
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// 1: FGM closed forms against the printed Table 2.1 theory rows.
bool closed_form_theory(std::vector<std::string>& notes) {
  const auto& tab = ref::table("2.1");
  bool ok = true;
  for (std::size_t i = 0; i < tab.t.size(); ++i) {
    const double t = tab.t[i];
    const auto model = BivariateModel::fgm(t);
    const double vt = var_tau_leading(model, VarianceMethod::ClosedForm).leading_coeff / kN;
    const double vr = var_r_leading(model, VarianceMethod::ClosedForm).leading_coeff / kN;
    const double printed_formula = (4.0 / 9 - 46 * t * t / 2025) / kN;
    const auto want_t = cli::sci4(*tab.row(ref::Row::VarKendall).values[i]);
    const auto want_r = cli::sci4(*tab.row(ref::Row::VarRnew).values[i]);
    if (cli::sci4(vt) != want_t) {
      ok = false;
      notes.push_back(fmt("t=%.2f Var(tau_n): computed %s, table %s (4/9-46t^2/2025 gives %s)", t,
                          cli::sci4(vt).c_str(), want_t.c_str(), cli::sci4(printed_formula).c_str()));
    }
    if (cli::sci4(vr) != want_r) {
      ok = false;
      notes.push_back(fmt("t=%.2f Var(r_n): computed %s, table %s", t, cli::sci4(vr).c_str(), want_r.c_str()));
    }
  }
  return ok;
}

// 2: generic quadrature against closed forms.
bool quadrature_vs_closed(std::vector<std::string>& notes) {
  bool ok = true;
  for (int k = -4; k <= 4; ++k) {
    const double t = k / 4.0;
    const auto model = BivariateModel::fgm(t);
    const auto vt = var_tau_leading(model, VarianceMethod::Quadrature);
    const auto vr = var_r_leading(model, VarianceMethod::Quadrature);
    const auto& c = *vr.components;
    const double errs[] = {
        std::abs(vt.leading_coeff - var_tau_leading(model, VarianceMethod::ClosedForm).leading_coeff),
        std::abs(vr.leading_coeff - (0.25 - 7 * t * t / 180)),
        std::abs(c.q1 - (-1.0 / 12 - 2 * t / 45 - t * t / 180)),
        std::abs(c.q4 - (-1.0 / 40 - t / 540 + t * t / 540)),
    };
    const double worst = *std::max_element(std::begin(errs), std::end(errs));
    if (!(worst <= 1e-6)) {
      ok = false;
      notes.push_back(fmt("FGM t=%.2f worst error %.3e", t, worst));
    }
  }
  for (double t : {0.0, 0.3, -0.3, 0.7, -0.7}) {
    const auto model = BivariateModel::normal(t);
    const auto quad = var_tau_leading(model, VarianceMethod::Quadrature);
    const double closed = 4 * (1.0 / 9 - 4 * std::pow(std::asin(t / 2), 2) / (M_PI * M_PI));
    const double err = std::abs(quad.leading_coeff - closed);
    if (!(err <= 1e-5)) {
      ok = false;
      notes.push_back(fmt("normal t=%.1f Var(tau) error %.3e", t, err));
    }
  }
  return ok;
}

// 3: Table 2.3 population values.
bool pareto_table(std::vector<std::string>& notes) {
  const auto& tab = ref::table("2.3");
  bool ok = true;
  auto check = [&](const char* label, double t, double got, std::optional<double> want, double tol) {
    if (!want) return;
    if (!(std::abs(got - *want) <= tol)) {
      ok = false;
      notes.push_back(fmt("t=%g %s: computed %.6f, table %.4f", t, label, got, *want));
    }
  };
  for (std::size_t i = 0; i < tab.t.size(); ++i) {
    const double t = tab.t[i];
    const auto th = theoretical_coefficients(BivariateModel::pareto(t));
    check("rho_s", t, th.rho_s, tab.row(ref::Row::RhoS).values[i], 1e-3);
    check("r", t, th.r, tab.row(ref::Row::R).values[i], 1e-3);
    // Closed forms, printed to 4 decimals (some truncated rather than rounded).
    check("tau", t, th.tau, tab.row(ref::Row::Tau).values[i], 1e-4);
    if (th.rho) check("rho", t, *th.rho, tab.row(ref::Row::Rho).values[i], 1e-4);
  }
  return ok;
}

bool crossover(std::vector<std::string>& notes) {
  const double t = are_crossover_normal();
  notes.push_back(fmt("t* = %.8f", t));
  return std::abs(t - 0.730072) <= 1e-5;
}

// 5: simulated S^2 against theory, else the published sample value.
bool monte_carlo_tables(std::vector<std::string>& notes) {
  bool ok = true;
  double lo = 1e9, hi = 0.0;
  for (const char* id : {"2.1", "2.2", "2.4"}) {
    const auto& tab = ref::table(id);
    SimulationConfig cfg;
    cfg.family = tab.family;
    cfg.t = tab.t;
    cfg.n = kN;
    cfg.reps = 1000;
    cfg.seed = kSeed;
    cfg.coefficients = {Coefficient::Kendall, Coefficient::Rnew};
    const auto sim = run(cfg);
    for (std::size_t i = 0; i < tab.t.size(); ++i) {
      const auto model = BivariateModel(tab.family, tab.t[i]);
      const double s_tau = sim.cell(i, Coefficient::Kendall).variance;
      const double s_r = sim.cell(i, Coefficient::Rnew).variance;
      const std::pair<double, double> pairs[] = {
          {s_tau, var_tau_leading(model).leading_coeff / kN},
          {s_r, var_r_leading(model).leading_coeff / kN},
      };
      const char* names[] = {"tau_n", "r_n"};
      for (int k = 0; k < 2; ++k) {
        const double ratio = pairs[k].first / pairs[k].second;
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
        if (!(ratio >= 0.8 && ratio <= 1.25)) {
          ok = false;
          notes.push_back(fmt("table %s t=%g S2 %s = %.4e, theory %.4e, ratio %.3f", id, tab.t[i], names[k],
                              pairs[k].first, pairs[k].second, ratio));
        }
      }
      if (tab.family == Family::FGM && !(s_r <= s_tau)) {
        ok = false;
        notes.push_back(fmt("table %s t=%g S2 r_n %.4e exceeds S2 tau_n %.4e", id, tab.t[i], s_r, s_tau));
      }
    }
  }
  notes.push_back(fmt("S2/theory ratios span [%.3f, %.3f]", lo, hi));
  return ok;
}

bool mean_oracle(std::vector<std::string>& notes) {
  SimulationConfig cfg;
  cfg.family = Family::FGM;
  cfg.t = {0.3, 0.9};
  cfg.n = kN;
  cfg.reps = 4000;
  cfg.seed = kSeed + 1;
  cfg.coefficients = {Coefficient::Rnew};
  const auto sim = run(cfg);
  bool ok = true;
  for (std::size_t i = 0; i < cfg.t.size(); ++i) {
    const auto& c = sim.cell(i, Coefficient::Rnew);
    const double t = cfg.t[i];
    const double expect = t / 6 * 2.0 * kN / (2.0 * kN - 1);
    const double z = (c.mean - expect) / std::sqrt(c.variance / c.reps);
    notes.push_back(fmt("t=%.1f mean %.6f expected %.6f z=%.2f", t, c.mean, expect, z));
    ok = ok && std::abs(z) <= 3.0;
  }
  return ok;
}

bool algorithmic_equivalence(std::vector<std::string>& notes) {
  std::size_t checked = 0;
  auto same = [&](const std::vector<std::uint32_t>& p) {
    const ConcomitantRanks r(p);
    ++checked;
    return weighted_T(r, Algorithm::Fast) == weighted_T(r, Algorithm::Naive) &&
           concordant_pairs(r, Algorithm::Fast) == concordant_pairs(r, Algorithm::Naive) &&
           kendall(r, Algorithm::Fast) == kendall(r, Algorithm::Naive);
  };
  for (std::size_t n = 2; n <= 7; ++n) {
    std::vector<std::uint32_t> p(n);
    std::iota(p.begin(), p.end(), 1u);
    do {
      if (!same(p)) {
        notes.push_back(fmt("mismatch at n=%zu", n));
        return false;
      }
    } while (std::next_permutation(p.begin(), p.end()));
  }
  std::mt19937_64 gen(kSeed);
  std::uniform_int_distribution<std::size_t> size(8, 512);
  for (int rep = 0; rep < 10000; ++rep) {
    std::vector<std::uint32_t> p(size(gen));
    std::iota(p.begin(), p.end(), 1u);
    std::shuffle(p.begin(), p.end(), gen);
    if (!same(p)) {
      notes.push_back(fmt("mismatch on random permutation of size %zu", p.size()));
      return false;
    }
  }
  notes.push_back(fmt("%zu permutations", checked));
  return true;
}

bool estimator_properties(std::vector<std::string>& notes) {
  std::mt19937_64 gen(kSeed + 2);
  std::normal_distribution<double> z;
  std::uniform_real_distribution<double> dep(-0.95, 0.95);
  std::uniform_int_distribution<std::size_t> size(2, 400);
  std::size_t bad[4] = {0, 0, 0, 0};
  const int cases = 1000;
  for (int rep = 0; rep < cases; ++rep) {
    const std::size_t n = size(gen);
    const double a = dep(gen);
    std::vector<double> x(n), y(n), tx(n), ty(n), nx(n), ny(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = z(gen);
      y[i] = a * x[i] + std::sqrt(1 - a * a) * z(gen);
      tx[i] = std::atan(x[i]);
      ty[i] = std::exp(3 * y[i]);
      nx[i] = -x[i];
      ny[i] = -y[i];
    }
    const auto e = estimate_all(PairedSample(x, y));
    for (double v : {e.pearson, e.spearman, e.kendall, e.r_new, e.r_tilde})
      if (!(v >= -1 && v <= 1)) ++bad[0];
    const auto t = estimate_all(PairedSample(tx, ty));
    if (t.spearman != e.spearman || t.kendall != e.kendall || t.r_new != e.r_new || t.r_tilde != e.r_tilde) ++bad[1];
    for (const auto& f : {estimate_all(PairedSample(x, ny)), estimate_all(PairedSample(nx, y))}) {
      if (std::abs(f.kendall + e.kendall) > 1e-14 || std::abs(f.spearman + e.spearman) > 1e-14 ||
          std::abs(f.r_new + e.r_new) > 1e-14 || std::abs(f.r_tilde + e.r_tilde) > 1e-14 ||
          std::abs(f.pearson + e.pearson) > 1e-12)
        ++bad[2];
    }
    if (std::abs(e.r_tilde - (3 * e.kendall - e.spearman) / 2) > 1e-14) ++bad[3];
  }
  notes.push_back(fmt("%d cases; failures bounds %zu, invariance %zu, antisymmetry %zu, identity %zu", cases, bad[0],
                      bad[1], bad[2], bad[3]));
  return bad[0] + bad[1] + bad[2] + bad[3] == 0;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "FGM closed-form variances vs Table 2.1 theory rows", 1, closed_form_theory},
      {2, "generic quadrature vs closed forms (FGM, normal)", 60, quadrature_vs_closed},
      {3, "Pareto population values vs Table 2.3", 60, pareto_table},
      {4, "normal Pearson/Kendall crossover", 1, crossover},
      {5, "Monte Carlo S2 vs theory, Tables 2.1 2.2 2.4", 600, monte_carlo_tables},
      {6, "mean of r_n vs exact expectation (FGM)", 120, mean_oracle},
      {7, "fast vs naive kendall and T_n", 30, algorithmic_equivalence},
      {8, "estimator properties", 30, estimator_properties},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    std::vector<std::string> notes;
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = c.body(notes);
    } catch (const std::exception& e) {
      notes.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_seconds) {
      ok = false;
      notes.push_back(fmt("runtime %.1f s exceeds budget %.0f s", secs, c.budget_seconds));
    }
    std::printf("%s criterion %d: %s (%.2f s)\n", ok ? "PASS" : "FAIL", c.id, c.name.c_str(), secs);
    for (const auto& n : notes) std::printf("    %s\n", n.c_str());
    std::fflush(stdout);
    failed += ok ? 0 : 1;
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
