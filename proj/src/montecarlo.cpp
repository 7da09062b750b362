#include "rankcorr/montecarlo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include <boost/math/distributions/chi_squared.hpp>

#include "rankcorr/error.hpp"
#include "rankcorr/random.hpp"
#include "rankcorr/rankstats.hpp"

namespace rankcorr {

namespace {

Coefficient coefficient_for(Estimator e) {
  switch (e) {
    case Estimator::Pearson: return Coefficient::Pearson;
    case Estimator::Kendall: return Coefficient::Kendall;
    case Estimator::Rnew: return Coefficient::Rnew;
  }
  return Coefficient::Kendall;
}

// One replication: returns the requested coefficients in config order.
void replicate(const BivariateModel& model, const SimulationConfig& config, std::size_t ti, std::size_t k,
               std::vector<double>& xs, std::vector<double>& ys, double* out) {
  RandomStream rng(config.seed, static_cast<std::uint32_t>(ti), static_cast<std::uint32_t>(k));
  model.sample_into(xs, ys, rng);
  const PairedSample sample(xs, ys);
  const auto ranks = concomitant_ranks(sample);
  std::optional<double> kendall_value, spearman_value;
  auto tau = [&] { return kendall_value ? *kendall_value : *(kendall_value = kendall(ranks)); };
  auto rho_s = [&] { return spearman_value ? *spearman_value : *(spearman_value = spearman(ranks)); };
  for (std::size_t c = 0; c < config.coefficients.size(); ++c) {
    switch (config.coefficients[c]) {
      case Coefficient::Pearson: out[c] = pearson(sample); break;
      case Coefficient::Spearman: out[c] = rho_s(); break;
      case Coefficient::Kendall: out[c] = tau(); break;
      case Coefficient::Rnew: out[c] = r_new(ranks); break;
      case Coefficient::Rtilde: out[c] = (3.0 * tau() - rho_s()) / 2.0; break;
    }
  }
}

}  // namespace

std::string_view coefficient_name(Coefficient c) noexcept {
  switch (c) {
    case Coefficient::Pearson: return "pearson";
    case Coefficient::Spearman: return "spearman";
    case Coefficient::Kendall: return "kendall";
    case Coefficient::Rnew: return "r_new";
    case Coefficient::Rtilde: return "r_tilde";
  }
  return "?";
}

Coefficient parse_coefficient(std::string_view text) {
  for (auto c : kAllCoefficients) {
    if (coefficient_name(c) == text) return c;
  }
  throw ParameterOutOfRange("unknown coefficient '" + std::string(text) + "'");
}

void SimulationConfig::validate() const {
  if (n < 2) throw ParameterOutOfRange("simulation needs n >= 2");
  if (reps < 2) throw ParameterOutOfRange("simulation needs reps >= 2");
  if (t.empty()) throw ParameterOutOfRange("simulation needs at least one parameter value");
  if (coefficients.empty()) throw ParameterOutOfRange("simulation needs at least one coefficient");
  if (t.size() > UINT32_MAX || reps > UINT32_MAX) throw ParameterOutOfRange("too many parameters or replications");
  for (double value : t) BivariateModel(family, value);
}

const CellResult& SimulationResult::cell(std::size_t t_index, Coefficient c) const {
  for (const auto& cell : cells) {
    if (cell.t_index == t_index && cell.coefficient == c) return cell;
  }
  throw MismatchedConfig("no simulated cell for " + std::string(coefficient_name(c)) + " at parameter index " +
                         std::to_string(t_index));
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

std::pair<double, double> mean_and_variance(std::span<const double> values) {
  const double n = static_cast<double>(values.size());
  const double mean = pairwise_sum(values) / n;
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) sq[i] = (values[i] - mean) * (values[i] - mean);
  return {mean, values.size() > 1 ? pairwise_sum(sq) / (n - 1.0) : 0.0};
}

SimulationResult run(const SimulationConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::size_t nc = config.coefficients.size();
  const unsigned workers = std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(config.reps)));

  SimulationResult result;
  result.config = config;
  for (std::size_t ti = 0; ti < config.t.size(); ++ti) {
    const BivariateModel model(config.family, config.t[ti]);
    // values[k * nc + c]: each replication owns its slot, so the schedule
    // cannot change what is stored.
    std::vector<double> values(config.reps * nc);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&](unsigned w) {
      std::vector<double> xs(config.n), ys(config.n);
      try {
        for (std::size_t k = w; k < config.reps; k += workers) replicate(model, config, ti, k, xs, ys, &values[k * nc]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    };
    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
      for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<double> column(config.reps);
    for (std::size_t c = 0; c < nc; ++c) {
      for (std::size_t k = 0; k < config.reps; ++k) column[k] = values[k * nc + c];
      const auto [mean, variance] = mean_and_variance(column);
      result.cells.push_back({ti, config.t[ti], config.coefficients[c], mean, variance, config.reps});
    }
  }
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::vector<TheoryComparison> compare_with_theory(const SimulationResult& result,
                                                  const std::vector<VarianceReport>& reports, bool strict) {
  std::vector<TheoryComparison> out;
  const auto& cfg = result.config;
  for (const auto& report : reports) {
    if (report.model.family() != cfg.family) {
      throw MismatchedConfig("variance report for " + report.model.name() + " does not match the simulated family " +
                             std::string(family_name(cfg.family)));
    }
    const auto it = std::find(cfg.t.begin(), cfg.t.end(), report.model.t());
    if (it == cfg.t.end()) {
      throw MismatchedConfig("no simulated parameter matches " + report.model.name());
    }
    const auto& cell = result.cell(static_cast<std::size_t>(it - cfg.t.begin()), coefficient_for(report.estimator));
    TheoryComparison row;
    row.t = cell.t;
    row.coefficient = cell.coefficient;
    row.observed = cell.variance;
    row.theory = report.leading_coeff / static_cast<double>(cfg.n);
    row.ratio = row.observed / row.theory;
    row.flagged = !(row.ratio >= kLooseBandLow && row.ratio <= kLooseBandHigh);
    if (strict) {
      const double df = static_cast<double>(cell.reps - 1);
      const boost::math::chi_squared chi(df);
      const double lo = boost::math::quantile(chi, 0.0005) / df;
      const double hi = boost::math::quantile(chi, 0.9995) / df;
      row.strict_band = std::pair{lo, hi};
      row.strict_flagged = !(row.ratio >= lo && row.ratio <= hi);
    }
    out.push_back(row);
  }
  return out;
}

}  // namespace rankcorr
