#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rankcorr/asymptotics.hpp"
#include "rankcorr/copulas.hpp"
#include "rankcorr/error.hpp"
#include "rankcorr/montecarlo.hpp"
#include "rankcorr/random.hpp"
#include "rankcorr/rankstats.hpp"
#include "rankcorr/reference_tables.hpp"

namespace rankcorr::cli {

namespace {

using json = nlohmann::ordered_json;

struct Globals {
  std::uint64_t seed = 42;
  bool json = false;
  std::string out;
  unsigned threads = 1;
};

// What a command produced: the machine-readable results and their text form.
struct Output {
  json results;
  std::string text;
  std::optional<double> wall_seconds;
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(trim(field));
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double value = 0.0;
  const char* begin = s.data();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::string fixed(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string wide_to_string(WideCount v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// ---------------------------------------------------------------- estimate

std::pair<std::size_t, std::size_t> parse_cols(const std::string& text) {
  const auto parts = split(text, ',');
  std::size_t i = 0, j = 0;
  auto parse_index = [&](const std::string& s, std::size_t& dst) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), dst);
    return ec == std::errc() && ptr == s.data() + s.size() && dst >= 1;
  };
  if (parts.size() != 2 || !parse_index(parts[0], i) || !parse_index(parts[1], j) || i == j) {
    throw InputError("--cols expects two distinct 1-based column indices such as 1,3; got '" + text + "'");
  }
  return {i, j};
}

Output cmd_estimate(const std::string& path, const std::string& cols_arg, bool jitter, const Globals& g) {
  const auto cols = cols_arg.empty() ? std::pair<std::size_t, std::size_t>{1, 2} : parse_cols(cols_arg);
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  const auto data = read_csv(in, cols);
  const PairedSample sample(data.x, data.y);
  RankingOptions options;
  options.ties = jitter ? TiePolicy::Jitter : TiePolicy::Reject;
  options.jitter_seed = g.seed;
  const auto est = estimate_all(sample, options);

  Output o;
  o.results = {{"file", path},
               {"columns", {cols.first, cols.second}},
               {"ties", jitter ? "jitter" : "reject"},
               {"n", est.n},
               {"pearson", est.pearson},
               {"spearman", est.spearman},
               {"kendall", est.kendall},
               {"r_new", est.r_new},
               {"r_tilde", est.r_tilde}};
  std::ostringstream t;
  t << "n         " << est.n << '\n'
    << "pearson   " << fixed(est.pearson) << '\n'
    << "spearman  " << fixed(est.spearman) << '\n'
    << "kendall   " << fixed(est.kendall) << '\n'
    << "r_new     " << fixed(est.r_new) << '\n'
    << "r_tilde   " << fixed(est.r_tilde) << '\n';
  if (jitter && sample.has_ties()) t << "(ties broken by seeded jitter, seed " << g.seed << ")\n";
  o.text = t.str();
  return o;
}

// ------------------------------------------------------------------ theory

json variance_json(const VarianceReport& r) {
  json j = {{"estimator", estimator_name(r.estimator)},
            {"leading_coeff", r.leading_coeff},
            {"method", method_name(r.method)}};
  if (r.grid_m > 0) j["grid_m"] = r.grid_m;
  if (r.components) {
    const auto& c = *r.components;
    j["components"] = {{"main", c.main}, {"centering", c.centering}, {"q1", c.q1},
                       {"q2", c.q2},     {"q3", c.q3},               {"q4", c.q4}};
  }
  return j;
}

QuadratureOptions variance_options(const Globals& g) {
  QuadratureOptions q = kVarianceQuadrature;
  q.threads = g.threads;
  return q;
}

Output cmd_theory(const std::string& family_text, double t, std::optional<std::size_t> n, const Globals& g) {
  const BivariateModel model(parse_family(family_text), t);
  const auto coeffs = theoretical_coefficients(model);
  std::vector<VarianceReport> variances;
  if (model.family() == Family::Normal) variances.push_back(var_pearson_normal(t));
  variances.push_back(var_tau_leading(model, VarianceMethod::Auto, variance_options(g)));
  variances.push_back(var_r_leading(model, VarianceMethod::Auto, variance_options(g)));

  Output o;
  o.results["model"] = family_name(model.family());
  o.results["t"] = t;
  o.results["coefficients"] = {{"rho", optional_number(coeffs.rho)},
                               {"rho_s", coeffs.rho_s},
                               {"tau", coeffs.tau},
                               {"r", coeffs.r}};
  o.results["methods"] = {{"rho", method_name(coeffs.rho_method)},
                          {"rho_s", method_name(coeffs.rho_s_method)},
                          {"tau", method_name(coeffs.tau_method)},
                          {"r", method_name(coeffs.r_method)}};
  o.results["variances"] = json::array();
  for (const auto& v : variances) o.results["variances"].push_back(variance_json(v));

  std::ostringstream text;
  text << model.name() << '\n';
  text << "  rho      " << (coeffs.rho ? fixed(*coeffs.rho) : std::string("--  (second moments do not exist)")) << '\n';
  text << "  rho_s    " << pad(fixed(coeffs.rho_s), 14) << method_name(coeffs.rho_s_method) << '\n';
  text << "  tau      " << pad(fixed(coeffs.tau), 14) << method_name(coeffs.tau_method) << '\n';
  text << "  r        " << pad(fixed(coeffs.r), 14) << method_name(coeffs.r_method) << '\n';
  text << "leading variance coefficients (Var = c/n + O(1/n^2))\n";
  for (const auto& v : variances) {
    text << "  " << pad(std::string(estimator_name(v.estimator)), 9) << pad(fixed(v.leading_coeff), 14)
         << method_name(v.method);
    if (v.grid_m > 0) text << " (m=" << v.grid_m << ")";
    text << '\n';
    if (v.components) {
      const auto& c = *v.components;
      text << "    main " << fixed(c.main) << "  centering " << fixed(c.centering) << "  q1 " << fixed(c.q1) << "  q2 "
           << fixed(c.q2) << "  q3 " << fixed(c.q3) << "  q4 " << fixed(c.q4) << '\n';
    }
  }
  if (n) {
    const double er = expected_r_n(model, *n);
    const double et = expected_r_tilde(model, *n);
    o.results["expected"] = {{"n", *n}, {"r_n", er}, {"r_tilde", et}};
    text << "at n = " << *n << '\n'
         << "  E r_n      " << fixed(er) << '\n'
         << "  E r_tilde  " << fixed(et) << '\n';
    for (const auto& v : variances) {
      text << "  Var " << pad(std::string(estimator_name(v.estimator)), 8) << sci4(v.leading_coeff / *n) << '\n';
    }
  }
  o.text = text.str();
  return o;
}

// ------------------------------------------------------------------- table

constexpr std::size_t kCol = 12;

std::string cell_text(const std::optional<double>& v, bool flag = false) {
  if (!v) return pad("--", kCol);
  return pad(sci4(*v) + (flag ? "*" : ""), kCol);
}

Output table_closed(const reference::PublishedTable& pub, const Globals& g) {
  using reference::Row;
  std::vector<std::optional<double>> rho, rho_s, tau, r;
  QuadratureOptions q{.m = 512, .grading = 2, .tolerance = 1e-10, .max_m = 4096, .threads = g.threads};
  for (double t : pub.t) {
    const auto c = theoretical_coefficients(BivariateModel(pub.family, t), q);
    rho.push_back(c.rho);
    rho_s.push_back(c.rho_s);
    tau.push_back(c.tau);
    r.push_back(c.r);
  }
  const std::vector<std::pair<Row, const std::vector<std::optional<double>>*>> rows = {
      {Row::Rho, &rho}, {Row::RhoS, &rho_s}, {Row::Tau, &tau}, {Row::R, &r}};

  Output o;
  o.results = {{"table", pub.id}, {"family", family_name(pub.family)}, {"t", pub.t}, {"rows", json::array()}};
  std::ostringstream text;
  text << "Table " << pub.id << " (" << family_name(pub.family) << "), population coefficients\n";
  text << pad("", 14);
  for (double t : pub.t) text << pad("t=" + fixed(t), kCol);
  text << '\n';
  for (const auto& [row, values] : rows) {
    const auto& published = pub.row(row).values;
    json jr = {{"label", reference::row_label(row)}, {"values", json::array()}, {"published", json::array()}};
    text << pad(std::string(reference::row_label(row)), 14);
    for (std::size_t i = 0; i < pub.t.size(); ++i) {
      jr["values"].push_back(optional_number((*values)[i]));
      jr["published"].push_back(optional_number(published[i]));
      text << cell_text((*values)[i]);
    }
    text << "\n" << pad("  published", 14);
    for (const auto& p : published) text << cell_text(p);
    text << '\n';
    o.results["rows"].push_back(jr);
  }
  o.text = text.str();
  return o;
}

Output table_simulated(const reference::PublishedTable& pub, std::size_t reps, std::size_t n, const Globals& g) {
  using reference::Row;
  SimulationConfig cfg;
  cfg.family = pub.family;
  cfg.t = pub.t;
  cfg.n = n;
  cfg.reps = reps;
  cfg.seed = g.seed;
  cfg.coefficients = {Coefficient::Pearson, Coefficient::Spearman, Coefficient::Kendall, Coefficient::Rnew};
  cfg.threads = g.threads;
  const auto sim = run(cfg);

  std::vector<VarianceReport> reports;
  for (double t : pub.t) {
    const BivariateModel model(pub.family, t);
    if (pub.family == Family::Normal) reports.push_back(var_pearson_normal(t));
    reports.push_back(var_tau_leading(model, VarianceMethod::Auto, variance_options(g)));
    reports.push_back(var_r_leading(model, VarianceMethod::Auto, variance_options(g)));
  }
  const auto comparisons = compare_with_theory(sim, reports);
  auto find_comparison = [&](std::size_t ti, Coefficient c) -> const TheoryComparison* {
    for (const auto& cmp : comparisons) {
      if (cmp.t == pub.t[ti] && cmp.coefficient == c) return &cmp;
    }
    return nullptr;
  };

  struct Line {
    Row row;
    std::vector<std::optional<double>> values;
    std::vector<bool> flags;
  };
  std::vector<Line> lines;
  auto sample_line = [&](Row row, Coefficient c) {
    Line line{row, {}, {}};
    for (std::size_t ti = 0; ti < pub.t.size(); ++ti) {
      line.values.push_back(sim.cell(ti, c).variance);
      const auto* cmp = find_comparison(ti, c);
      line.flags.push_back(cmp != nullptr && cmp->flagged);
    }
    return line;
  };
  auto theory_line = [&](Row row, Coefficient c) {
    Line line{row, {}, {}};
    for (std::size_t ti = 0; ti < pub.t.size(); ++ti) {
      const auto* cmp = find_comparison(ti, c);
      line.values.push_back(cmp ? std::optional<double>(cmp->theory) : std::nullopt);
      line.flags.push_back(false);
    }
    return line;
  };
  lines.push_back(sample_line(Row::SamplePearson, Coefficient::Pearson));
  lines.push_back(sample_line(Row::SampleSpearman, Coefficient::Spearman));
  lines.push_back(sample_line(Row::SampleKendall, Coefficient::Kendall));
  lines.push_back(theory_line(Row::VarKendall, Coefficient::Kendall));
  lines.push_back(sample_line(Row::SampleRnew, Coefficient::Rnew));
  lines.push_back(theory_line(Row::VarRnew, Coefficient::Rnew));

  Output o;
  o.wall_seconds = sim.wall_seconds;
  o.results = {{"table", pub.id}, {"family", family_name(pub.family)}, {"n", n}, {"reps", reps},
               {"seed", g.seed},  {"t", pub.t},                         {"rows", json::array()}};
  std::ostringstream text;
  text << "Table " << pub.id << " (" << family_name(pub.family) << "), n = " << n << ", reps = " << reps
       << ", seed = " << g.seed << '\n';
  text << pad("", 14);
  for (double t : pub.t) text << pad("t=" + fixed(t), kCol);
  text << '\n';
  for (const auto& line : lines) {
    json jr = {{"label", reference::row_label(line.row)}, {"values", json::array()}};
    text << pad(std::string(reference::row_label(line.row)), 14);
    for (std::size_t i = 0; i < pub.t.size(); ++i) {
      jr["values"].push_back(optional_number(line.values[i]));
      text << cell_text(line.values[i], line.flags[i]);
    }
    text << '\n';
    std::vector<std::optional<double>> published(pub.t.size());
    bool any = false;
    for (const auto& pr : pub.rows) {
      if (pr.row == line.row) {
        published = pr.values;
        any = true;
      }
    }
    jr["published"] = json::array();
    for (const auto& p : published) jr["published"].push_back(optional_number(p));
    if (any) {
      text << pad("  published", 14);
      for (const auto& p : published) text << cell_text(p);
      text << '\n';
    }
    o.results["rows"].push_back(jr);
  }
  o.results["cells"] = json::array();
  for (const auto& c : sim.cells) {
    o.results["cells"].push_back({{"t", c.t},
                                  {"coefficient", coefficient_name(c.coefficient)},
                                  {"mean", c.mean},
                                  {"variance", c.variance},
                                  {"reps", c.reps}});
  }
  o.results["comparisons"] = json::array();
  bool any_flag = false;
  for (const auto& c : comparisons) {
    any_flag = any_flag || c.flagged;
    o.results["comparisons"].push_back({{"t", c.t},
                                        {"coefficient", coefficient_name(c.coefficient)},
                                        {"observed", c.observed},
                                        {"theory", c.theory},
                                        {"ratio", c.ratio},
                                        {"flagged", c.flagged}});
  }
  text << "theory rows are c/n from the leading variance coefficients";
  text << (any_flag ? "; * marks a sample variance outside [0.8, 1.25] times theory\n" : "; all cells within band\n");
  o.text = text.str();
  return o;
}

Output cmd_table(const std::string& id, std::size_t reps, std::size_t n, const Globals& g) {
  const auto& pub = reference::table(id);
  return pub.simulated ? table_simulated(pub, reps, n, g) : table_closed(pub, g);
}

// ------------------------------------------------------------------- bench

constexpr std::size_t kBenchVerifyLimit = 100000;

ConcomitantRanks random_permutation(std::size_t n, std::uint64_t seed, std::uint32_t index) {
  RandomStream rng(seed, 0x62656e63u, index);
  std::vector<std::uint32_t> r(n);
  std::iota(r.begin(), r.end(), 1u);
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>((static_cast<unsigned __int128>(rng.next_u64()) * i) >> 64);
    std::swap(r[i - 1], r[j]);
  }
  return ConcomitantRanks(std::move(r));
}

Output cmd_bench(const std::vector<std::size_t>& sizes, const std::string& algo_text, const Globals& g) {
  Algorithm algo;
  if (algo_text == "fast") {
    algo = Algorithm::Fast;
  } else if (algo_text == "naive") {
    algo = Algorithm::Naive;
  } else {
    throw ParameterOutOfRange("--algo must be naive or fast, got '" + algo_text + "'");
  }
  Output o;
  o.results = {{"algo", algo_text}, {"rows", json::array()}};
  std::ostringstream text;
  text << pad("n", 10) << pad("kendall_s", 14) << pad("T_s", 14) << pad("T_n", 26) << "checked\n";
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    const std::size_t n = sizes[k];
    if (n < 2) throw ParameterOutOfRange("bench sizes must be at least 2");
    const auto ranks = random_permutation(n, g.seed, static_cast<std::uint32_t>(k));
    // Equality of the two algorithms is checked before anything is timed.
    const bool checked = n <= kBenchVerifyLimit;
    if (checked) {
      if (weighted_T(ranks, Algorithm::Fast) != weighted_T(ranks, Algorithm::Naive) ||
          concordant_pairs(ranks, Algorithm::Fast) != concordant_pairs(ranks, Algorithm::Naive)) {
        throw Error("fast and naive algorithms disagree at n = " + std::to_string(n));
      }
    }
    using clock = std::chrono::steady_clock;
    auto t0 = clock::now();
    const double tau = kendall(ranks, algo);
    auto t1 = clock::now();
    const WideCount T = weighted_T(ranks, algo);
    auto t2 = clock::now();
    const double ks = std::chrono::duration<double>(t1 - t0).count();
    const double ts = std::chrono::duration<double>(t2 - t1).count();
    o.results["rows"].push_back({{"n", n},
                                 {"kendall_seconds", ks},
                                 {"T_seconds", ts},
                                 {"kendall", tau},
                                 {"T", wide_to_string(T)},
                                 {"checked_against_naive", checked}});
    text << pad(std::to_string(n), 10) << pad(sci4(ks), 14) << pad(sci4(ts), 14) << pad(wide_to_string(T), 26)
         << (checked ? "yes" : "no (n > " + std::to_string(kBenchVerifyLimit) + ")") << '\n';
  }
  o.text = text.str();
  return o;
}

// ------------------------------------------------------------------ output

void emit(const Output& o, const std::string& command, const std::vector<std::string>& args, const Globals& g,
          std::ostream& out) {
  const std::string results_text = o.results.dump();
  json manifest = {{"command", command},
                   {"args", args},
                   {"seed", g.seed},
                   {"version", RANKCORR_VERSION},
                   {"timestamp", utc_timestamp()},
                   {"checksum", "fnv1a64:" + hex64(fnv1a64(results_text))}};
  if (o.wall_seconds) manifest["wall_seconds"] = *o.wall_seconds;
  const std::string body = g.json ? json{{"manifest", manifest}, {"results", o.results}}.dump(2) + "\n" : o.text;
  if (g.out.empty()) {
    out << body;
    return;
  }
  std::ofstream file(g.out, std::ios::binary);
  if (!file) throw InputError("cannot write '" + g.out + "'");
  file << body;
  // The manifest travels next to the output file so that the file itself
  // stays byte-identical across reruns.
  manifest["output_file"] = g.out;
  manifest["output_checksum"] = "fnv1a64:" + hex64(fnv1a64(body));
  std::ofstream side(g.out + ".manifest.json", std::ios::binary);
  if (!side) throw InputError("cannot write '" + g.out + ".manifest.json'");
  side << json{{"manifest", manifest}}.dump(2) << '\n';
}

unsigned threads_from_env(unsigned fallback) {
  const char* env = std::getenv("RANKCORR_THREADS");
  if (env == nullptr || *env == '\0') return fallback;
  unsigned value = 0;
  const std::string_view s(env);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || value == 0) {
    throw InputError("RANKCORR_THREADS must be a positive integer, got '" + std::string(s) + "'");
  }
  return value;
}

}  // namespace

std::string sci4(double value) {
  if (!std::isfinite(value)) return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", value);
  return buf;
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

CsvColumns read_csv(std::istream& in, std::pair<std::size_t, std::size_t> cols) {
  CsvColumns data;
  std::string line;
  std::size_t line_no = 0;
  const std::size_t need = std::max(cols.first, cols.second);
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (first) {
      first = false;
      const bool numeric = std::all_of(fields.begin(), fields.end(),
                                       [](const std::string& f) { return parse_number(f).has_value(); });
      if (!numeric) {
        data.had_header = true;
        if (fields.size() < need) {
          throw InputError("header on line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                           " columns; column " + std::to_string(need) + " requested");
        }
        continue;
      }
    }
    if (fields.size() < need) {
      throw InputError("line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                       " columns; column " + std::to_string(need) + " requested");
    }
    const auto x = parse_number(fields[cols.first - 1]);
    const auto y = parse_number(fields[cols.second - 1]);
    if (!x || !y) {
      const auto& bad = x ? fields[cols.second - 1] : fields[cols.first - 1];
      throw InputError("line " + std::to_string(line_no) + ": '" + bad +
                       "' is not a number (comma-separated fields, decimal point only)");
    }
    data.x.push_back(*x);
    data.y.push_back(*y);
  }
  if (data.x.size() < 2) throw InputError("need at least 2 data rows, found " + std::to_string(data.x.size()));
  return data;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rank correlation estimators, population values and asymptotic variances", "rankcorr"};
  app.set_version_flag("--version", std::string(RANKCORR_VERSION));
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Seed for simulations, jitter and benchmarks")->capture_default_str();
  app.add_flag("--json", g.json, "Emit one JSON object (manifest + results)");
  app.add_option("--out", g.out, "Write output to this file, with a manifest beside it");
  app.add_option("--threads", g.threads, "Worker threads (RANKCORR_THREADS overrides)")->capture_default_str();

  auto* estimate = app.add_subcommand("estimate", "Estimate all coefficients from a CSV file");
  std::string csv_path, cols;
  bool jitter = false;
  estimate->add_option("csv", csv_path, "Input CSV")->required();
  estimate->add_option("--cols", cols, "Two 1-based column indices, e.g. 1,3");
  estimate->add_flag("--jitter", jitter, "Break ties with seeded random order instead of failing");

  auto* theory = app.add_subcommand("theory", "Population coefficients and leading variance terms");
  std::string model;
  double t = 0.0;
  std::size_t theory_n = 0;
  theory->add_option("--model", model, "fgm, normal or pareto")->required();
  theory->add_option("--t", t, "Model parameter")->required();
  auto* n_opt = theory->add_option("--n", theory_n, "Sample size for exact expectations");

  auto* table = app.add_subcommand("table", "Reproduce a comparison table");
  std::string table_id;
  std::size_t reps = 1000, table_n = 1000;
  table->add_option("--reproduce", table_id, "2.1, 2.2, 2.3 or 2.4")->required();
  table->add_option("--reps", reps, "Replications")->capture_default_str();
  table->add_option("--n", table_n, "Sample size")->capture_default_str();

  auto* bench = app.add_subcommand("bench", "Time kendall and T_n on random permutations");
  std::vector<std::size_t> sizes{1000, 10000, 100000};
  std::string algo = "fast";
  bench->add_option("--n", sizes, "Sizes")->delimiter(',')->capture_default_str();
  bench->add_option("--algo", algo, "naive or fast")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    g.threads = threads_from_env(g.threads);
    if (g.threads == 0) throw ParameterOutOfRange("--threads must be at least 1");
    Output o;
    std::string command;
    if (*estimate) {
      command = "estimate";
      o = cmd_estimate(csv_path, cols, jitter, g);
    } else if (*theory) {
      command = "theory";
      o = cmd_theory(model, t, *n_opt ? std::optional<std::size_t>(theory_n) : std::nullopt, g);
    } else if (*table) {
      command = "table";
      o = cmd_table(table_id, reps, table_n, g);
    } else {
      command = "bench";
      o = cmd_bench(sizes, algo, g);
    }
    emit(o, command, args, g, out);
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace rankcorr::cli
