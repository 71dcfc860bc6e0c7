#pragma once

// specest command line: `simulate`, `estimate` and `lower-bound`.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "specest/specest.hpp"

namespace specest::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

/// "0.25", "1/4" or "2" -> double.
inline double parse_ratio(const std::string& text) {
  const auto slash = text.find('/');
  std::size_t used = 0;
  try {
    if (slash == std::string::npos) {
      const double v = std::stod(text, &used);
      if (used == text.size() && v > 0.0) return v;
    } else {
      const std::string num = text.substr(0, slash);
      const std::string den = text.substr(slash + 1);
      std::size_t used_den = 0;
      const double a = std::stod(num, &used);
      const double b = std::stod(den, &used_den);
      if (used == num.size() && used_den == den.size() && a > 0.0 && b > 0.0) return a / b;
    }
  } catch (const std::exception&) {
  }
  throw std::invalid_argument("invalid sample ratio '" + text + "'");
}

inline WeightScheme parse_weights(const std::string& s) {
  if (s == "theoretical") return WeightScheme::theoretical;
  if (s == "uniform") return WeightScheme::uniform;
  throw std::invalid_argument("unknown weight scheme '" + s + "'");
}

inline int cmd_simulate(const ExperimentSpec& spec, std::ostream& out, std::ostream& err) {
  ExperimentReport report;
  try {
    report = run_experiment(spec);
  } catch (const std::exception& e) {
    err << "simulate: " << e.what() << '\n';
    return kFailure;
  }
  for (const auto& r : report.rows) {
    out << to_string(r.family) << " d=" << r.d << " n=" << r.n << " trial=" << r.trial
        << " w1_recovered=" << r.w1_recovered << " w1_empirical=" << r.w1_empirical << '\n';
  }
  out << "wrote " << report.files.size() << " files to " << spec.out_dir << '\n';
  if (!report.ok()) {
    err << "simulate: " << report.failures.size() << " failed run(s):\n";
    for (const auto& f : report.failures) err << "  " << f << '\n';
    return kFailure;
  }
  return kOk;
}

struct EstimateOptions {
  std::string input;
  std::string output;  // empty: stdout
  std::size_t k_max = 7;
  std::optional<double> b;
  std::size_t mesh_cap = 4001;
  WeightScheme weights = WeightScheme::theoretical;
};

inline int cmd_estimate(const EstimateOptions& opts, std::ostream& out, std::ostream& err) {
  if (opts.k_max < 1) {
    err << "estimate: --k must be at least 1\n";
    return kUsage;
  }
  DataMatrix y = DataMatrix(Matrix::Zero(1, 1));
  try {
    y = read_matrix_csv(opts.input);
  } catch (const parse_error& e) {
    err << "estimate: " << opts.input << ": " << e.what() << '\n';
    return kFailure;
  } catch (const std::exception& e) {
    err << "estimate: " << e.what() << '\n';
    return kFailure;
  }
  if (opts.k_max > y.samples()) {
    err << "estimate: k = " << opts.k_max << " exceeds the number of samples n = " << y.samples()
        << '\n';
    return kUsage;
  }

  RecoveryConfig cfg;
  cfg.k_max = opts.k_max;
  cfg.mesh_cap = opts.mesh_cap;
  cfg.weights = opts.weights;
  if (opts.b) {
    cfg.b = *opts.b;
  } else {
    cfg.b = heuristic_bound(y);
    err << "estimate: no --b given; using heuristic bound b = " << cfg.b
        << " (twice the top empirical eigenvalue, not a guaranteed bound)\n";
  }

  SpectrumEstimate est;
  try {
    est = estimate_spectrum_detailed(y, cfg);
  } catch (const std::exception& e) {
    err << "estimate: " << e.what() << '\n';
    return kFailure;
  }
  if (est.recovery.status == SolveStatus::iteration_limit)
    err << "estimate: warning: LP stopped at the iteration limit\n";
  if (est.recovery.mesh_coarsened)
    err << "estimate: mesh step widened to " << est.recovery.mesh_step << " by --mesh-cap\n";

  std::ostringstream text;
  text << std::setprecision(12);
  for (double v : est.spectrum.values()) text << v << '\n';
  if (opts.output.empty()) {
    out << text.str();
  } else {
    std::ofstream f(opts.output);
    if (!f) {
      err << "estimate: cannot write " << opts.output << '\n';
      return kFailure;
    }
    f << text.str();
  }
  return kOk;
}

/// Atoms, moment differences and W1 separation of the Chebyshev pair.
inline nlohmann::json lower_bound_report(std::size_t k) {
  const MomentMatchedPair pair = chebyshev_construction(k);
  const auto mp = moments_of(pair.p, k);
  const auto mq = moments_of(pair.q, k);
  std::vector<double> diff(k);
  double max_diff = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    diff[i] = mp[i] - mq[i];
    if (i < k - 2) max_diff = std::max(max_diff, std::abs(diff[i]));
  }
  const double dist = w1(pair.p, pair.q);
  const double threshold = 1.0 / (2.0 * static_cast<double>(k));

  nlohmann::json j;
  j["k"] = k;
  j["roots"] = pair.measure.locations;
  j["signed_weights"] = pair.measure.weights;
  j["p"] = {{"locations", pair.p.locations()}, {"masses", pair.p.masses()}};
  j["q"] = {{"locations", pair.q.locations()}, {"masses", pair.q.masses()}};
  j["moment_difference"] = diff;
  j["matched_moments"] = k - 2;
  j["max_matched_moment_difference"] = max_diff;
  j["w1"] = dist;
  j["w1_threshold"] = threshold;
  j["w1_exceeds_threshold"] = dist > threshold;

  const RootWeightReport bounds = root_weight_bounds_check(k);
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : bounds.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"observed_min", c.observed_min},
                      {"observed_max", c.observed_max},
                      {"lower", c.lower},
                      {"upper", c.upper}});
  }
  j["root_weight_bounds"] = checks;
  return j;
}

inline std::string lower_bound_atoms_csv(std::size_t k) {
  const MomentMatchedPair pair = chebyshev_construction(k);
  std::ostringstream os;
  os << std::setprecision(17) << "side,location,mass\n";
  for (std::size_t i = 0; i < pair.p.size(); ++i)
    os << "p," << pair.p.locations()[i] << ',' << pair.p.masses()[i] << '\n';
  for (std::size_t i = 0; i < pair.q.size(); ++i)
    os << "q," << pair.q.locations()[i] << ',' << pair.q.masses()[i] << '\n';
  return os.str();
}

inline int cmd_lower_bound(std::size_t k, const std::string& output, const std::string& atoms_csv,
                           std::ostream& out, std::ostream& err) {
  if (k < 4 || k % 2 != 0) {
    err << "lower-bound: --k must be an even integer >= 4 (got " << k << ")\n";
    return kUsage;
  }
  const std::string text = lower_bound_report(k).dump(2) + "\n";
  if (output.empty()) {
    out << text;
  } else {
    std::ofstream f(output);
    if (!f) {
      err << "lower-bound: cannot write " << output << '\n';
      return kFailure;
    }
    f << text;
  }
  if (!atoms_csv.empty()) {
    std::ofstream f(atoms_csv);
    if (!f) {
      err << "lower-bound: cannot write " << atoms_csv << '\n';
      return kFailure;
    }
    f << lower_bound_atoms_csv(k);
  }
  return kOk;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Population covariance spectrum estimation from few samples"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run the synthetic experiment grid");
  std::string family = "identity";
  std::vector<std::size_t> dims;
  std::vector<std::string> ratios;
  std::size_t trials = 5;
  std::size_t k = 7;
  std::optional<double> b;
  std::string entry = "gaussian";
  std::uint64_t seed = 1;
  std::string out_dir = "results";
  std::size_t mesh_cap = 4001;
  std::string weights = "theoretical";
  bool no_timing = false;
  sim->add_option("--family", family, "identity | two_spike | uniform_spectrum | toeplitz")
      ->capture_default_str();
  sim->add_option("--d", dims, "Dimension (repeatable)")->take_all();
  sim->add_option("--n-ratio", ratios, "n/d ratio, e.g. 1/8 (repeatable)")->take_all();
  sim->add_option("--trials", trials, "Trials per (d, n) cell")->capture_default_str();
  sim->add_option("--k", k, "Number of moments")->capture_default_str();
  sim->add_option("--b", b, "Eigenvalue upper bound (default 1.5 x true maximum)");
  sim->add_option("--entry-dist", entry, "gaussian | rademacher | uniform")->capture_default_str();
  sim->add_option("--seed", seed, "Base seed; trial i uses seed ^ i")->capture_default_str();
  sim->add_option("--out", out_dir, "Output directory")->capture_default_str();
  sim->add_option("--mesh-cap", mesh_cap, "Maximum mesh points")->capture_default_str();
  sim->add_option("--weights", weights, "theoretical | uniform")->capture_default_str();
  sim->add_flag("--no-timing", no_timing, "Write runtime_ms = 0 (byte-reproducible summary)");

  // estimate
  auto* est = app.add_subcommand("estimate", "Estimate the spectrum of a CSV sample matrix");
  EstimateOptions eopts;
  std::string est_weights = "theoretical";
  est->add_option("input", eopts.input, "CSV file, one sample per line")->required();
  est->add_option("--k", eopts.k_max, "Number of moments")->capture_default_str();
  est->add_option("--b", eopts.b, "Eigenvalue upper bound (default: heuristic)");
  est->add_option("--out", eopts.output, "Output file (default stdout)");
  est->add_option("--mesh-cap", eopts.mesh_cap, "Maximum mesh points")->capture_default_str();
  est->add_option("--weights", est_weights, "theoretical | uniform")->capture_default_str();

  // lower-bound
  auto* lb = app.add_subcommand("lower-bound", "Chebyshev moment-matched pair and its report");
  std::size_t lb_k = 8;
  std::string lb_out, lb_csv;
  lb->add_option("--k", lb_k, "Even degree >= 4")->capture_default_str();
  lb->add_option("--out", lb_out, "JSON report file (default stdout)");
  lb->add_option("--atoms-csv", lb_csv, "Also write the atoms of p and q as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*sim) {
      ExperimentSpec spec;
      spec.family = parse_family(family);
      if (!dims.empty()) spec.dims = dims;
      if (!ratios.empty()) {
        spec.n_ratios.clear();
        for (const auto& r : ratios) spec.n_ratios.push_back(parse_ratio(r));
      }
      spec.trials = trials;
      spec.k_max = k;
      spec.b = b;
      spec.entry.kind = parse_entry_kind(entry);
      spec.seed = seed;
      spec.out_dir = out_dir;
      spec.mesh_cap = mesh_cap;
      spec.weights = parse_weights(weights);
      spec.threads = default_thread_count();
      spec.record_timing = !no_timing;
      spec.validate();
      return cmd_simulate(spec, out, err);
    }
    if (*est) {
      eopts.weights = parse_weights(est_weights);
      return cmd_estimate(eopts, out, err);
    }
    if (*lb) return cmd_lower_bound(lb_k, lb_out, lb_csv, out, err);
  } catch (const std::invalid_argument& e) {
    err << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace specest::cli
