#pragma once

// Synthetic experiment grid: for every (d, n, trial) draw data from a
// covariance model, estimate the spectrum, and compare it and the empirical
// spectrum against the truth in W1. Writes per-trial CDF curves and a
// summary table as CSV.

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <locale>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "specest/parallel.hpp"
#include "specest/recovery.hpp"
#include "specest/synth.hpp"
#include "specest/wasserstein.hpp"

namespace specest {

struct ExperimentSpec {
  Family family = Family::identity;
  std::vector<std::size_t> dims{512};
  std::vector<double> n_ratios{0.125, 0.25, 0.5, 1.0, 2.0};
  std::size_t trials = 5;
  std::size_t k_max = 7;
  std::optional<double> b;  // default: 1.5 x the model's largest eigenvalue
  EntryDistribution entry{};
  std::uint64_t seed = 1;
  std::string out_dir = "results";
  std::size_t mesh_cap = 4001;
  WeightScheme weights = WeightScheme::theoretical;
  std::size_t threads = 1;
  bool record_timing = true;  // false writes runtime_ms = 0 for byte-stable output

  void validate() const {
    if (dims.empty()) throw std::invalid_argument("ExperimentSpec: no dimensions");
    if (n_ratios.empty()) throw std::invalid_argument("ExperimentSpec: no sample ratios");
    if (trials < 1) throw std::invalid_argument("ExperimentSpec: trials must be >= 1");
    if (k_max < 1) throw std::invalid_argument("ExperimentSpec: k must be >= 1");
    if (b && !(*b > 0.0)) throw std::invalid_argument("ExperimentSpec: b must be > 0");
    for (double r : n_ratios)
      if (!(r > 0.0)) throw std::invalid_argument("ExperimentSpec: sample ratios must be > 0");
    for (std::size_t d : dims)
      if (d < 1) throw std::invalid_argument("ExperimentSpec: dimensions must be >= 1");
  }
};

inline std::size_t samples_for(std::size_t d, double ratio) {
  return static_cast<std::size_t>(std::llround(static_cast<double>(d) * ratio));
}

/// Right-continuous step CDF of an empirical distribution.
struct CdfCurve {
  std::string label;
  std::vector<double> x;
  std::vector<double> cdf;

  /// Nondecreasing in both coordinates and ending at exactly 1.
  bool valid() const {
    if (x.empty() || x.size() != cdf.size()) return false;
    for (std::size_t i = 1; i < x.size(); ++i)
      if (!(x[i] > x[i - 1]) || cdf[i] < cdf[i - 1]) return false;
    return cdf.front() >= 0.0 && cdf.back() == 1.0;
  }
};

inline CdfCurve cdf_of(std::string label, const std::vector<double>& sorted_values) {
  CdfCurve c{std::move(label), {}, {}};
  const double n = static_cast<double>(sorted_values.size());
  for (std::size_t i = 0; i < sorted_values.size(); ++i) {
    const double v = sorted_values[i];
    if (!c.x.empty() && c.x.back() == v) {
      c.cdf.back() = static_cast<double>(i + 1) / n;
    } else {
      c.x.push_back(v);
      c.cdf.push_back(static_cast<double>(i + 1) / n);
    }
  }
  if (!c.cdf.empty()) c.cdf.back() = 1.0;
  return c;
}

namespace detail {

inline std::string format_number(double v, int digits = 12) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(digits) << v;
  return os.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace detail

inline std::string cdf_csv(const CdfCurve& c) {
  std::string s = "x,cdf\n";
  for (std::size_t i = 0; i < c.x.size(); ++i)
    s += detail::format_number(c.x[i], 17) + "," + detail::format_number(c.cdf[i], 17) + "\n";
  return s;
}

/// Reads back a CDF CSV written by cdf_csv and checks it is a valid CDF.
inline bool validate_cdf_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return false;
  std::string line;
  if (!std::getline(in, line) || line != "x,cdf") return false;
  CdfCurve c;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    if (comma == std::string::npos) return false;
    try {
      c.x.push_back(std::stod(line.substr(0, comma)));
      c.cdf.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      return false;
    }
  }
  return c.valid();
}

struct TrialResult {
  Family family = Family::identity;
  std::size_t d = 0;
  std::size_t n = 0;
  std::size_t trial = 0;
  double w1_recovered = 0.0;
  double w1_empirical = 0.0;
  double runtime_ms = 0.0;
  std::vector<double> truth;
  std::vector<double> empirical;
  std::vector<double> recovered;
};

/// Eigenvalue bound used when the spec does not give one.
inline double default_bound(const CovarianceModel& model) {
  const auto ev = true_spectrum(model);
  return 1.5 * ev.back();
}

inline TrialResult run_trial(const ExperimentSpec& spec, const CovarianceModel& model,
                             const SquareMatrix& s, const std::vector<double>& truth,
                             std::size_t n, std::size_t trial) {
  TrialResult r;
  r.family = model.family;
  r.d = model.d;
  r.n = n;
  r.trial = trial;
  r.truth = truth;

  const DataMatrix y = sample(s, n, spec.entry, trial_seed(spec.seed, trial));
  RecoveryConfig cfg;
  cfg.k_max = spec.k_max;
  cfg.b = spec.b ? *spec.b : default_bound(model);
  cfg.mesh_cap = spec.mesh_cap;
  cfg.weights = spec.weights;

  const auto start = std::chrono::steady_clock::now();
  r.recovered = estimate_spectrum(y, cfg).values();
  const auto stop = std::chrono::steady_clock::now();
  r.runtime_ms =
      spec.record_timing ? std::chrono::duration<double, std::milli>(stop - start).count() : 0.0;

  r.empirical = empirical_spectrum(y);
  const double dd = static_cast<double>(model.d);
  r.w1_recovered = l1_sorted(r.recovered, truth) / dd;
  r.w1_empirical = l1_sorted(r.empirical, truth) / dd;
  return r;
}

struct ExperimentReport {
  std::vector<TrialResult> rows;       // ordered by (d, n, trial)
  std::vector<std::string> failures;   // one message per failed cell/trial
  std::vector<std::filesystem::path> files;

  bool ok() const { return failures.empty(); }
};

inline std::string cdf_file_name(const TrialResult& r, const std::string& label) {
  return "cdf_" + std::string(to_string(r.family)) + "_d" + std::to_string(r.d) + "_n" +
         std::to_string(r.n) + "_trial" + std::to_string(r.trial) + "_" + label + ".csv";
}

inline std::string summary_csv(const std::vector<TrialResult>& rows) {
  std::string s = "family,d,n,trial,w1_recovered,w1_empirical,runtime_ms\n";
  for (const auto& r : rows) {
    s += std::string(to_string(r.family)) + "," + std::to_string(r.d) + "," + std::to_string(r.n) +
         "," + std::to_string(r.trial) + "," + detail::format_number(r.w1_recovered) + "," +
         detail::format_number(r.w1_empirical) + "," + detail::format_number(std::round(r.runtime_ms)) +
         "\n";
  }
  return s;
}

/// Runs the full grid. Trials of one (d, n) cell run in parallel; results
/// are joined in (d, n, trial) order before anything is written.
inline ExperimentReport run_experiment(const ExperimentSpec& spec, bool write_files = true) {
  spec.validate();
  namespace fs = std::filesystem;
  ExperimentReport report;
  const fs::path out(spec.out_dir);
  if (write_files) {
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec || !fs::is_directory(out))
      throw std::runtime_error("cannot create output directory " + out.string());
  }

  for (std::size_t d : spec.dims) {
    CovarianceModel model;
    model.family = spec.family;
    model.d = d;
    SquareMatrix s = SquareMatrix::identity(1);
    std::vector<double> truth;
    try {
      s = factor(model);
      truth = true_spectrum(model);
    } catch (const std::exception& e) {
      report.failures.push_back("d=" + std::to_string(d) + ": " + e.what());
      continue;
    }

    for (double ratio : spec.n_ratios) {
      const std::size_t n = samples_for(d, ratio);
      if (n < spec.k_max) {
        report.failures.push_back("d=" + std::to_string(d) + " n=" + std::to_string(n) +
                                  ": n is smaller than k = " + std::to_string(spec.k_max));
        continue;
      }
      std::vector<std::optional<TrialResult>> cell(spec.trials);
      std::vector<std::string> errors(spec.trials);
      parallel_for(spec.trials, spec.threads, [&](std::size_t t) {
        try {
          cell[t] = run_trial(spec, model, s, truth, n, t);
        } catch (const std::exception& e) {
          errors[t] = e.what();
        }
      });
      for (std::size_t t = 0; t < spec.trials; ++t) {
        if (!cell[t]) {
          report.failures.push_back("d=" + std::to_string(d) + " n=" + std::to_string(n) +
                                    " trial=" + std::to_string(t) + ": " + errors[t]);
          continue;
        }
        report.rows.push_back(std::move(*cell[t]));
      }
    }
  }

  if (write_files) {
    for (const auto& r : report.rows) {
      const CdfCurve curves[] = {cdf_of("true", r.truth), cdf_of("empirical", r.empirical),
                                 cdf_of("recovered", r.recovered)};
      for (const auto& c : curves) {
        const fs::path path = out / cdf_file_name(r, c.label);
        detail::write_text_file(path, cdf_csv(c));
        if (!validate_cdf_file(path))
          report.failures.push_back("invalid CDF written to " + path.string());
        report.files.push_back(path);
      }
    }
    const fs::path summary = out / "summary.csv";
    detail::write_text_file(summary, summary_csv(report.rows));
    report.files.push_back(summary);
  }
  return report;
}

}  // namespace specest
