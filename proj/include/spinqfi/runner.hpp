#pragma once

// Executes an ExperimentConfig and writes its CSV output.
//
// Exit codes: 0 success, 1 oracle-check deviation above threshold,
// 2 config error, 3 numeric-domain error.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "spinqfi/config.hpp"
#include "spinqfi/dynamics.hpp"
#include "spinqfi/estimation.hpp"
#include "spinqfi/io.hpp"
#include "spinqfi/oracle.hpp"
#include "spinqfi/qfi.hpp"

namespace spinqfi {

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitConfig = 2, kExitDomain = 3 };

struct RunResult {
  int exit_code = kExitOk;
  std::vector<std::filesystem::path> files;
};

inline constexpr const char* kTrajectoryColumns = "t,nx,ny,nz,Gamma,phase,mode";
inline constexpr const char* kQfiColumns = "t,x_name,x_value,F,mode,route,deriv_step";
inline constexpr const char* kSweepColumns = "variable,x_value,mode,t_star,F_star,boundary_flag";
inline constexpr const char* kRatioColumns = "variable,x_value,pair,ratio";
inline constexpr const char* kOracleColumns = "N,mode,g,T,chi,max_bloch_dev,threshold,pass";

namespace detail {

inline std::string render_trajectory(const ExperimentConfig& cfg, const TrajectoryCommand& c) {
  CsvWriter csv(serialize_config(cfg), kTrajectoryColumns);
  const Spectrum spectrum = build_spectrum(cfg.params);
  for (auto mode : c.modes) {
    const auto e = prepare(cfg.params, spectrum, mode);
    for (int i = 0; i < c.grid.points; ++i) {
      const auto d = reduced_bloch(e, c.grid.at(i));
      csv.cell(d.t).cell(d.r.x).cell(d.r.y).cell(d.r.z).cell(d.Gamma).cell(d.phase).cell(to_string(mode));
      csv.end_row();
    }
  }
  return csv.str();
}

inline std::string render_qfi_time(const ExperimentConfig& cfg, const QfiTimeCommand& c) {
  CsvWriter csv(serialize_config(cfg), kQfiColumns);
  std::vector<double> values = c.values;
  if (values.empty()) values.push_back(estimator_value(cfg.params, c.estimator));
  for (double x : values) {
    const ModelParams q = validate_params(with_estimator(cfg.params, c.estimator, x));
    for (auto mode : c.modes) {
      const SensitivityModel model(q, mode, c.estimator);
      for (int i = 0; i < c.grid.points; ++i) {
        const auto rec = model.qfi(c.grid.at(i), c.route);
        if (std::isnan(rec.F))
          throw DomainError("QFI is NaN at " + std::string(to_string(c.estimator)) + "=" + format_number(x) +
                            ", mode " + std::string(to_string(mode)) + ", t=" + format_number(rec.t));
        csv.cell(rec.t).cell(to_string(rec.estimator)).cell(rec.x).cell(rec.F).cell(to_string(mode));
        csv.cell(to_string(rec.route)).cell(rec.deriv_step);
        csv.end_row();
      }
    }
  }
  return csv.str();
}

inline void write_sweep_rows(CsvWriter& csv, const std::vector<OptimumRecord>& records) {
  for (const auto& r : records) {
    csv.cell(to_string(r.variable)).cell(r.x_value).cell(to_string(r.mode)).cell(r.t_star).cell(r.F_star);
    csv.cell(r.boundary_flag);
    csv.end_row();
  }
}

inline int report_failed_cells(const std::vector<OptimumRecord>& records) {
  int code = kExitOk;
  for (const auto& r : records) {
    if (r.ok()) continue;
    std::cerr << "error: cell " << to_string(r.variable) << "=" << format_number(r.x_value) << ", mode "
              << to_string(r.mode) << ": " << r.error << "\n";
    code = kExitDomain;
  }
  return code;
}

inline std::filesystem::path ratios_path(const std::filesystem::path& out) {
  auto p = out;
  if (p.extension() == ".csv") p.replace_extension();
  p += ".ratios.csv";
  return p;
}

inline int run_oracle_check(const ExperimentConfig& cfg, const OracleCheckCommand& c, CsvWriter& csv) {
  int code = kExitOk;
  for (int N : c.N_list) {
    if (N > oracle::kMaxOracleSpins)
      throw ParamError("oracle-check supports N <= " + std::to_string(oracle::kMaxOracleSpins));
    for (double g : c.g_list)
      for (double T : c.T_list)
        for (double chi : c.chi_list) {
          ModelParams p = cfg.params;
          p.N = N;
          p.g = g;
          p.T = T;
          p.chi = {chi};
          p = validate_params(p);
          const Spectrum spectrum = build_spectrum(p);
          const oracle::Propagator prop(p);
          const auto states = oracle::prepare_total_states(p);
          for (std::size_t m = 0; m < std::size(kAllModes); ++m) {
            const auto mode = kAllModes[m];
            const auto e = prepare(p, spectrum, mode);
            const oracle::Trajectory traj(prop, states[m]);
            double worst = 0.0;
            for (int i = 0; i < c.times; ++i) {
              const double t = c.times == 1 ? 0.0 : c.t_max * i / (c.times - 1);
              const auto r = evolve_bloch(e, t);
              const auto ro = traj.reduced_state(t).bloch();
              worst = std::max(worst, (r - ro).norm());
            }
            const bool pass = worst <= c.threshold;
            if (!pass) {
              std::cerr << "oracle-check: N=" << N << " mode " << to_string(mode) << " g=" << format_number(g)
                        << " T=" << format_number(T) << " chi=" << format_number(chi)
                        << " deviation " << format_number(worst) << "\n";
              code = kExitCheckFailed;
            }
            csv.cell(N).cell(to_string(mode)).cell(g).cell(T).cell(chi).cell(worst).cell(c.threshold).cell(pass);
            csv.end_row();
          }
        }
  }
  return code;
}

}  // namespace detail

/// Runs the config and writes its output file(s) relative to `output`
/// (the config's own output path when empty). Errors are reported on stderr.
inline RunResult run(const ExperimentConfig& cfg, std::filesystem::path output = {}) {
  if (output.empty()) output = cfg.output;
  RunResult res;
  try {
    std::visit(
        [&](const auto& c) {
          using C = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<C, TrajectoryCommand>) {
            write_file_atomic(output, detail::render_trajectory(cfg, c));
          } else if constexpr (std::is_same_v<C, QfiTimeCommand>) {
            write_file_atomic(output, detail::render_qfi_time(cfg, c));
          } else if constexpr (std::is_same_v<C, OptSweepCommand>) {
            const auto records = sweep_parameter(c.sweep, cfg.params);
            CsvWriter csv(serialize_config(cfg), kSweepColumns);
            detail::write_sweep_rows(csv, records);
            write_file_atomic(output, csv.str());
            res.exit_code = detail::report_failed_cells(records);
          } else if constexpr (std::is_same_v<C, CompareCommand>) {
            const ModelParams q = validate_params(with_estimator(cfg.params, c.estimator, c.x_value));
            const auto cmp = compare_preparations(q, c.estimator, c.x_value, c.window);
            CsvWriter csv(serialize_config(cfg), kSweepColumns);
            detail::write_sweep_rows(csv, cmp.records);
            CsvWriter ratios(serialize_config(cfg), kRatioColumns);
            ratios.cell(to_string(c.estimator)).cell(c.x_value).cell("correlated").cell(cmp.ratio_correlated);
            ratios.end_row();
            ratios.cell(to_string(c.estimator)).cell(c.x_value).cell("uncorrelated").cell(cmp.ratio_uncorrelated);
            ratios.end_row();
            write_file_atomic(output, csv.str());
            const auto rp = detail::ratios_path(output);
            write_file_atomic(rp, ratios.str());
            res.files.push_back(rp);
            res.exit_code = detail::report_failed_cells(cmp.records);
          } else {
            CsvWriter csv(serialize_config(cfg), kOracleColumns);
            res.exit_code = detail::run_oracle_check(cfg, c, csv);
            write_file_atomic(output, csv.str());
          }
        },
        cfg.command);
    res.files.insert(res.files.begin(), output);
  } catch (const ParamError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    res.exit_code = kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    res.exit_code = kExitDomain;
  }
  return res;
}

/// Loads and runs a config file.
inline RunResult run_file(const std::string& path, std::filesystem::path output = {}) {
  ExperimentConfig cfg;
  try {
    cfg = load_config(path);
  } catch (const ParamError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return {kExitConfig, {}};
  }
  return run(cfg, std::move(output));
}

}  // namespace spinqfi
