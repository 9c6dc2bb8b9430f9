// spinqfi: config-driven front end.
//
//   spinqfi run <config.toml> [-o out.csv]
//   spinqfi preset <name> [-o out.csv]
//   spinqfi presets
//   spinqfi show-preset <name>
//   spinqfi spectrum --N 8 [--chi 0.1] [-o spectrum.csv]
//   spinqfi oracle-check [--N 6 ...] [-o report.csv]

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spinqfi/config.hpp"
#include "spinqfi/io.hpp"
#include "spinqfi/runner.hpp"
#include "spinqfi/spectrum.hpp"

namespace {

int report(const spinqfi::RunResult& res) {
  for (const auto& f : res.files) std::cerr << "wrote " << f.string() << "\n";
  return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace spinqfi;

  CLI::App app{"Qubit-probe thermometry and coupling estimation in an Ising spin bath"};
  app.require_subcommand(1);

  std::string config_path, output, preset_name;

  auto* run_cmd = app.add_subcommand("run", "Run an experiment config");
  run_cmd->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("-o,--output", output, "Output CSV (overrides the config)");

  auto* preset_cmd = app.add_subcommand("preset", "Run a built-in preset");
  preset_cmd->add_option("name", preset_name, "Preset name")->required();
  preset_cmd->add_option("-o,--output", output, "Output CSV (overrides the preset)");

  auto* list_cmd = app.add_subcommand("presets", "List built-in presets");

  auto* show_cmd = app.add_subcommand("show-preset", "Print a preset as a config file");
  show_cmd->add_option("name", preset_name, "Preset name")->required();

  ModelParams sp;
  sp.N = 8;
  std::vector<double> sp_omega, sp_chi;
  std::string sp_boundary = "periodic";
  auto* spec_cmd = app.add_subcommand("spectrum", "Dump the bath class spectrum as CSV");
  spec_cmd->add_option("--N", sp.N, "Number of bath spins")->required();
  spec_cmd->add_option("--omega", sp_omega, "Bath spin splitting(s)");
  spec_cmd->add_option("--chi", sp_chi, "Nearest-neighbour coupling(s)");
  spec_cmd->add_option("--g", sp.g, "Probe-bath coupling");
  spec_cmd->add_option("--boundary", sp_boundary, "periodic|open");
  spec_cmd->add_option("-o,--output", output, "Output CSV (stdout when omitted)");

  std::vector<int> oracle_N;
  auto* oracle_cmd = app.add_subcommand("oracle-check", "Compare the class dynamics against dense evolution");
  oracle_cmd->add_option("--N", oracle_N, "Bath sizes (default 2 4 6 8)");
  oracle_cmd->add_option("-o,--output", output, "Report CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return report(run_file(config_path, output));

    if (*preset_cmd) return report(run(builtin_preset(preset_name), output));

    if (*list_cmd) {
      for (const auto& [name, cfg] : builtin_presets())
        std::cout << name << "\t" << cfg.command_name() << "\tN=" << cfg.params.N << "\n";
      return kExitOk;
    }

    if (*show_cmd) {
      std::cout << serialize_config(builtin_preset(preset_name));
      return kExitOk;
    }

    if (*spec_cmd) {
      if (!sp_omega.empty()) sp.omega = sp_omega;
      if (!sp_chi.empty()) sp.chi = sp_chi;
      sp.boundary = parse_boundary(sp_boundary);
      const ModelParams p = validate_params(sp);
      std::ostringstream os;
      write_spectrum_csv(os, build_spectrum(p));
      if (output.empty())
        std::cout << os.str();
      else
        write_file_atomic(output, os.str());
      return kExitOk;
    }

    if (*oracle_cmd) {
      auto cfg = builtin_preset("oracle-check");
      if (!oracle_N.empty()) std::get<OracleCheckCommand>(cfg.command).N_list = oracle_N;
      return report(run(cfg, output));
    }
  } catch (const ParamError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
