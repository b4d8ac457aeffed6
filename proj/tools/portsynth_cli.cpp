// Command-line driver: runs the synthesis pipeline or one of its stages from
// a JSON config and writes deterministic artifacts into an output directory.
//
// Exit codes: 0 all corners stable, 1 infeasible or any unstable corner,
// 2 input errors, 3 numerical failures.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "portsynth/coprime.hpp"
#include "portsynth/errors.hpp"
#include "portsynth/pipeline.hpp"

namespace {

using portsynth::Complex;
using ordered_json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw portsynth::IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
  if (!out) throw portsynth::IoError("cannot open " + tmp);
  out << content;
  out.close();
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw portsynth::IoError("rename failed: " + ec.message());
}

ordered_json coeff_object(const portsynth::RationalFunction& r) {
  ordered_json j;
  j["num_coeffs"] = r.num().coeffs();
  j["den_coeffs"] = r.den().coeffs();
  return j;
}

ordered_json roots_array(const std::vector<Complex>& rts) {
  ordered_json out = ordered_json::array();
  for (const Complex& r : rts) out.push_back({r.real(), r.imag()});
  return out;
}

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  int grid_points = -1;
  double tolerance_pct = -1.0;
  double beta_tol = -1.0;
};

void add_common(CLI::App* cmd, CommonArgs* args) {
  cmd->add_option("--config", args->config_path, "Path to the JSON config")->required();
  cmd->add_option("--out-dir", args->out_dir, "Directory for the emitted artifacts");
  cmd->add_option("--grid-points", args->grid_points, "Override grid.points");
  cmd->add_option("--tolerance-pct", args->tolerance_pct, "Override tolerance_pct");
  cmd->add_option("--beta-tol", args->beta_tol, "Override beta_tol");
}

portsynth::RunConfig load_config(const CommonArgs& args) {
  portsynth::RunConfig cfg = portsynth::parse_config(read_file(args.config_path));
  if (args.grid_points > 0) cfg.grid.points = args.grid_points;
  if (args.tolerance_pct >= 0.0) cfg.tolerance_pct = args.tolerance_pct;
  if (args.beta_tol > 0.0) cfg.beta_tol = args.beta_tol;
  if (cfg.grid.points < 2) throw portsynth::ValidationError("grid.points must be >= 2");
  return cfg;
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw portsynth::IoError("cannot create " + dir + ": " + ec.message());
}

std::string out_path(const CommonArgs& args, const char* name) {
  return (std::filesystem::path(args.out_dir) / name).string();
}

int cmd_derive(const CommonArgs& args) {
  const portsynth::RunConfig cfg = load_config(args);
  const auto z = portsynth::circuit_impedance(cfg.circuit);
  const auto z_min = portsynth::cancel_near_pairs(z, cfg.cancel_tol);
  const auto frac = portsynth::make_coprime_fraction(z_min);

  ordered_json j;
  j["impedance"] = coeff_object(z);
  j["impedance_minimal"] = coeff_object(z_min);
  j["impedance_zeros"] = roots_array(z_min.zeros());
  j["impedance_poles"] = roots_array(z_min.poles());
  j["N"] = coeff_object(frac.N);
  j["D"] = coeff_object(frac.D);
  j["X"] = coeff_object(frac.X);
  j["Y"] = coeff_object(frac.Ycof);
  ensure_out_dir(args.out_dir);
  write_atomic(out_path(args, "derive.json"), j.dump(2) + "\n");
  return 0;
}

int cmd_sweep(const CommonArgs& args) {
  const portsynth::RunConfig cfg = load_config(args);
  const auto grid = portsynth::build_grid(cfg.grid);
  const auto sweep =
      portsynth::sweep_perturbations(cfg.circuit, cfg.tolerance_pct, grid, cfg.cancel_tol);
  ensure_out_dir(args.out_dir);
  write_atomic(out_path(args, "loci.csv"), portsynth::loci_csv(sweep));

  const auto env = portsynth::sweep_envelope(sweep);
  ordered_json j;
  j["omega"] = sweep.grid_points;
  j["envelope"] = env;
  write_atomic(out_path(args, "envelope.json"), j.dump(2) + "\n");
  return 0;
}

int cmd_bound(const CommonArgs& args) {
  const portsynth::RunConfig cfg = load_config(args);
  const auto grid = portsynth::build_grid(cfg.grid);
  const auto sweep =
      portsynth::sweep_perturbations(cfg.circuit, cfg.tolerance_pct, grid, cfg.cancel_tol);
  const auto bound = portsynth::select_bound(cfg, sweep, grid);
  ordered_json j;
  j["mode"] = cfg.manual_bound ? "manual" : "auto";
  j["bound"] = coeff_object(bound);
  ensure_out_dir(args.out_dir);
  write_atomic(out_path(args, "bound.json"), j.dump(2) + "\n");
  return 0;
}

int run_full(const CommonArgs& args, bool verify_only) {
  const portsynth::RunConfig cfg = load_config(args);
  const auto outcome = portsynth::run_pipeline(cfg, args.out_dir);
  if (verify_only) {
    // The verify stage reuses the pipeline and highlights the verdicts.
    int unstable = 0;
    for (const auto& v : outcome.synthesis.verdicts)
      if (!v.stable) ++unstable;
    std::cout << (outcome.synthesis.verdicts.size() - static_cast<std::size_t>(unstable))
              << "/" << outcome.synthesis.verdicts.size() << " corners stable\n";
  } else {
    std::cout << "report: " << outcome.bundle.report_json_path << "\n";
  }
  return outcome.exit_code;
}

int cmd_synth(const CommonArgs& args) {
  const portsynth::RunConfig cfg = load_config(args);
  const auto grid = portsynth::build_grid(cfg.grid);
  const auto sweep =
      portsynth::sweep_perturbations(cfg.circuit, cfg.tolerance_pct, grid, cfg.cancel_tol);
  const auto res = portsynth::synthesize(cfg, sweep, grid);

  ordered_json j;
  j["status"] = res.infeasible ? "infeasible" : "ok";
  j["bound"] = coeff_object(res.bound);
  j["beta"] = res.match.beta;
  j["gamma"] = res.match.gamma;
  j["achieved_norm"] = res.match.achieved_norm;
  j["q"] = coeff_object(res.match.Q);
  j["zc"] = coeff_object(res.Zc);
  ensure_out_dir(args.out_dir);
  write_atomic(out_path(args, "synth.json"), j.dump(2) + "\n");
  return res.infeasible ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust one-port compensator synthesis"};
  app.require_subcommand(1);

  CommonArgs args;
  CLI::App* derive = app.add_subcommand("derive", "Impedance and coprime fractions");
  CLI::App* sweep = app.add_subcommand("sweep", "Perturbation corner sweep and loci");
  CLI::App* bound = app.add_subcommand("bound", "Uncertainty bound (fit or validate)");
  CLI::App* synth = app.add_subcommand("synth", "Model matching and compensator");
  CLI::App* verify = app.add_subcommand("verify", "Corner stability verification");
  CLI::App* pipeline = app.add_subcommand("pipeline", "Full synthesis pipeline");
  for (CLI::App* cmd : {derive, sweep, bound, synth, verify, pipeline})
    add_common(cmd, &args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (derive->parsed()) return cmd_derive(args);
    if (sweep->parsed()) return cmd_sweep(args);
    if (bound->parsed()) return cmd_bound(args);
    if (synth->parsed()) return cmd_synth(args);
    if (verify->parsed()) return run_full(args, true);
    return run_full(args, false);
  } catch (const portsynth::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const portsynth::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const portsynth::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const portsynth::Infeasible& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 1;
  } catch (const portsynth::Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 3;
  }
}
