#include "portsynth/pipeline.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "portsynth/errors.hpp"

namespace portsynth {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json coeff_object(const RationalFunction& r) {
  ordered_json j;
  j["num_coeffs"] = r.num().coeffs();
  j["den_coeffs"] = r.den().coeffs();
  return j;
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp);
    out << content;
    if (!out) throw IoError("write failed for " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("rename to " + path + " failed: " + ec.message());
}

}  // namespace

std::string loci_csv(const SweepResult& sweep) {
  std::string out = "omega,corner_id,norm\n";
  out.reserve(64 * sweep.grid_points.size() * sweep.corners.size());
  char buf[128];
  for (std::size_t i = 0; i < sweep.grid_points.size(); ++i) {
    for (std::size_t c = 0; c < sweep.corners.size(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g,%zu,%.17g\n", sweep.grid_points[i], c,
                    sweep.corners[c].norm_curve[i]);
      out += buf;
    }
  }
  return out;
}

std::string report_json(const SynthesisResult& res) {
  ordered_json j;
  j["status"] = res.infeasible ? "infeasible" : "ok";
  if (res.infeasible) j["reason"] = res.infeasible_reason;
  j["bound"] = coeff_object(res.bound);
  j["y_inf"] = res.match.yvec_norm;
  j["t1_inf"] = res.match.t1_norm;
  j["beta"] = res.match.beta;
  j["gamma"] = res.match.gamma;
  j["hankel_norm"] = res.match.hankel_norm;
  j["achieved_norm"] = res.match.achieved_norm;
  j["q"] = coeff_object(res.match.Q);
  j["zc"] = coeff_object(res.Zc);

  ordered_json corners = ordered_json::array();
  int stable_count = 0;
  for (const CornerVerdict& v : res.verdicts) {
    ordered_json c;
    c["levels"] = v.levels;
    c["stable"] = v.stable;
    ordered_json poles = ordered_json::array();
    for (const Complex& p : v.poles) poles.push_back({p.real(), p.imag()});
    c["poles"] = std::move(poles);
    corners.push_back(std::move(c));
    if (v.stable) ++stable_count;
  }
  j["stable_corners"] = stable_count;
  j["corners"] = std::move(corners);
  return j.dump(2) + "\n";
}

ReportBundle emit_artifacts(const SynthesisResult& res, const SweepResult& sweep,
                            const std::string& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());

  ReportBundle bundle;
  bundle.loci_csv_path = (std::filesystem::path(out_dir) / "loci.csv").string();
  bundle.report_json_path = (std::filesystem::path(out_dir) / "report.json").string();
  write_atomic(bundle.loci_csv_path, loci_csv(sweep));
  write_atomic(bundle.report_json_path, report_json(res));
  return bundle;
}

RationalFunction select_bound(const RunConfig& cfg, const SweepResult& sweep,
                              const FrequencyGrid& grid) {
  if (cfg.manual_bound) {
    const RationalFunction bound(Polynomial(cfg.manual_bound->num),
                                 Polynomial(cfg.manual_bound->den));
    if (!bound.in_S()) throw ValidationError("manual bound is not proper and stable");
    if (!bound_dominates(bound, sweep, grid))
      throw FitFailed("manual bound falls below the perturbation envelope");
    return bound;
  }
  return fit_bound(sweep, grid);
}

SynthesisResult synthesize(const RunConfig& cfg, const SweepResult& sweep,
                           const FrequencyGrid& grid, ExecutionMode mode) {
  SynthesisResult res;
  res.bound = select_bound(cfg, sweep, grid);

  const RationalFunction z_min =
      cancel_near_pairs(circuit_impedance(cfg.circuit), cfg.cancel_tol);
  const CoprimeFraction frac = make_coprime_fraction(z_min);
  const MatchingData md = build_T1_T2(res.bound, frac);

  try {
    res.match = model_match(md.T1, md.T2, cfg.beta_tol, grid);
  } catch (const Infeasible& e) {
    res.infeasible = true;
    res.infeasible_reason = e.what();
    return res;
  }
  // ||Yvec|| lower-bounds the matching error, so >= 1 certifies that no Q
  // meets the robustness margin regardless of the beta search outcome.
  if (res.match.yvec_norm >= 1.0) {
    res.infeasible = true;
    res.infeasible_reason = "||(I - Ui Ui*) T1|| >= 1; no Q achieves margin < 1";
    return res;
  }

  res.Zc = compensator(frac, res.match.Q);
  res.verdicts = verify_robust(res.Zc, cfg.circuit, cfg.tolerance_pct, cfg.cancel_tol, mode);
  return res;
}

PipelineOutcome run_pipeline(const RunConfig& cfg, const std::string& out_dir,
                             ExecutionMode mode) {
  PipelineOutcome out;
  const FrequencyGrid grid = build_grid(cfg.grid);
  out.sweep = sweep_perturbations(cfg.circuit, cfg.tolerance_pct, grid, cfg.cancel_tol, mode);
  out.synthesis = synthesize(cfg, out.sweep, grid, mode);
  out.bundle = emit_artifacts(out.synthesis, out.sweep, out_dir);

  if (out.synthesis.infeasible) {
    out.exit_code = 1;
  } else {
    out.exit_code = 0;
    for (const CornerVerdict& v : out.synthesis.verdicts)
      if (!v.stable) out.exit_code = 1;
  }
  return out;
}

}  // namespace portsynth
