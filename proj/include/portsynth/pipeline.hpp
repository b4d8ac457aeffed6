#ifndef PORTSYNTH_PIPELINE_HPP_
#define PORTSYNTH_PIPELINE_HPP_

#include <string>

#include "portsynth/config.hpp"
#include "portsynth/synthesis.hpp"

namespace portsynth {

struct ReportBundle {
  std::string loci_csv_path;
  std::string report_json_path;
};

/// Serializes the loci CSV ("omega,corner_id,norm", 17 significant digits).
std::string loci_csv(const SweepResult& sweep);

/// Serializes the synthesis report as a deterministic JSON document.
std::string report_json(const SynthesisResult& res);

/// Writes both artifacts atomically (temp file, then rename) into out_dir.
ReportBundle emit_artifacts(const SynthesisResult& res, const SweepResult& sweep,
                            const std::string& out_dir);

struct PipelineOutcome {
  int exit_code = 0;  // 0 all stable, 1 infeasible or unstable
  SynthesisResult synthesis;
  SweepResult sweep;
  ReportBundle bundle;
};

/// derive -> sweep -> bound -> matching -> compensator -> verification, with
/// artifacts written into out_dir. Identical configs yield identical bytes.
/// Input errors and numerical failures propagate as exceptions; robustness
/// infeasibility and unstable corners are reported through exit_code = 1.
PipelineOutcome run_pipeline(const RunConfig& cfg, const std::string& out_dir,
                             ExecutionMode mode = ExecutionMode::Parallel);

/// The synthesis stages without artifact emission (used by the stage
/// subcommands and the tests).
SynthesisResult synthesize(const RunConfig& cfg, const SweepResult& sweep,
                           const FrequencyGrid& grid,
                           ExecutionMode mode = ExecutionMode::Parallel);

/// The bound for this config: the validated manual bound or the fitted one.
RationalFunction select_bound(const RunConfig& cfg, const SweepResult& sweep,
                              const FrequencyGrid& grid);

}  // namespace portsynth

#endif  // PORTSYNTH_PIPELINE_HPP_
