#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "drsm/datagen.hpp"
#include "drsm/optimizer.hpp"

namespace drsm {

enum class ProblemKind { dpcp, odl, quadratic, l1sphere };
enum class ScaleKind { desk, paper };

std::string to_string(ProblemKind k);
std::string to_string(TopologyKind k);

// Full description of one experiment. Presets fill every field; any field can
// be overridden through a config file key or the same-named --set flag.
struct ExperimentConfig {
  std::string name = "run";  // output file stem prefix
  ProblemKind problem = ProblemKind::dpcp;
  ScaleKind scale = ScaleKind::desk;

  std::vector<TopologyKind> topologies = {TopologyKind::complete};
  double er_p = 0.3;
  std::string weights = "auto";  // auto | metropolis | uniform

  StepSchedule schedule = StepSchedule::polynomial(0.05, 0.5);
  StepSchedule crsm_schedule = StepSchedule::polynomial(0.05, 0.5);
  double alpha = 1.0;
  int t = 1;
  int epochs = 2000;
  std::uint64_t seed = 1;

  int stride = 10;
  double lambda = -1.0;  // <= 0: oracle default
  bool compute_prox_gap = true;
  ProxSolverConfig prox;
  bool timing = false;
  bool parallel = false;
  double stop_consensus = -1.0;
  double stop_stationarity = -1.0;

  std::filesystem::path out_dir = "out";
  std::filesystem::path dataset_path;  // when set, load data instead of generating

  DpcpSpec dpcp;          // dims per scale; spec.seed is taken from `seed`
  OdlSpec odl;
  int quad_d = 10, quad_r = 3, quad_n = 4;
  int l1_d = 16, l1_n = 4;
};

// Scale-appropriate data dimensions and schedules for a problem.
ExperimentConfig default_config(ProblemKind problem, ScaleKind scale);

// Named experiment presets mirroring the reference settings:
//   dpcp-poly, dpcp-geo, odl-poly, odl-geo.
// Stepsize amplitudes are per local data column; the preset records the local
// column count in schedule.scale (pooled count in crsm_schedule.scale).
ExperimentConfig preset(const std::string& name, ScaleKind scale);
std::vector<std::string> preset_names();

// Flat "section.key = value" text config. Lines starting with '#' and blank
// lines are skipped. Throws ConfigError with a line diagnostic.
ExperimentConfig load_config_file(const std::filesystem::path& path);
void apply_key_value(ExperimentConfig& cfg, const std::string& key,
                     const std::string& value);

// CSV contract. Columns, in order:
//   epoch,beta_k,consensus_error,objective_at_ima,recovery_error,prox_gap,wall_ms
// Absent optional values are blank cells; numbers round-trip exactly.
void write_csv(const std::filesystem::path& path, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_csv(const std::filesystem::path& path);
extern const char* const kCsvHeader;

// One DRSM run per configured topology; returns the CSV paths written.
std::vector<std::filesystem::path> run_experiment(const ExperimentConfig& cfg);

// Single-agent run on the pooled data with the CRSM schedule; the CSV has the
// same schema with consensus_error identically zero.
std::vector<std::filesystem::path> run_crsm_baseline(const ExperimentConfig& cfg);

// One run per t value on shared data, seed, and initialization.
std::vector<std::filesystem::path> sweep_t(const ExperimentConfig& cfg,
                                           const std::vector<int>& ts);

// Writes the configured problem's dataset container.
std::filesystem::path gen_data(const ExperimentConfig& cfg);

}  // namespace drsm
