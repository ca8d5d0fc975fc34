#include "drsm/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "drsm/rng.hpp"

namespace drsm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
  }
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw ConfigError("key '" + key + "': expected a boolean, got '" + v + "'");
}

ProblemKind parse_problem(const std::string& v) {
  if (v == "dpcp") return ProblemKind::dpcp;
  if (v == "odl") return ProblemKind::odl;
  if (v == "quadratic") return ProblemKind::quadratic;
  if (v == "l1sphere") return ProblemKind::l1sphere;
  throw ConfigError("unknown problem '" + v + "'");
}

ScaleKind parse_scale(const std::string& v) {
  if (v == "desk") return ScaleKind::desk;
  if (v == "paper") return ScaleKind::paper;
  throw ConfigError("unknown scale '" + v + "'");
}

TopologyKind parse_topology(const std::string& v) {
  if (v == "complete") return TopologyKind::complete;
  if (v == "ring") return TopologyKind::ring;
  if (v == "er") return TopologyKind::erdos_renyi;
  throw ConfigError("unknown topology '" + v + "'");
}

StepSchedule::Kind parse_schedule_kind(const std::string& v) {
  if (v == "constant") return StepSchedule::Kind::constant;
  if (v == "polynomial") return StepSchedule::Kind::polynomial;
  if (v == "geometric") return StepSchedule::Kind::geometric;
  throw ConfigError("unknown schedule '" + v + "'");
}

// Rebuild through the factory so parameter validation runs.
StepSchedule revalidate(const StepSchedule& s) {
  StepSchedule out;
  switch (s.kind) {
    case StepSchedule::Kind::constant:
      out = StepSchedule::constant(s.beta);
      break;
    case StepSchedule::Kind::polynomial:
      out = StepSchedule::polynomial(s.c, s.p);
      break;
    case StepSchedule::Kind::geometric:
      out = StepSchedule::geometric(s.mu0, s.gamma);
      break;
  }
  out.scale = s.scale;
  return out;
}

int local_columns(const ExperimentConfig& cfg) {
  switch (cfg.problem) {
    case ProblemKind::dpcp:
      return (cfg.dpcp.m1 + cfg.dpcp.m2) / cfg.dpcp.n;
    case ProblemKind::odl:
      return cfg.odl.m / cfg.odl.n;
    default:
      return 1;
  }
}

int pooled_columns(const ExperimentConfig& cfg) {
  switch (cfg.problem) {
    case ProblemKind::dpcp:
      return cfg.dpcp.m1 + cfg.dpcp.m2;
    case ProblemKind::odl:
      return cfg.odl.m;
    default:
      return 1;
  }
}

void format_cell(std::string& row, double v) {
  if (std::isnan(v)) return;  // blank
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  row.append(buf, res.ptr);
}

double parse_cell(const std::string& cell, const std::filesystem::path& path,
                  std::size_t line) {
  if (cell.empty()) return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
    throw ConfigError(path.string() + ":" + std::to_string(line) + ": bad number '" +
                      cell + "'");
  }
  return v;
}

}  // namespace

std::string to_string(ProblemKind k) {
  switch (k) {
    case ProblemKind::dpcp: return "dpcp";
    case ProblemKind::odl: return "odl";
    case ProblemKind::quadratic: return "quadratic";
    case ProblemKind::l1sphere: return "l1sphere";
  }
  return "?";
}

std::string to_string(TopologyKind k) {
  switch (k) {
    case TopologyKind::complete: return "complete";
    case TopologyKind::ring: return "ring";
    case TopologyKind::erdos_renyi: return "er";
  }
  return "?";
}

ExperimentConfig default_config(ProblemKind problem, ScaleKind scale) {
  ExperimentConfig cfg;
  cfg.problem = problem;
  cfg.scale = scale;
  if (scale == ScaleKind::paper) {
    cfg.dpcp = DpcpSpec{100, 10, 1500, 3500, 10, 0};
    cfg.odl = OdlSpec{30, 1650, 0.3, 10, 0};
  } else {
    cfg.dpcp = DpcpSpec{30, 5, 180, 420, 6, 0};
    cfg.odl = OdlSpec{16, 640, 0.3, 8, 0};
  }
  const double c = problem == ProblemKind::odl ? 0.005 : 0.05;
  cfg.schedule = StepSchedule::polynomial(c, 0.5);
  cfg.schedule.scale = local_columns(cfg);
  cfg.crsm_schedule = StepSchedule::polynomial(problem == ProblemKind::odl ? 0.0005 : c, 0.5);
  cfg.crsm_schedule.scale = pooled_columns(cfg);
  return cfg;
}

ExperimentConfig preset(const std::string& name, ScaleKind scale) {
  const bool odl = name.rfind("odl", 0) == 0;
  const bool dpcp = name.rfind("dpcp", 0) == 0;
  ExperimentConfig cfg =
      default_config(odl ? ProblemKind::odl : ProblemKind::dpcp, scale);
  cfg.name = name;
  if ((dpcp && name == "dpcp-poly") || (odl && name == "odl-poly")) {
    // Polynomial presets sweep all three topologies.
    cfg.topologies = {TopologyKind::complete, TopologyKind::ring,
                      TopologyKind::erdos_renyi};
    cfg.epochs = 2000;
    return cfg;
  }
  if ((dpcp && name == "dpcp-geo") || (odl && name == "odl-geo")) {
    cfg.schedule = StepSchedule::geometric(0.05, 0.98);
    cfg.schedule.scale = local_columns(cfg);
    cfg.crsm_schedule = StepSchedule::geometric(0.05, 0.9);
    cfg.crsm_schedule.scale = pooled_columns(cfg);
    cfg.epochs = 600;
    return cfg;
  }
  throw ConfigError("unknown preset '" + name + "' (try: dpcp-poly, dpcp-geo, odl-poly, odl-geo)");
}

std::vector<std::string> preset_names() {
  return {"dpcp-poly", "dpcp-geo", "odl-poly", "odl-geo"};
}

void apply_key_value(ExperimentConfig& cfg, const std::string& key,
                     const std::string& value) {
  if (key == "preset") {
    cfg = preset(value, cfg.scale);
  } else if (key == "name") {
    cfg.name = value;
  } else if (key == "problem") {
    const auto p = parse_problem(value);
    ExperimentConfig fresh = default_config(p, cfg.scale);
    fresh.name = cfg.name;
    fresh.seed = cfg.seed;
    fresh.out_dir = cfg.out_dir;
    cfg = fresh;
  } else if (key == "scale") {
    const auto s = parse_scale(value);
    ExperimentConfig fresh = default_config(cfg.problem, s);
    fresh.name = cfg.name;
    fresh.seed = cfg.seed;
    fresh.out_dir = cfg.out_dir;
    cfg = fresh;
  } else if (key == "topology") {
    cfg.topologies.clear();
    std::istringstream is(value);
    std::string item;
    while (std::getline(is, item, ',')) cfg.topologies.push_back(parse_topology(trim(item)));
    if (cfg.topologies.empty()) throw ConfigError("key 'topology': empty list");
  } else if (key == "er.p") {
    cfg.er_p = parse_double(key, value);
  } else if (key == "weights") {
    if (value != "auto" && value != "metropolis" && value != "uniform") {
      throw ConfigError("key 'weights': expected auto|metropolis|uniform");
    }
    cfg.weights = value;
  } else if (key == "schedule") {
    cfg.schedule.kind = parse_schedule_kind(value);
    if (cfg.schedule.kind == StepSchedule::Kind::geometric && cfg.schedule.mu0 <= 0.0) {
      cfg.schedule.mu0 = 0.05;
      cfg.schedule.gamma = 0.98;
    }
    cfg.schedule = revalidate(cfg.schedule);
  } else if (key == "schedule.c") {
    cfg.schedule.c = parse_double(key, value);
    cfg.schedule = revalidate(cfg.schedule);
  } else if (key == "schedule.p") {
    cfg.schedule.p = parse_double(key, value);
    cfg.schedule = revalidate(cfg.schedule);
  } else if (key == "schedule.mu0") {
    cfg.schedule.mu0 = parse_double(key, value);
    cfg.schedule = revalidate(cfg.schedule);
  } else if (key == "schedule.gamma") {
    cfg.schedule.gamma = parse_double(key, value);
    cfg.schedule = revalidate(cfg.schedule);
  } else if (key == "schedule.beta") {
    cfg.schedule.beta = parse_double(key, value);
    cfg.schedule = revalidate(cfg.schedule);
  } else if (key == "schedule.scale") {
    cfg.schedule.scale = parse_double(key, value);
  } else if (key == "crsm.schedule") {
    cfg.crsm_schedule.kind = parse_schedule_kind(value);
    if (cfg.crsm_schedule.kind == StepSchedule::Kind::geometric &&
        cfg.crsm_schedule.mu0 <= 0.0) {
      cfg.crsm_schedule.mu0 = 0.05;
      cfg.crsm_schedule.gamma = 0.9;
    }
    cfg.crsm_schedule = revalidate(cfg.crsm_schedule);
  } else if (key == "crsm.c") {
    cfg.crsm_schedule.c = parse_double(key, value);
    cfg.crsm_schedule = revalidate(cfg.crsm_schedule);
  } else if (key == "crsm.p") {
    cfg.crsm_schedule.p = parse_double(key, value);
    cfg.crsm_schedule = revalidate(cfg.crsm_schedule);
  } else if (key == "crsm.mu0") {
    cfg.crsm_schedule.mu0 = parse_double(key, value);
    cfg.crsm_schedule = revalidate(cfg.crsm_schedule);
  } else if (key == "crsm.gamma") {
    cfg.crsm_schedule.gamma = parse_double(key, value);
    cfg.crsm_schedule = revalidate(cfg.crsm_schedule);
  } else if (key == "crsm.beta") {
    cfg.crsm_schedule.beta = parse_double(key, value);
    cfg.crsm_schedule = revalidate(cfg.crsm_schedule);
  } else if (key == "crsm.scale") {
    cfg.crsm_schedule.scale = parse_double(key, value);
  } else if (key == "alpha") {
    cfg.alpha = parse_double(key, value);
  } else if (key == "t") {
    cfg.t = static_cast<int>(parse_int(key, value));
  } else if (key == "epochs") {
    cfg.epochs = static_cast<int>(parse_int(key, value));
    if (cfg.epochs < 0) throw ConfigError("key 'epochs': must be >= 0");
  } else if (key == "seed") {
    cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
  } else if (key == "metrics.stride") {
    cfg.stride = static_cast<int>(parse_int(key, value));
  } else if (key == "metrics.lambda") {
    cfg.lambda = parse_double(key, value);
  } else if (key == "metrics.prox_gap") {
    cfg.compute_prox_gap = parse_bool(key, value);
  } else if (key == "metrics.timing") {
    cfg.timing = parse_bool(key, value);
  } else if (key == "prox.iterations") {
    cfg.prox.iterations = static_cast<int>(parse_int(key, value));
  } else if (key == "prox.gamma") {
    cfg.prox.gamma = parse_double(key, value);
  } else if (key == "prox.mu0") {
    cfg.prox.mu0 = parse_double(key, value);
  } else if (key == "run.parallel") {
    cfg.parallel = parse_bool(key, value);
  } else if (key == "stop.consensus") {
    cfg.stop_consensus = parse_double(key, value);
  } else if (key == "stop.stationarity") {
    cfg.stop_stationarity = parse_double(key, value);
  } else if (key == "out") {
    cfg.out_dir = value;
  } else if (key == "dataset") {
    cfg.dataset_path = value;
  } else if (key == "data.d") {
    cfg.dpcp.d = cfg.odl.d = static_cast<int>(parse_int(key, value));
  } else if (key == "data.r") {
    cfg.dpcp.r = static_cast<int>(parse_int(key, value));
  } else if (key == "data.m1") {
    cfg.dpcp.m1 = static_cast<int>(parse_int(key, value));
  } else if (key == "data.m2") {
    cfg.dpcp.m2 = static_cast<int>(parse_int(key, value));
  } else if (key == "data.n") {
    cfg.dpcp.n = cfg.odl.n = static_cast<int>(parse_int(key, value));
  } else if (key == "data.m") {
    cfg.odl.m = static_cast<int>(parse_int(key, value));
  } else if (key == "data.theta") {
    cfg.odl.theta = parse_double(key, value);
  } else if (key == "quad.d") {
    cfg.quad_d = static_cast<int>(parse_int(key, value));
  } else if (key == "quad.r") {
    cfg.quad_r = static_cast<int>(parse_int(key, value));
  } else if (key == "quad.n") {
    cfg.quad_n = static_cast<int>(parse_int(key, value));
  } else if (key == "l1.d") {
    cfg.l1_d = static_cast<int>(parse_int(key, value));
  } else if (key == "l1.n") {
    cfg.l1_n = static_cast<int>(parse_int(key, value));
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path.string());
  ExperimentConfig cfg = default_config(ProblemKind::dpcp, ScaleKind::desk);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                        ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      apply_key_value(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

const char* const kCsvHeader =
    "epoch,beta_k,consensus_error,objective_at_ima,recovery_error,prox_gap,wall_ms";

void write_csv(const std::filesystem::path& path, const std::vector<RunRecord>& records) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open " + path.string() + " for writing");
  os << kCsvHeader << "\n";
  std::string row;
  for (const auto& r : records) {
    row.clear();
    row += std::to_string(r.epoch);
    row += ',';
    format_cell(row, r.beta);
    row += ',';
    format_cell(row, r.consensus_error);
    row += ',';
    format_cell(row, r.objective_at_ima);
    row += ',';
    format_cell(row, r.recovery_error);
    row += ',';
    format_cell(row, r.prox_gap);
    row += ',';
    format_cell(row, r.wall_ms);
    os << row << "\n";
  }
  if (!os) throw ConfigError("write failed for " + path.string());
}

std::vector<RunRecord> read_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open " + path.string());
  std::string line;
  if (!std::getline(is, line) || trim(line) != kCsvHeader) {
    throw ConfigError(path.string() + ": missing or unexpected CSV header");
  }
  std::vector<RunRecord> records;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream row(line);
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    while (cells.size() < 7) cells.emplace_back();  // trailing blanks
    if (cells.size() != 7) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected 7 cells");
    }
    RunRecord r;
    r.epoch = static_cast<int>(parse_cell(cells[0], path, lineno));
    r.beta = parse_cell(cells[1], path, lineno);
    r.consensus_error = parse_cell(cells[2], path, lineno);
    r.objective_at_ima = parse_cell(cells[3], path, lineno);
    r.recovery_error = parse_cell(cells[4], path, lineno);
    r.prox_gap = parse_cell(cells[5], path, lineno);
    r.wall_ms = parse_cell(cells[6], path, lineno);
    records.push_back(r);
  }
  return records;
}

namespace {

// Everything run orchestration needs about one problem instance.
struct ProblemSetup {
  std::unique_ptr<ProblemOracle> oracle;
  std::unique_ptr<ProblemOracle> pooled;  // single-agent oracle on all data
  std::optional<StiefelPoint> subspace_truth;
  std::optional<StiefelPoint> dictionary_truth;
  NetworkState init;        // n agents
  NetworkState pooled_init; // 1 agent, same point
};

std::vector<Eigen::MatrixXd> pool_blocks(const std::vector<Eigen::MatrixXd>& blocks) {
  Eigen::Index total = 0;
  for (const auto& b : blocks) total += b.cols();
  Eigen::MatrixXd pooled(blocks[0].rows(), total);
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    pooled.middleCols(at, b.cols()) = b;
    at += b.cols();
  }
  return {pooled};
}

ProblemSetup build_problem(const ExperimentConfig& cfg) {
  ProblemSetup s;
  switch (cfg.problem) {
    case ProblemKind::dpcp: {
      DpcpData data;
      StiefelPoint truth = StiefelPoint::from_orthonormal(Eigen::MatrixXd::Identity(2, 1));
      int r = cfg.dpcp.r;
      if (cfg.dataset_path.empty()) {
        DpcpSpec spec = cfg.dpcp;
        spec.seed = cfg.seed;
        auto [d, x] = generate_dpcp(spec);
        data = std::move(d);
        truth = x;
      } else {
        Dataset ds = read_dataset(cfg.dataset_path);
        if (ds.is_dictionary) throw ConfigError("dataset is an ODL container, problem is dpcp");
        data.blocks = std::move(ds.blocks);
        truth = StiefelPoint::from_orthonormal(ds.truth);
        r = static_cast<int>(truth.cols());
      }
      auto oracle = std::make_unique<DpcpProblem>(data);
      oracle->set_subspace_dim(r);
      auto pooled = std::make_unique<DpcpProblem>(DpcpData{pool_blocks(data.blocks)});
      pooled->set_subspace_dim(r);
      s.subspace_truth = truth;
      s.init = initial_state(oracle->rows(), r, oracle->agent_count(), cfg.seed + 1);
      s.oracle = std::move(oracle);
      s.pooled = std::move(pooled);
      break;
    }
    case ProblemKind::odl: {
      OdlData data;
      std::optional<StiefelPoint> truth;
      if (cfg.dataset_path.empty()) {
        OdlSpec spec = cfg.odl;
        spec.seed = cfg.seed;
        auto [d, a] = generate_odl(spec);
        data = std::move(d);
        truth = a;
      } else {
        Dataset ds = read_dataset(cfg.dataset_path);
        if (!ds.is_dictionary) throw ConfigError("dataset is a DPCP container, problem is odl");
        data.blocks = std::move(ds.blocks);
        truth = StiefelPoint::from_orthonormal(ds.truth);
      }
      auto oracle = std::make_unique<OdlProblem>(data);
      auto pooled = std::make_unique<OdlProblem>(OdlData{pool_blocks(data.blocks)});
      s.dictionary_truth = truth;
      s.init = initial_state(oracle->rows(), oracle->rows(), oracle->agent_count(),
                             cfg.seed + 1);
      s.oracle = std::move(oracle);
      s.pooled = std::move(pooled);
      break;
    }
    case ProblemKind::quadratic: {
      Rng rng(cfg.seed);
      std::vector<Eigen::MatrixXd> targets;
      targets.reserve(cfg.quad_n);
      for (int i = 0; i < cfg.quad_n; ++i) {
        targets.push_back(0.3 * rng.gaussian_matrix(cfg.quad_d, cfg.quad_r));
      }
      auto oracle = std::make_unique<QuadraticProblem>(targets);
      // The pooled objective equals the mean-target objective up to a constant.
      auto pooled = std::make_unique<QuadraticProblem>(oracle->mean_target(), 1);
      s.init = initial_state(cfg.quad_d, cfg.quad_r, cfg.quad_n, cfg.seed + 1);
      s.oracle = std::move(oracle);
      s.pooled = std::move(pooled);
      break;
    }
    case ProblemKind::l1sphere: {
      s.oracle = std::make_unique<L1SphereProblem>(cfg.l1_d, cfg.l1_n);
      s.pooled = std::make_unique<L1SphereProblem>(cfg.l1_d, 1);
      s.init = initial_state(cfg.l1_d, 1, cfg.l1_n, cfg.seed + 1);
      break;
    }
  }
  s.pooled_init.points.assign(1, s.init.points[0]);
  return s;
}

MixingMatrix build_weights(const ExperimentConfig& cfg, TopologyKind kind, int n,
                           Topology* out_topology) {
  const Topology g = build_topology(kind, n, cfg.er_p, cfg.seed + 2);
  if (out_topology) *out_topology = g;
  if (cfg.weights == "metropolis") return metropolis_weights(g);
  if (cfg.weights == "uniform") return uniform_weights(g);
  return default_weights(g);
}

MetricsPlan make_metrics(const ExperimentConfig& cfg, const ProblemSetup& s) {
  MetricsPlan mp;
  mp.stride = cfg.stride;
  mp.lambda = cfg.lambda;
  mp.compute_prox_gap = cfg.compute_prox_gap;
  mp.prox = cfg.prox;
  mp.subspace_truth = s.subspace_truth;
  mp.dictionary_truth = s.dictionary_truth;
  mp.timing = cfg.timing;
  return mp;
}

DrsmConfig make_drsm_config(const ExperimentConfig& cfg, const StepSchedule& schedule) {
  DrsmConfig dc;
  dc.alpha = cfg.alpha;
  dc.t = cfg.t;
  dc.schedule = schedule;
  dc.max_epochs = cfg.epochs;
  dc.seed = cfg.seed;
  dc.parallel = cfg.parallel;
  dc.stop_consensus = cfg.stop_consensus;
  dc.stop_stationarity = cfg.stop_stationarity;
  return dc;
}

void report_run(const std::filesystem::path& path, const std::vector<RunRecord>& recs,
                int t, std::size_t edges) {
  const auto& last = recs.back();
  std::cout << "wrote " << path.string() << "  epochs=" << last.epoch
            << "  comm_edges_per_epoch=" << t * edges;
  if (!std::isnan(last.recovery_error)) {
    std::cout << "  final_recovery=" << last.recovery_error;
  }
  std::cout << "\n";
}

}  // namespace

std::vector<std::filesystem::path> run_experiment(const ExperimentConfig& cfg) {
  std::filesystem::create_directories(cfg.out_dir);
  const ProblemSetup setup = build_problem(cfg);
  const int n = setup.oracle->agent_count();
  std::vector<std::filesystem::path> written;
  for (const TopologyKind kind : cfg.topologies) {
    Topology g;
    const MixingMatrix W = build_weights(cfg, kind, n, &g);
    const auto records = run_collect(make_drsm_config(cfg, cfg.schedule), W,
                                     *setup.oracle, setup.init, make_metrics(cfg, setup));
    const auto path = cfg.out_dir / (cfg.name + "_" + to_string(kind) + ".csv");
    write_csv(path, records);
    report_run(path, records, cfg.t, g.edges.size());
    written.push_back(path);
  }
  return written;
}

std::vector<std::filesystem::path> run_crsm_baseline(const ExperimentConfig& cfg) {
  std::filesystem::create_directories(cfg.out_dir);
  const ProblemSetup setup = build_problem(cfg);
  const MixingMatrix W = make_mixing_matrix(Eigen::MatrixXd::Ones(1, 1));
  const auto records =
      run_collect(make_drsm_config(cfg, cfg.crsm_schedule), W, *setup.pooled,
                  setup.pooled_init, make_metrics(cfg, setup));
  const auto path = cfg.out_dir / (cfg.name + "_crsm.csv");
  write_csv(path, records);
  report_run(path, records, cfg.t, 0);
  return {path};
}

std::vector<std::filesystem::path> sweep_t(const ExperimentConfig& cfg,
                                           const std::vector<int>& ts) {
  std::filesystem::create_directories(cfg.out_dir);
  const ProblemSetup setup = build_problem(cfg);
  const int n = setup.oracle->agent_count();
  std::vector<std::filesystem::path> written;
  for (const TopologyKind kind : cfg.topologies) {
    Topology g;
    const MixingMatrix W = build_weights(cfg, kind, n, &g);
    for (const int t : ts) {
      ExperimentConfig c = cfg;
      c.t = t;
      const auto records = run_collect(make_drsm_config(c, c.schedule), W,
                                       *setup.oracle, setup.init, make_metrics(c, setup));
      const auto path = cfg.out_dir / (cfg.name + "_" + to_string(kind) + "_t" +
                                       std::to_string(t) + ".csv");
      write_csv(path, records);
      report_run(path, records, t, g.edges.size());
      written.push_back(path);
    }
  }
  return written;
}

std::filesystem::path gen_data(const ExperimentConfig& cfg) {
  std::filesystem::create_directories(cfg.out_dir);
  Dataset ds;
  if (cfg.problem == ProblemKind::dpcp) {
    DpcpSpec spec = cfg.dpcp;
    spec.seed = cfg.seed;
    auto [data, truth] = generate_dpcp(spec);
    ds.blocks = std::move(data.blocks);
    ds.truth = truth.matrix();
    ds.is_dictionary = false;
  } else if (cfg.problem == ProblemKind::odl) {
    OdlSpec spec = cfg.odl;
    spec.seed = cfg.seed;
    auto [data, truth] = generate_odl(spec);
    ds.blocks = std::move(data.blocks);
    ds.truth = truth.matrix();
    ds.is_dictionary = true;
  } else {
    throw ConfigError("gen-data supports dpcp and odl only");
  }
  const auto path = cfg.out_dir / (to_string(cfg.problem) + "_" +
                                   (cfg.scale == ScaleKind::paper ? "paper" : "desk") +
                                   "_seed" + std::to_string(cfg.seed) + ".bin");
  write_dataset(path, ds);
  std::cout << "wrote " << path.string() << "\n";
  return path;
}

}  // namespace drsm
