#include "floodcover/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "floodcover/run_record.hpp"

namespace floodcover {

namespace fs = std::filesystem;

namespace {

template <class T> T parse_value(const std::string &key, const std::string &text) {
  T value{};
  const char *first = text.data();
  const char *last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    throw std::invalid_argument("config: bad value for " + key + ": '" + text + "'");
  return value;
}

void apply_key(SimConfig &c, const std::string &section, const std::string &key,
               const std::string &value) {
  const std::string where = section + "." + key;
  const auto set = [&](auto &field) {
    field = parse_value<std::remove_reference_t<decltype(field)>>(where, value);
  };
  if (section == "coverage") {
    if (key == "n")
      return set(c.n);
    if (key == "k")
      return set(c.k);
    if (key == "dt")
      return set(c.dt);
    if (key == "t_end")
      return set(c.t_end);
    if (key == "quadrature_res")
      return set(c.quadrature_res);
    if (key == "seed")
      return set(c.seed);
    if (key == "convergence_tol")
      return set(c.convergence_tol);
  } else if (section == "density") {
    if (key == "mode") {
      c.mode = parse_density_mode(value);
      return;
    }
    if (key == "phi0")
      return set(c.phi0);
  } else if (section == "sensing") {
    if (key == "scenario") {
      c.scenario = value;
      return;
    }
    if (key == "tau")
      return set(c.tau);
    if (key == "mask_width")
      return set(c.mask_width);
    if (key == "footprint")
      return set(c.footprint);
    if (key == "spiral_a")
      return set(c.spiral.a);
    if (key == "spiral_omega")
      return set(c.spiral.omega);
    if (key == "growth_amplitude")
      return set(c.growth_amplitude);
    if (key == "growth_period")
      return set(c.growth_period);
  } else if (section == "metrics") {
    if (key == "eval_res")
      return set(c.eval_res);
  }
  throw std::invalid_argument("config: unknown key " + where);
}

std::string time_label(double t) { return fmt::format("{}", t); }

void write_file(const fs::path &path, const auto &writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot write " + path.string());
  writer(out);
  if (!out)
    throw std::runtime_error("write failed: " + path.string());
}

std::size_t step_index_at(const RunRecord &record, double t) {
  const auto idx = static_cast<std::size_t>(std::max(0LL, std::llround(t / record.config.dt)));
  return std::min(idx, record.steps.size() - 1);
}

void ensure_writable(const fs::path &dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw std::invalid_argument("output directory is not writable: " + dir.string());
  const fs::path probe = dir / ".write_probe";
  {
    std::ofstream out(probe);
    if (!out)
      throw std::invalid_argument("output directory is not writable: " + dir.string());
  }
  fs::remove(probe, ec);
}

} // namespace

SimConfig parse_config(std::istream &in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error &e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  SimConfig config;
  for (const auto &[section, body] : tree) {
    if (body.empty())
      throw std::invalid_argument("config: key outside a section: " + section);
    for (const auto &[key, value] : body)
      apply_key(config, section, key, value.data());
  }
  return config;
}

SimConfig load_config(const fs::path &path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("cannot open config file " + path.string());
  return parse_config(in);
}

fs::path default_output_root() {
  if (const char *env = std::getenv("FLOODCOVER_OUT"); env && *env)
    return env;
  return "out";
}

std::vector<double> snapshot_times(const SimConfig &config) {
  return {0.0, 0.5 * config.t_end, config.t_end};
}

void render_snapshots(const RunRecord &record, const fs::path &dir, std::span<const double> times) {
  if (record.steps.empty())
    throw std::invalid_argument("render: run record has no steps");
  fs::create_directories(dir);
  const SimConfig &c = record.config;
  const FloodField field = scenario_field(c);
  for (double t : times) {
    const std::size_t idx = step_index_at(record, t);
    const StepRecord &step = record.steps[idx];
    const std::string label = time_label(t);
    const DensityField density = record.density_at(idx);
    write_file(dir / fmt::format("density_t{}.pgm", label),
               [&](std::ostream &out) { write_density_pgm(density, c.workspace, 128, out); });
    for (std::size_t a = 0; a < step.positions.size(); ++a) {
      const FloodMask mask =
          capture(field, step.t, step.positions[a], c.mask_width, c.pixel_size(), c.workspace);
      write_file(dir / fmt::format("mask_t{}_a{}.pgm", label, a),
                 [&](std::ostream &out) { write_mask_pbm(mask, out); });
    }
  }
}

RunOutcome outcome_of(DensityMode mode, std::size_t n, std::uint64_t seed,
                      std::span<const StepMetrics> metrics) {
  RunOutcome o{mode, n, seed, 0.0, 0.0};
  if (metrics.empty())
    return o;
  o.final_coverage = metrics.back().coverage_rate;
  const double target = 0.9 * o.final_coverage;
  for (const auto &m : metrics) {
    if (m.coverage_rate >= target) {
      o.t90 = m.t;
      break;
    }
  }
  return o;
}

RunOutcome run_to_directory(const SimConfig &config, const fs::path &dir) {
  config.validate();
  fs::create_directories(dir);
  const RunRecord record = simulate(config, scenario_field(config));
  const std::vector<StepMetrics> metrics = record.metrics();
  write_file(dir / "metrics.csv", [&](std::ostream &out) { write_metrics_csv(metrics, out); });
  write_file(dir / "run.jsonl", [&](std::ostream &out) { write_run_jsonl(record, out); });
  const auto times = snapshot_times(config);
  render_snapshots(record, dir, times);
  return outcome_of(config.mode, config.n, config.seed, metrics);
}

void BatchSpec::validate() const {
  if (trials < 1)
    throw std::invalid_argument("batch: trials must be at least 1");
  if (fleet_sizes.empty())
    throw std::invalid_argument("batch: fleet_sizes must not be empty");
  if (modes.empty())
    throw std::invalid_argument("batch: at least one density mode is required");
  for (auto n : fleet_sizes) {
    SimConfig c = base;
    c.n = n;
    c.validate();
  }
}

Summary summarize(std::span<const RunOutcome> outcomes) {
  std::map<std::pair<int, std::size_t>, std::vector<const RunOutcome *>> groups;
  for (const auto &o : outcomes)
    groups[{static_cast<int>(o.mode), o.n}].push_back(&o);

  Summary summary;
  for (const auto &[key, runs] : groups) {
    SummaryRow row;
    row.mode = static_cast<DensityMode>(key.first);
    row.n = key.second;
    row.trials = runs.size();
    double sum = 0.0;
    double t90 = 0.0;
    row.min_cov = INFINITY;
    row.max_cov = -INFINITY;
    for (const auto *r : runs) {
      sum += r->final_coverage;
      t90 += r->t90;
      row.min_cov = std::min(row.min_cov, r->final_coverage);
      row.max_cov = std::max(row.max_cov, r->final_coverage);
    }
    const auto count = static_cast<double>(runs.size());
    row.mean_cov = sum / count;
    row.mean_t90 = t90 / count;
    double ss = 0.0;
    for (const auto *r : runs)
      ss += (r->final_coverage - row.mean_cov) * (r->final_coverage - row.mean_cov);
    row.std_cov = runs.size() > 1 ? std::sqrt(ss / (count - 1.0)) : 0.0;
    summary.push_back(row);
  }
  return summary;
}

BatchResult run_batch(const BatchSpec &spec) {
  spec.validate();
  ensure_writable(spec.out_dir);

  struct Job {
    SimConfig config;
    fs::path dir;
  };
  std::vector<Job> jobs;
  for (auto mode : spec.modes) {
    for (auto n : spec.fleet_sizes) {
      for (std::size_t trial = 0; trial < spec.trials; ++trial) {
        SimConfig c = spec.base;
        c.mode = mode;
        c.n = n;
        c.seed = spec.base_seed + trial;
        jobs.push_back({c, spec.out_dir / fmt::format("run_{}_n{}_t{}", to_string(mode), n, trial)});
      }
    }
  }

  std::vector<RunOutcome> outcomes(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        outcomes[i] = run_to_directory(jobs[i].config, jobs[i].dir);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure)
          failure = std::current_exception();
      }
    }
  };
  unsigned workers = spec.jobs ? spec.jobs : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(jobs.size()));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back(worker);
  }
  if (failure)
    std::rethrow_exception(failure);

  BatchResult result{std::move(outcomes), {}};
  result.summary = summarize(result.runs);
  write_file(spec.out_dir / "summary.csv",
             [&](std::ostream &out) { write_summary_csv(result.summary, out); });
  return result;
}

std::vector<RunOutcome> load_outcomes(std::span<const fs::path> run_dirs) {
  std::vector<RunOutcome> outcomes;
  for (const auto &dir : run_dirs) {
    if (!fs::is_directory(dir))
      throw std::invalid_argument("not a run directory: " + dir.string());
    std::ifstream jsonl(dir / "run.jsonl");
    std::ifstream csv(dir / "metrics.csv");
    if (!jsonl || !csv)
      throw std::invalid_argument("run directory is incomplete: " + dir.string());
    std::string header;
    std::getline(jsonl, header);
    const SimConfig config = config_from_json(nlohmann::json::parse(header).at("config"));
    const auto metrics = read_metrics_csv(csv);
    outcomes.push_back(outcome_of(config.mode, config.n, config.seed, metrics));
  }
  return outcomes;
}

void write_summary_csv(const Summary &summary, std::ostream &out) {
  out << "mode,n,trials,mean_cov,std_cov,min_cov,max_cov,mean_t90\n";
  for (const auto &r : summary)
    out << fmt::format("{},{},{},{},{},{},{},{}\n", to_string(r.mode), r.n, r.trials, r.mean_cov,
                       r.std_cov, r.min_cov, r.max_cov, r.mean_t90);
}

} // namespace floodcover
