#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "floodcover/experiments.hpp"
#include "floodcover/run_record.hpp"

namespace fs = std::filesystem;
using namespace floodcover;

namespace {

constexpr int kExitInvalid = 2;

struct Overrides {
  std::string config_file;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> scenario;
  std::optional<std::string> mode;
  std::optional<std::size_t> n;
  std::optional<double> t_end;
  std::string out;

  void attach(CLI::App &cmd, bool with_n) {
    cmd.add_option("-c,--config", config_file, "key = value config file")->check(CLI::ExistingFile);
    cmd.add_option("--seed", seed, "seed (base seed for batch)");
    cmd.add_option("--scenario", scenario, "band | blob | ellipse | none | all");
    if (with_n) {
      cmd.add_option("--mode", mode, "gmdf | axis");
      cmd.add_option("--n", n, "fleet size");
    }
    cmd.add_option("--t-end", t_end, "simulated horizon in seconds");
    cmd.add_option("--out", out, "output directory");
  }

  SimConfig resolve() const {
    SimConfig c = config_file.empty() ? SimConfig{} : load_config(config_file);
    if (seed)
      c.seed = *seed;
    if (scenario)
      c.scenario = *scenario;
    if (mode)
      c.mode = parse_density_mode(*mode);
    if (n)
      c.n = *n;
    if (t_end)
      c.t_end = *t_end;
    c.validate();
    return c;
  }
};

// A directory holding metrics.csv is one run; otherwise its run_* children are.
std::vector<fs::path> expand_run_dirs(const std::vector<std::string> &args) {
  std::vector<fs::path> dirs;
  for (const auto &a : args) {
    const fs::path p(a);
    if (!fs::is_directory(p))
      throw std::invalid_argument("no such directory: " + a);
    if (fs::exists(p / "metrics.csv")) {
      dirs.push_back(p);
      continue;
    }
    std::vector<fs::path> children;
    for (const auto &entry : fs::directory_iterator(p))
      if (entry.is_directory() && fs::exists(entry.path() / "metrics.csv"))
        children.push_back(entry.path());
    if (children.empty())
      throw std::invalid_argument("no run directories under " + a);
    std::sort(children.begin(), children.end());
    dirs.insert(dirs.end(), children.begin(), children.end());
  }
  return dirs;
}

std::vector<double> parse_times(const std::string &text) {
  std::vector<double> times;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    times.push_back(std::stod(item));
  if (times.empty())
    throw std::invalid_argument("--times must list at least one time");
  return times;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Flood-monitoring coverage control simulator"};
  app.require_subcommand(1);

  Overrides run_opts;
  auto *run = app.add_subcommand("run", "run one simulation");
  run_opts.attach(*run, true);

  Overrides batch_opts;
  std::size_t trials = 10;
  std::vector<std::size_t> fleet{16, 20, 24};
  unsigned jobs = 0;
  auto *batch = app.add_subcommand("batch", "run both density modes across fleet sizes and trials");
  batch_opts.attach(*batch, false);
  batch->add_option("--trials", trials, "trials per (mode, fleet size)");
  batch->add_option("--fleet", fleet, "fleet sizes")->delimiter(',');
  batch->add_option("--jobs", jobs, "worker threads (0 = all cores)");

  std::string render_dir;
  std::string render_times;
  std::string render_out;
  auto *render = app.add_subcommand("render", "write density and mask snapshots from a run.jsonl");
  render->add_option("run_dir", render_dir, "run directory")->required();
  render->add_option("--times", render_times, "comma-separated times (default 0, t_end/2, t_end)");
  render->add_option("--out", render_out, "output directory (default: the run directory)");

  std::vector<std::string> summarize_dirs;
  std::string summarize_out;
  auto *summarize_cmd = app.add_subcommand("summarize", "recompute summary.csv from run directories");
  summarize_cmd->add_option("dirs", summarize_dirs, "run or batch directories")->required();
  summarize_cmd->add_option("--out", summarize_out, "summary file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*run) {
      const SimConfig config = run_opts.resolve();
      const fs::path out = run_opts.out.empty()
                               ? default_output_root() / fmt::format("run_{}_n{}_s{}", to_string(config.mode),
                                                                     config.n, config.seed)
                               : fs::path(run_opts.out);
      const RunOutcome o = run_to_directory(config, out);
      std::cout << fmt::format("{}: final coverage {:.4f}, t90 {} s\n", out.string(), o.final_coverage,
                               o.t90);
    } else if (*batch) {
      BatchSpec spec;
      spec.base = batch_opts.resolve();
      spec.base_seed = batch_opts.seed.value_or(0);
      spec.trials = trials;
      spec.fleet_sizes = fleet;
      spec.jobs = jobs;
      spec.out_dir = batch_opts.out.empty() ? default_output_root() / ("batch_" + spec.base.scenario)
                                            : fs::path(batch_opts.out);
      const BatchResult result = run_batch(spec);
      write_summary_csv(result.summary, std::cout);
    } else if (*render) {
      std::ifstream in(fs::path(render_dir) / "run.jsonl");
      if (!in)
        throw std::invalid_argument("no run.jsonl in " + render_dir);
      const RunRecord record = read_run_jsonl(in);
      const auto times = render_times.empty() ? snapshot_times(record.config) : parse_times(render_times);
      render_snapshots(record, render_out.empty() ? fs::path(render_dir) : fs::path(render_out), times);
    } else if (*summarize_cmd) {
      const auto dirs = expand_run_dirs(summarize_dirs);
      const Summary summary = summarize(load_outcomes(dirs));
      if (summarize_out.empty()) {
        write_summary_csv(summary, std::cout);
      } else {
        std::ofstream out(summarize_out);
        if (!out)
          throw std::invalid_argument("cannot write " + summarize_out);
        write_summary_csv(summary, out);
      }
    }
  } catch (const std::invalid_argument &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
