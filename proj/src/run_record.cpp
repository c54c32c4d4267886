#include "floodcover/run_record.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace floodcover {

using nlohmann::json;

json config_to_json(const SimConfig &c) {
  return json{
      {"n", c.n},
      {"k", c.k},
      {"dt", c.dt},
      {"t_end", c.t_end},
      {"quadrature_res", c.quadrature_res},
      {"seed", c.seed},
      {"mode", std::string(to_string(c.mode))},
      {"phi0", c.phi0},
      {"scenario", c.scenario},
      {"growth_amplitude", c.growth_amplitude},
      {"growth_period", c.growth_period},
      {"spiral_a", c.spiral.a},
      {"spiral_omega", c.spiral.omega},
      {"tau", c.tau},
      {"mask_width", c.mask_width},
      {"footprint", c.footprint},
      {"eval_res", c.eval_res},
      {"convergence_tol", c.convergence_tol},
      {"workspace", {c.workspace.min.x, c.workspace.min.y, c.workspace.max.x, c.workspace.max.y}},
  };
}

SimConfig config_from_json(const json &j) {
  SimConfig c;
  const auto get = [&](const char *key, auto &field) {
    if (j.contains(key))
      j.at(key).get_to(field);
  };
  get("n", c.n);
  get("k", c.k);
  get("dt", c.dt);
  get("t_end", c.t_end);
  get("quadrature_res", c.quadrature_res);
  get("seed", c.seed);
  if (j.contains("mode"))
    c.mode = parse_density_mode(j.at("mode").get<std::string>());
  get("phi0", c.phi0);
  get("scenario", c.scenario);
  get("growth_amplitude", c.growth_amplitude);
  get("growth_period", c.growth_period);
  get("spiral_a", c.spiral.a);
  get("spiral_omega", c.spiral.omega);
  get("tau", c.tau);
  get("mask_width", c.mask_width);
  get("footprint", c.footprint);
  get("eval_res", c.eval_res);
  get("convergence_tol", c.convergence_tol);
  if (j.contains("workspace")) {
    const auto &w = j.at("workspace");
    c.workspace = Rect::make({w.at(0).get<double>(), w.at(1).get<double>()},
                             {w.at(2).get<double>(), w.at(3).get<double>()});
  }
  c.validate();
  return c;
}

void write_run_jsonl(const RunRecord &record, std::ostream &out) {
  out << json{{"type", "header"}, {"version", kCodeVersion}, {"config", config_to_json(record.config)}}
             .dump()
      << '\n';
  for (const auto &s : record.steps) {
    json positions = json::array();
    for (auto p : s.positions)
      positions.push_back({p.x, p.y});
    json components = json::array();
    for (std::size_t i = 0; i < s.components.size(); ++i) {
      const auto &c = s.components[i];
      if (!c.rho)
        continue;
      components.push_back({{"i", i},
                            {"mu", {c.mu.x, c.mu.y}},
                            {"sigma", {c.sigma.sxx, c.sigma.sxy, c.sigma.syy}}});
    }
    out << json{{"t", s.t},
                {"positions", std::move(positions)},
                {"rho", s.rho},
                {"n_f", s.n_f},
                {"H", s.cost},
                {"coverage_rate", s.coverage_rate},
                {"max_centroid_gap", s.max_centroid_gap},
                {"components", std::move(components)}}
               .dump()
        << '\n';
  }
}

RunRecord read_run_jsonl(std::istream &in) {
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("run.jsonl: empty file");
  const json header = json::parse(line);
  if (header.value("type", "") != "header")
    throw std::runtime_error("run.jsonl: missing header");

  RunRecord record{config_from_json(header.at("config")), {}};
  const std::size_t n = record.config.n;
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    const json j = json::parse(line);
    StepRecord s;
    s.t = j.at("t").get<double>();
    for (const auto &p : j.at("positions"))
      s.positions.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    s.rho = j.at("rho").get<std::vector<std::uint8_t>>();
    s.n_f = j.at("n_f").get<int>();
    s.cost = j.at("H").get<double>();
    s.coverage_rate = j.at("coverage_rate").get<double>();
    s.max_centroid_gap = j.at("max_centroid_gap").get<double>();
    s.components.assign(n, GaussianComponent{});
    for (const auto &c : j.at("components")) {
      const auto i = c.at("i").get<std::size_t>();
      const auto &mu = c.at("mu");
      const auto &sg = c.at("sigma");
      s.components.at(i) = {{mu.at(0).get<double>(), mu.at(1).get<double>()},
                            {sg.at(0).get<double>(), sg.at(1).get<double>(), sg.at(2).get<double>()},
                            true};
    }
    if (s.positions.size() != n || s.rho.size() != n)
      throw std::runtime_error("run.jsonl: step does not match fleet size");
    record.steps.push_back(std::move(s));
  }
  return record;
}

} // namespace floodcover
