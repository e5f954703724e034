#include "v2n/harness/scenario.hpp"

#include <stdexcept>

namespace v2n::harness {

int Scenario::episodes_for(const std::string& kind) const {
  const auto it = episodes.find(kind);
  return it == episodes.end() ? 0 : it->second;
}

nlohmann::json Scenario::overrides_for(const std::string& kind) const {
  nlohmann::json o = nlohmann::json::object();
  // Learning agents discount with the environment's gamma unless overridden.
  if (kind == "ddpg" || kind == "a2c" || kind == "qlearn") o["gamma"] = env.gamma;
  if (agent_overrides.contains(kind)) o.update(agent_overrides.at(kind));
  return o;
}

void Scenario::validate() const {
  env.validate();
  if (seeds.empty()) throw std::invalid_argument("scenario needs at least one seed");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("train_fraction must lie in (0, 1)");
  }
  if (episode_length == 0) throw std::invalid_argument("episode_length must be positive");
  if (eval_length == 0) throw std::invalid_argument("eval_length must be positive");
  for (const auto& [kind, n] : episodes) {
    if (n < 0) throw std::invalid_argument("negative training budget for " + kind);
  }
  if (trace.kind == TraceSource::Kind::kSynthetic && trace.days < 1) {
    throw std::invalid_argument("synthetic trace needs days >= 1");
  }
  if (!(trace.vehicles_per_cpu > 0.0)) {
    throw std::invalid_argument("vehicles_per_cpu must be positive");
  }
}

namespace {

nlohmann::json profile_to_json(const SyntheticProfile& p) {
  return {{"base", p.base},
          {"amplitude", p.amplitude},
          {"noise_fraction", p.noise_fraction},
          {"weekend_drop", p.weekend_drop},
          {"morning_peak_hour", p.morning_peak_hour},
          {"morning_width_hours", p.morning_width_hours},
          {"evening_peak_hour", p.evening_peak_hour},
          {"evening_width_hours", p.evening_width_hours},
          {"evening_height", p.evening_height},
          {"start_timestamp", p.start_timestamp}};
}

SyntheticProfile profile_from_json(const nlohmann::json& j, SyntheticProfile p) {
  p.base = j.value("base", p.base);
  p.amplitude = j.value("amplitude", p.amplitude);
  p.noise_fraction = j.value("noise_fraction", p.noise_fraction);
  p.weekend_drop = j.value("weekend_drop", p.weekend_drop);
  p.morning_peak_hour = j.value("morning_peak_hour", p.morning_peak_hour);
  p.morning_width_hours = j.value("morning_width_hours", p.morning_width_hours);
  p.evening_peak_hour = j.value("evening_peak_hour", p.evening_peak_hour);
  p.evening_width_hours = j.value("evening_width_hours", p.evening_width_hours);
  p.evening_height = j.value("evening_height", p.evening_height);
  p.start_timestamp = j.value("start_timestamp", p.start_timestamp);
  return p;
}

}  // namespace

nlohmann::json to_json(const Scenario& s) {
  nlohmann::json trace;
  if (s.trace.kind == TraceSource::Kind::kSynthetic) {
    trace = {{"source", "synthetic"},
             {"days", s.trace.days},
             {"seed", s.trace.seed},
             {"profile", profile_to_json(s.trace.profile)}};
  } else {
    trace = {{"source", "file"},
             {"path", s.trace.path},
             {"timestamp_column", s.trace.format.timestamp_column},
             {"vehicles_column", s.trace.format.vehicles_column},
             {"bin_seconds", s.trace.format.bin_seconds},
             {"gap_fill", s.trace.format.gap_fill == GapFill::kLinear ? "linear" : "reject"}};
  }
  trace["vehicles_per_cpu"] = s.trace.vehicles_per_cpu;
  return {{"name", s.name},
          {"env",
           {{"n_max", s.env.n_max},
            {"beta", s.env.beta},
            {"gamma", s.env.gamma},
            {"dirichlet_alpha", s.env.dirichlet_alpha},
            {"action_limit", s.env.action_limit},
            {"initial_cpus", s.env.initial_cpus}}},
          {"trace", trace},
          {"train_fraction", s.train_fraction},
          {"episode_length", s.episode_length},
          {"random_start_cpus", s.random_start_cpus},
          {"episodes", s.episodes},
          {"eval", {{"offset", s.eval_offset}, {"length", s.eval_length}}},
          {"seeds", s.seeds},
          {"agents", s.agent_overrides}};
}

Scenario scenario_from_json(const nlohmann::json& j, Scenario s) {
  s.name = j.value("name", s.name);
  if (j.contains("env")) {
    const auto& e = j.at("env");
    s.env.n_max = e.value("n_max", s.env.n_max);
    s.env.beta = e.value("beta", s.env.beta);
    s.env.gamma = e.value("gamma", s.env.gamma);
    s.env.dirichlet_alpha = e.value("dirichlet_alpha", s.env.dirichlet_alpha);
    s.env.action_limit = e.value("action_limit", s.env.action_limit);
    s.env.initial_cpus = e.value("initial_cpus", s.env.initial_cpus);
  }
  if (j.contains("trace")) {
    const auto& t = j.at("trace");
    const auto source = t.value("source", std::string(
        s.trace.kind == TraceSource::Kind::kFile ? "file" : "synthetic"));
    if (source == "synthetic") {
      s.trace.kind = TraceSource::Kind::kSynthetic;
    } else if (source == "file") {
      s.trace.kind = TraceSource::Kind::kFile;
    } else {
      throw std::invalid_argument("trace.source must be 'synthetic' or 'file'");
    }
    s.trace.days = t.value("days", s.trace.days);
    s.trace.seed = t.value("seed", s.trace.seed);
    if (t.contains("profile")) s.trace.profile = profile_from_json(t.at("profile"), s.trace.profile);
    s.trace.path = t.value("path", s.trace.path);
    s.trace.format.timestamp_column = t.value("timestamp_column", s.trace.format.timestamp_column);
    s.trace.format.vehicles_column = t.value("vehicles_column", s.trace.format.vehicles_column);
    s.trace.format.bin_seconds = t.value("bin_seconds", s.trace.format.bin_seconds);
    if (t.contains("gap_fill")) {
      const auto g = t.at("gap_fill").get<std::string>();
      if (g == "linear") s.trace.format.gap_fill = GapFill::kLinear;
      else if (g == "reject") s.trace.format.gap_fill = GapFill::kReject;
      else throw std::invalid_argument("trace.gap_fill must be 'reject' or 'linear'");
    }
    s.trace.vehicles_per_cpu = t.value("vehicles_per_cpu", s.trace.vehicles_per_cpu);
  }
  s.train_fraction = j.value("train_fraction", s.train_fraction);
  s.episode_length = j.value("episode_length", s.episode_length);
  s.random_start_cpus = j.value("random_start_cpus", s.random_start_cpus);
  if (j.contains("episodes")) {
    for (const auto& [k, v] : j.at("episodes").items()) s.episodes[k] = v.get<int>();
  }
  if (j.contains("eval")) {
    s.eval_offset = j.at("eval").value("offset", s.eval_offset);
    s.eval_length = j.at("eval").value("length", s.eval_length);
  }
  if (j.contains("seeds")) s.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  if (j.contains("agents")) {
    for (const auto& [k, v] : j.at("agents").items()) {
      if (!s.agent_overrides.contains(k)) s.agent_overrides[k] = nlohmann::json::object();
      s.agent_overrides[k].update(v);
    }
  }
  s.validate();
  return s;
}

Scenario performance_scenario() { return Scenario{}; }

Scenario scalability_scenario(int action_limit) {
  Scenario s;
  s.name = "scalability_" + std::to_string(action_limit);
  s.env.action_limit = action_limit;
  return s;
}

Dataset build_dataset(const Scenario& scenario) {
  scenario.validate();
  const TraceSeries trace =
      scenario.trace.kind == TraceSource::Kind::kSynthetic
          ? generate_synthetic(scenario.trace.days, scenario.trace.seed, scenario.trace.profile)
          : load_trace(scenario.trace.path, scenario.trace.format);
  Dataset d;
  d.full = to_workload(trace, scenario.trace.vehicles_per_cpu);
  auto [train, test] = split(d.full, scenario.train_fraction);
  d.train = std::move(train);
  d.test = std::move(test);
  return d;
}

Window checked_test_window(const Dataset& data, std::size_t begin, std::size_t end) {
  if (end < begin || end + 1 > data.test.size()) {
    throw std::out_of_range("evaluation window [" + std::to_string(begin) + ", " +
                            std::to_string(end) + ") does not fit the test split of " +
                            std::to_string(data.test.size()) + " slots");
  }
  return {begin, end};
}

Window eval_window(const Scenario& scenario, const Dataset& data) {
  return checked_test_window(data, scenario.eval_offset,
                             scenario.eval_offset + scenario.eval_length);
}

}  // namespace v2n::harness
