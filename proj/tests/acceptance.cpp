// Acceptance suite: one PASS/FAIL line per criterion.
//
//   v2n_acceptance [--cache DIR] [P1 P2 ...]
//
// Long training runs (P6, P7) are memoized in the cache directory, keyed by
// scenario, agent, seed and the binary's modification time, so P7 reuses the
// limit-5 runs of P6 instead of training them again. Reported runtimes are
// the summed wall clock of every run a criterion uses, cached or not.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "v2n/agents/a2c.hpp"
#include "v2n/agents/ddpg.hpp"
#include "v2n/agents/dod.hpp"
#include "v2n/agents/lstm_scaler.hpp"
#include "v2n/agents/registry.hpp"
#include "v2n/harness/results.hpp"
#include "v2n/harness/runner.hpp"
#include "v2n/harness/scenario.hpp"
#include "v2n/neural/gradcheck.hpp"
#include "v2n/simenv.hpp"

using namespace v2n;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
  double runtime = -1.0;  // seconds; < 0 means "measure the call"
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

fs::path g_cache;

// ---------------------------------------------------------------- P1

Verdict p1_conservation() {
  Rng rng(101);
  const std::size_t steps = 100000;
  double worst_conservation = 0.0, worst_reward = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    EnvConfig cfg;
    cfg.beta = rng.uniform(0.0, 2.0);
    cfg.action_limit = static_cast<int>(rng.integer(1, 25));
    EnvState s;
    s.n_active = static_cast<int>(rng.integer(1, cfg.n_max));
    s.workload = rng.uniform(0.0, 60.0);
    for (int i = 0; i < s.n_active; ++i) {
      s.backlogs.push_back(rng.uniform() < 0.5 ? 0.0 : rng.uniform(0.0, 5.0));
    }
    const int action = static_cast<int>(rng.integer(-cfg.action_limit, cfg.action_limit));
    const double next_w = rng.uniform() < 0.05 ? 0.0 : rng.uniform(0.0, 60.0);
    const auto out = step(s, action, next_w, cfg, rng);

    // Independent backlog carry-over: new CPUs empty, removed CPUs pooled
    // uniformly over the survivors.
    const auto n = static_cast<std::size_t>(out.next_state.n_active);
    std::vector<double> prev(n, 0.0);
    double pooled = 0.0;
    for (std::size_t i = 0; i < s.backlogs.size(); ++i) {
      if (i < n) prev[i] = s.backlogs[i];
      else pooled += s.backlogs[i];
    }
    for (auto& b : prev) b += pooled / static_cast<double>(n);

    double min_load = 1.0, max_backlog = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = out.shares[i] * next_w + prev[i];
      const double scale = std::max(1.0, std::abs(d));
      worst_conservation = std::max(worst_conservation, std::abs(d - out.demands[i]) / scale);
      worst_conservation = std::max(
          worst_conservation,
          std::abs(out.demands[i] - (out.cpu_loads[i] + out.next_state.backlogs[i])) / scale);
      min_load = std::min(min_load, out.cpu_loads[i]);
      max_backlog = std::max(max_backlog, out.next_state.backlogs[i]);
    }
    const double r = min_load - cfg.beta * max_backlog;
    worst_reward = std::max(worst_reward, std::abs(r - out.reward) / std::max(1.0, std::abs(r)));
  }
  return {worst_conservation <= 1e-12 && worst_reward <= 1e-12,
          fmt("%zu steps, max conservation error %.3g, max reward error %.3g (tol 1e-12)", steps,
              worst_conservation, worst_reward)};
}

// ---------------------------------------------------------------- P2

Verdict p2_dod() {
  Rng rng(202);
  std::size_t failures = 0, checked = 0;
  for (int n_max : {5, 15, 25}) {
    const agents::DodConfig c{-1.0, 1.0, n_max};
    failures += agents::dod(-1.0, c) != -n_max;
    failures += agents::dod(1.0, c) != n_max;
    failures += agents::dod(0.0, c) != 0;
    // Exact half-integers: the tie goes to the lower action.
    for (int a = -n_max; a < n_max; ++a) {
      const double raw = (a + 0.5) / n_max;
      if (std::abs(raw * n_max - (a + 0.5)) == 0.0) failures += agents::dod(raw, c) != a;
    }
    std::vector<double> raws(10000);
    for (auto& r : raws) r = rng.uniform(-1.0, 1.0);
    for (double raw : raws) {
      const double y = raw * 2.0 * n_max / (c.upper - c.lower) -
                       n_max * (c.upper + c.lower) / (c.upper - c.lower);
      int best = -n_max;
      for (int a = -n_max + 1; a <= n_max; ++a) {
        if (std::abs(a - y) < std::abs(best - y)) best = a;
      }
      failures += agents::dod(raw, c) != best;
      ++checked;
    }
    std::sort(raws.begin(), raws.end());
    for (std::size_t i = 1; i < raws.size(); ++i) {
      failures += agents::dod(raws[i - 1], c) > agents::dod(raws[i], c);
    }
  }
  return {failures == 0, fmt("%zu random raws over N_max in {5,15,25}, %zu violations", checked,
                             failures)};
}

// ---------------------------------------------------------------- P3

Verdict p3_gradients() {
  double worst = 0.0;
  std::string parts;
  for (const auto& c : neural::standard_gradient_suite(1)) {
    worst = std::max(worst, c.result.max_relative_error);
    parts += fmt(" %s=%.2e", c.name.c_str(), c.result.max_relative_error);
  }
  return {worst < 1e-4, "max relative error" + parts + " (tol 1e-4)"};
}

// ---------------------------------------------------------------- P4

Verdict p4_dirichlet() {
  Rng rng(404);
  const int draws = 10000, n = 4;
  std::vector<double> mean(n, 0.0);
  double worst_sum = 0.0;
  for (int k = 0; k < draws; ++k) {
    const auto x = sample_shares(n, 1000.0, rng);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      mean[static_cast<std::size_t>(i)] += x[static_cast<std::size_t>(i)] / draws;
      sum += x[static_cast<std::size_t>(i)];
    }
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
  }
  double worst_mean = 0.0;
  for (double m : mean) worst_mean = std::max(worst_mean, std::abs(m - 0.25));
  return {worst_mean <= 0.005 && worst_sum <= 1e-9,
          fmt("means %.5f %.5f %.5f %.5f (|m-0.25| <= 0.005), max |sum-1| %.2e (tol 1e-9)",
              mean[0], mean[1], mean[2], mean[3], worst_sum)};
}

// ---------------------------------------------------------------- P5

Verdict p5_structure() {
  std::vector<std::size_t> ddpg;
  std::vector<int> a2c;
  for (int limit : {5, 15, 25}) {
    const auto s = harness::scalability_scenario(limit);
    const auto d = harness::make_scenario_agent("ddpg", s, 1);
    const auto a = harness::make_scenario_agent("a2c", s, 1);
    ddpg.push_back(dynamic_cast<const agents::DdpgAgent&>(*d).actor().parameter_count());
    a2c.push_back(dynamic_cast<const agents::A2cAgent&>(*a).actor().spec().output_dim);
  }
  const bool pass = ddpg[0] == ddpg[1] && ddpg[1] == ddpg[2] && a2c == std::vector<int>{11, 31, 51};
  return {pass, fmt("DDPG actor parameters %zu/%zu/%zu, A2C output sizes %d/%d/%d", ddpg[0],
                    ddpg[1], ddpg[2], a2c[0], a2c[1], a2c[2])};
}

// ---------------------------------------------------------------- runs

struct RunSummary {
  double cpus = 0.0;
  double reward = 0.0;
  double wall_clock = 0.0;
};

std::string binary_stamp() {
  std::error_code ec;
  const auto t = fs::last_write_time("/proc/self/exe", ec);
  if (ec) return "0";
  return std::to_string(t.time_since_epoch().count());
}

RunSummary cached_run(const std::string& kind, const harness::Scenario& scenario,
                      const harness::Dataset& data, std::uint64_t seed) {
  auto key_doc = harness::to_json(scenario);
  key_doc.erase("name");
  key_doc.erase("seeds");
  const std::string key_text = key_doc.dump() + "|" + kind + "|" + std::to_string(seed) + "|" +
                               binary_stamp();
  const auto key = fmt("%016zx", std::hash<std::string>{}(key_text));
  const auto file = g_cache / "runs" / (kind + "_" + std::to_string(seed) + "_" + key + ".json");
  if (!g_cache.empty() && fs::exists(file)) {
    std::ifstream in(file);
    const auto j = nlohmann::json::parse(in);
    return {j.at("avg_active_cpus"), j.at("avg_reward"), j.at("wall_clock")};
  }
  const auto start = Clock::now();
  const auto r = harness::run(kind, scenario, data, seed);
  const double wall = std::chrono::duration<double>(Clock::now() - start).count();
  RunSummary out{r.metrics.avg_active_cpus, r.metrics.avg_reward, wall};
  if (!g_cache.empty()) {
    harness::write_run(g_cache / "results", scenario, r);
    fs::create_directories(file.parent_path());
    std::ofstream(file) << nlohmann::json{{"avg_active_cpus", out.cpus},
                                          {"avg_reward", out.reward},
                                          {"wall_clock", wall},
                                          {"key", key_text}}
                               .dump(2);
  }
  std::fprintf(stderr, "  %-6s %-14s seed %llu: cpus %.3f reward %.4f (%.1f s)\n", kind.c_str(),
               scenario.name.c_str(), static_cast<unsigned long long>(seed), out.cpus, out.reward,
               wall);
  return out;
}

struct AgentMean {
  double cpus = 0.0;
  double reward = 0.0;
  double wall_clock = 0.0;
};

AgentMean seed_mean(const std::string& kind, const harness::Scenario& scenario,
                    const harness::Dataset& data) {
  AgentMean m;
  for (const auto seed : scenario.seeds) {
    const auto r = cached_run(kind, scenario, data, seed);
    m.cpus += r.cpus / static_cast<double>(scenario.seeds.size());
    m.reward += r.reward / static_cast<double>(scenario.seeds.size());
    m.wall_clock += r.wall_clock;
  }
  return m;
}

// ---------------------------------------------------------------- P6

Verdict p6_performance() {
  const auto s = harness::performance_scenario();
  const auto data = harness::build_dataset(s);
  std::map<std::string, AgentMean> m;
  double wall = 0.0;
  for (const std::string kind : {"ddpg", "pi", "qlearn", "oracle", "lstm", "a2c"}) {
    m[kind] = seed_mean(kind, s, data);
    wall += m[kind].wall_clock;
  }
  const auto& d = m["ddpg"];
  const bool a = d.reward > m["pi"].reward && d.reward > m["qlearn"].reward;
  const bool b = d.cpus < m["qlearn"].cpus;
  bool c = true;
  for (const auto& [kind, v] : m) {
    if (kind != "oracle") c = c && m["oracle"].reward > v.reward;
  }
  std::string table;
  for (const auto& [kind, v] : m) table += fmt(" %s=%.2f/%.3f", kind.c_str(), v.cpus, v.reward);
  return {a && b && c && wall < 1800.0,
          fmt("(a)=%s (b)=%s (c)=%s; cpus/reward:", a ? "ok" : "no", b ? "ok" : "no",
              c ? "ok" : "no") +
              table,
          wall};
}

// ---------------------------------------------------------------- P7

Verdict p7_scalability() {
  std::map<int, AgentMean> ddpg, a2c;
  double wall = 0.0;
  for (int limit : {5, 15, 25}) {
    const auto s = harness::scalability_scenario(limit);
    const auto data = harness::build_dataset(s);
    ddpg[limit] = seed_mean("ddpg", s, data);
    a2c[limit] = seed_mean("a2c", s, data);
    wall += ddpg[limit].wall_clock + a2c[limit].wall_clock;
  }
  auto drop = [](std::map<int, AgentMean>& m, int limit) {
    return (m[5].reward - m[limit].reward) / std::abs(m[5].reward);
  };
  bool pass = wall < 3600.0;
  std::string detail;
  for (int limit : {15, 25}) {
    const double dd = drop(ddpg, limit), da = drop(a2c, limit);
    const bool within = std::abs(ddpg[limit].reward - ddpg[5].reward) <= 0.15 * std::abs(ddpg[5].reward);
    pass = pass && within && da > dd;
    detail += fmt(" limit %d: DDPG %.3f (drop %+.1f%%) A2C %.3f (drop %+.1f%%);", limit,
                  ddpg[limit].reward, 100 * dd, a2c[limit].reward, 100 * da);
  }
  return {pass, fmt("limit 5: DDPG %.3f A2C %.3f;", ddpg[5].reward, a2c[5].reward) + detail,
          wall};
}

// ---------------------------------------------------------------- P8

Verdict p8_determinism() {
  auto s = harness::performance_scenario();
  s.seeds = {7};
  s.episodes = {{"ddpg", 6}, {"a2c", 6}, {"qlearn", 200}, {"lstm", 5}, {"pi", 0}, {"oracle", 0}};
  auto wide = harness::scalability_scenario(25);
  wide.episodes = s.episodes;
  std::size_t identical = 0, total = 0;
  for (const auto* scen : {&s, &wide}) {
    const auto data = harness::build_dataset(*scen);
    for (const auto& kind : agents::agent_kinds()) {
      std::string first;
      for (int rep = 0; rep < 2; ++rep) {
        const auto r = harness::run(kind, *scen, data, 7);
        std::ostringstream csv;
        harness::write_metrics_csv(csv, *scen, r.metrics);
        write_episode_csv(csv, r.metrics.log);
        if (rep == 0) first = csv.str();
        else identical += csv.str() == first;
      }
      ++total;
    }
  }
  return {identical == total,
          fmt("%zu of %zu (scenario, agent) pairs reproduced metrics.csv and trace bit-exactly",
              identical, total)};
}

// ---------------------------------------------------------------- P9

Verdict p9_lstm() {
  std::vector<double> sine;
  for (int i = 0; i < 2000; ++i) {
    sine.push_back(12.0 + 8.0 * std::sin(2.0 * std::numbers::pi * i / 288.0));
  }
  const std::span<const double> all(sine);
  const auto train = all.first(1600), test = all.subspan(1600);
  double mean = 0.0, var = 0.0;
  for (double v : test) mean += v / static_cast<double>(test.size());
  for (double v : test) var += (v - mean) * (v - mean) / static_cast<double>(test.size());
  const double scaled_var = var / (40.0 * 40.0);
  bool pass = true;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    agents::LstmScaler s(agents::LstmScalerConfig{}, 40, Rng(seed));
    s.train(train, 50);
    const double mse = s.evaluate_mse(test);
    pass = pass && mse < scaled_var;
    detail += fmt(" %.2e", mse);
  }
  return {pass, fmt("test MSE after 50 epochs (5 seeds):%s vs variance %.2e", detail.c_str(),
                    scaled_var)};
}

struct Criterion {
  const char* id;
  double budget;  // seconds, 0 when the criterion states none
  Verdict (*fn)();
};

const Criterion kCriteria[] = {
    {"P1", 10.0, p1_conservation}, {"P2", 5.0, p2_dod},
    {"P3", 60.0, p3_gradients},    {"P4", 0.0, p4_dirichlet},
    {"P5", 0.0, p5_structure},     {"P6", 1800.0, p6_performance},
    {"P7", 3600.0, p7_scalability}, {"P8", 0.0, p8_determinism},
    {"P9", 0.0, p9_lstm},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<std::string> wanted;
  std::string cache;
  app.add_option("criteria", wanted, "criteria to run (default: all)");
  app.add_option("--cache", cache, "directory memoizing long training runs");
  CLI11_PARSE(app, argc, argv);
  g_cache = cache;

  int failed = 0;
  for (const auto& c : kCriteria) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
    const auto start = Clock::now();
    Verdict v;
    try {
      v = c.fn();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double measured = std::chrono::duration<double>(Clock::now() - start).count();
    const double runtime = v.runtime >= 0.0 ? v.runtime : measured;
    if (c.budget > 0.0 && runtime >= c.budget) {
      v.pass = false;
      v.detail += fmt(" [over budget %.0f s]", c.budget);
    }
    std::printf("%s %s %s (%.1f s)\n", c.id, v.pass ? "PASS" : "FAIL", v.detail.c_str(), runtime);
    std::fflush(stdout);
    failed += !v.pass;
  }
  return failed == 0 ? 0 : 1;
}
