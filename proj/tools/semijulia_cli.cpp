// semijulia: command-line front end. `run` executes a scene file; every other
// subcommand runs one task of that kind against the generators of a scene
// file (--config) or of --gen options.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "semijulia/exec.hpp"
#include "semijulia/scene.hpp"

using namespace semijulia;

namespace {

struct Common {
  std::string config;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
  int jobs = 0;
  std::vector<std::string> gens;
  std::vector<std::string> sets;
};

SceneConfig base_scene(const Common& c, bool need_tasks) {
  SceneConfig s;
  if (!c.config.empty()) {
    s = load_config(c.config);
  } else if (need_tasks) {
    throw ConfigError(0, "run needs --config");
  }
  if (!c.gens.empty()) {
    s.generators.clear();
    for (const auto& g : c.gens) {
      const auto slash = g.find('/');
      const auto num = parse_coefficients(g.substr(0, slash));
      const auto den = slash == std::string::npos ? std::vector<cplx>{1.0} : parse_coefficients(g.substr(slash + 1));
      s.generators.emplace_back(Polynomial(num), Polynomial(den));
    }
  }
  if (s.generators.empty()) throw ConfigError(0, "no generators: pass --config or --gen");
  if (c.seed_set) s.seed = c.seed;
  if (!c.out.empty()) s.output_dir = c.out;
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Julia sets of rational semigroups"};
  app.require_subcommand(1);
  Common c;
  auto* seed_opt = app.add_option("--seed", c.seed, "master seed (overrides [global] seed)");
  app.add_option("--config", c.config, "scene file")->check(CLI::ExistingFile);
  app.add_option("--out", c.out, "output directory (overrides [global] output_dir)");
  app.add_option("--jobs", c.jobs, "worker threads (0 = all)")->check(CLI::NonNegativeNumber);

  std::map<CLI::App*, std::string> kinds;
  CLI::App* run = app.add_subcommand("run", "run every task of a scene file");
  for (const auto& k : task_kinds()) {
    CLI::App* sub = app.add_subcommand(k, "run a single " + k + " task");
    sub->add_option("--gen", c.gens, "generator 'num[/den]', coefficients ascending as re,im pairs")->take_all();
    sub->add_option("--set", c.sets, "task parameter key=value")->take_all();
    kinds[sub] = k;
  }
  app.fallthrough();
  CLI11_PARSE(app, argc, argv);
  c.seed_set = seed_opt->count() > 0;
  set_max_threads(c.jobs);

  try {
    SceneConfig scene;
    if (run->parsed()) {
      scene = base_scene(c, true);
    } else {
      scene = base_scene(c, false);
      for (const auto& [sub, kind] : kinds) {
        if (!sub->parsed()) continue;
        std::map<std::string, std::string> values;
        for (const auto& kv : c.sets) {
          const auto eq = kv.find('=');
          if (eq == std::string::npos) throw ConfigError(0, "--set expects key=value, got '" + kv + "'");
          values[kv.substr(0, eq)] = kv.substr(eq + 1);
        }
        scene.tasks = {make_task(scene, 1, kind, values)};
      }
    }
    const auto summary = run_scene(scene, &std::cerr);
    std::cerr << summary.artifacts.size() << " artifacts in " << scene.output_dir.string() << ", " << summary.failed
              << " failed task(s)\n";
    return summary.failed ? 1 : 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
