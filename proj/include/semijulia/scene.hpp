#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "semijulia/cloud.hpp"
#include "semijulia/ratmap.hpp"
#include "semijulia/semigroup.hpp"

namespace semijulia {

// Scene files are INI-style:
//
//   [global]        seed, bbox = re_min,re_max,im_min,im_max, resolution, output_dir
//   [generator.N]   num, den: coefficients in ascending powers, each "re,im"
//                   (or a bare real), separated by spaces or ';'. den defaults to 1.
//   [task.N]        kind plus that kind's parameters (see task_kinds()).
//
// Generators are numbered 1..m without gaps; tasks run in increasing N.
// '#' starts a comment anywhere, ';' only at the start of a line.

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& msg)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

using ParamValue =
    std::variant<std::int64_t, double, bool, std::string, cplx, std::vector<double>, std::vector<cplx>, Word, Box>;

struct TaskSpec {
  int number = 0;        // N of [task.N]
  std::string kind;
  std::string name;      // file stem; defaults to the kind
  std::vector<int> generators;  // 0-based indices into SceneConfig::generators
  std::map<std::string, ParamValue> params;  // every parameter of the kind, defaults filled in

  template <class T>
  const T& get(const std::string& key) const {
    return std::get<T>(params.at(key));
  }
  bool has(const std::string& key) const { return params.count(key) != 0; }
};

struct SceneConfig {
  std::vector<RationalMap> generators;
  std::vector<TaskSpec> tasks;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "out";
  Box bbox = Box::square(2.5);
  int resolution = 1024;
};

// Throws ConfigError (with the line number where one applies).
SceneConfig parse_config(std::string_view text);
SceneConfig load_config(const std::filesystem::path& path);

// Kinds accepted in [task.N] sections.
std::vector<std::string> task_kinds();

// Parses key = value pairs for one task of `kind` against the global
// settings (used by the single-task CLI subcommands).
TaskSpec make_task(const SceneConfig& scene, int number, const std::string& kind,
                   const std::map<std::string, std::string>& values);

// "re,im re,im ..." -> coefficients.
std::vector<cplx> parse_coefficients(std::string_view text);

struct RunSummary {
  int failed = 0;
  std::vector<std::filesystem::path> artifacts;  // relative to output_dir
};

// Runs every task in order, writes artifacts and manifest.json under
// output_dir. A failing task is recorded in the manifest and the run goes on.
RunSummary run_scene(const SceneConfig& scene, std::ostream* log = nullptr);

// Re-hashes every artifact listed in dir/manifest.json; returns the paths
// that are missing or whose hash differs.
std::vector<std::string> verify_manifest(const std::filesystem::path& dir);

}  // namespace semijulia
