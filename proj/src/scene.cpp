#include "semijulia/scene.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include "semijulia/analysis.hpp"
#include "semijulia/checkers.hpp"
#include "semijulia/fiberedpoly.hpp"
#include "semijulia/io.hpp"
#include "semijulia/julia.hpp"
#include "semijulia/rng.hpp"

namespace semijulia {

namespace {

using io::Json;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, std::string_view seps) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const auto j = s.find_first_of(seps, i);
    const auto tok = trim(s.substr(i, j == std::string_view::npos ? std::string_view::npos : j - i));
    if (!tok.empty()) out.push_back(tok);
    if (j == std::string_view::npos) break;
    i = j + 1;
  }
  return out;
}

// Throws std::invalid_argument with a short reason; callers add the key.
double to_real(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v))
    throw std::invalid_argument("expected a finite number, got '" + s + "'");
  return v;
}

std::int64_t to_int(const std::string& s) {
  std::int64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::invalid_argument("expected an integer, got '" + s + "'");
  return v;
}

cplx to_cplx(const std::string& s) {
  const auto parts = split(s, ",");
  if (parts.size() == 1 && s.find(',') == std::string::npos) return {to_real(parts[0]), 0.0};
  if (parts.size() != 2) throw std::invalid_argument("expected 're,im', got '" + s + "'");
  return {to_real(parts[0]), to_real(parts[1])};
}

std::vector<cplx> to_cplx_list(const std::string& s) {
  std::vector<cplx> out;
  for (const auto& tok : split(s, " \t;")) out.push_back(to_cplx(tok));
  return out;
}

std::vector<double> to_real_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& tok : split(s, " \t,;")) out.push_back(to_real(tok));
  return out;
}

Box to_box(const std::string& s) {
  const auto v = to_real_list(s);
  if (v.size() != 4) throw std::invalid_argument("expected re_min,re_max,im_min,im_max");
  const Box b{v[0], v[1], v[2], v[3]};
  if (b.degenerate()) throw std::invalid_argument("empty box");
  return b;
}

bool to_bool(const std::string& s) {
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  throw std::invalid_argument("expected true or false, got '" + s + "'");
}

enum class Type { Count, Real, Positive, Bool, Choice, Cplx, CplxList, RealList, WordT, BoxT };

struct Param {
  std::string key;
  Type type;
  std::string fallback;  // "" = required; "$bbox" / "$resolution" = from [global]
  std::vector<std::string> choices = {};
};

const std::map<std::string, std::vector<Param>>& schema() {
  static const std::map<std::string, std::vector<Param>> s = [] {
    const Param points{"points", Type::Count, "100000"};
    const Param burn{"burn_in", Type::Count, "100"};
    const Param bbox{"bbox", Type::BoxT, "$bbox"};
    const Param res{"resolution", Type::Count, "$resolution"};
    const Param word{"word", Type::WordT, ""};
    const Param length{"length", Type::Count, "0"};
    const std::vector<Param> poincare{{"base", Type::CplxList, "auto"},
                                      {"s_min", Type::Real, "0.2"},
                                      {"s_max", Type::Real, "2"},
                                      {"s_steps", Type::Count, "19"},
                                      {"length", Type::Count, "10"}};
    std::map<std::string, std::vector<Param>> m;
    m["render-julia"] = {points, burn, bbox, res};
    m["fiber-julia"] = {word, length, points, {"equilibrium", Type::Bool, "false"}, bbox, res};
    m["check-osc"] = {{"region", Type::Choice, "disk", {"disk", "polygon"}},
                      {"center", Type::Cplx, "0"},
                      {"radius", Type::Positive, "2"},
                      {"metric", Type::Choice, "euclidean", {"euclidean", "chordal"}},
                      {"vertices", Type::CplxList, "none"},
                      {"density", Type::Count, "200"}};
    m["check-hyperbolic"] = {{"length", Type::Count, "8"}, points, burn, {"threshold", Type::Positive, "1e-3"}};
    m["check-semihyp"] = {{"delta", Type::Positive, "0.05"}, {"length", Type::Count, "8"}, {"n_cap", Type::Count, "16"},
                          {"samples", Type::Count, "16"}, {"points", Type::Count, "20000"}, burn,
                          {"extra", Type::CplxList, "none"}};
    m["box-dim"] = {{"points", Type::Count, "1000000"}, burn, bbox, {"coarsest", Type::Count, "16"},
                    {"levels", Type::Count, "5"}};
    m["porosity"] = {{"points", Type::Count, "1000000"}, burn, bbox, {"resolution", Type::Count, "2048"},
                     {"radii", Type::RealList, "0.05,0.1,0.2"}, {"centers", Type::Count, "256"}};
    m["uniform-perfectness"] = {points,
                                burn,
                                {"centers", Type::Count, "512"},
                                {"r_min", Type::Positive, "1e-3"},
                                {"r_max", Type::Positive, "1"},
                                {"r_steps", Type::Count, "31"},
                                {"gap_factor", Type::Positive, "4"}};
    m["poincare"] = poincare;
    m["dim-bound"] = {{"points", Type::Count, "1000000"}, burn, bbox, {"coarsest", Type::Count, "16"},
                      {"levels", Type::Count, "5"}, {"margin", Type::Real, "0.1"}};
    for (const auto& p : poincare) m["dim-bound"].push_back(p);
    m["green-field"] = {word,
                        length,
                        {"n_max", Type::Count, "0"},
                        bbox,
                        res,
                        {"samples", Type::Count, "1000"},
                        {"radii", Type::RealList, "10,20,30,40,50,60,70,80,90,100"}};
    m["john-test"] = {word,
                      length,
                      bbox,
                      res,
                      {"lines", Type::Count, "32"},
                      {"start_radius", Type::Real, "0"},
                      {"step", Type::Positive, "1"},
                      {"c", Type::Real, "1"}};
    return m;
  }();
  return s;
}

ParamValue convert(const Param& p, const std::string& raw) {
  switch (p.type) {
    case Type::Count: {
      const auto v = to_int(raw);
      if (v < 0) throw std::invalid_argument("must be nonnegative");
      return v;
    }
    case Type::Real:
      return to_real(raw);
    case Type::Positive: {
      const double v = to_real(raw);
      if (!(v > 0.0)) throw std::invalid_argument("must be positive");
      return v;
    }
    case Type::Bool:
      return to_bool(raw);
    case Type::Choice:
      if (std::find(p.choices.begin(), p.choices.end(), raw) == p.choices.end())
        throw std::invalid_argument("unknown value '" + raw + "'");
      return raw;
    case Type::Cplx:
      return to_cplx(raw);
    case Type::CplxList:
      if (raw == "auto" || raw == "none") return std::vector<cplx>{};
      return to_cplx_list(raw);
    case Type::RealList:
      return to_real_list(raw);
    case Type::WordT: {
      std::vector<int> sym;
      for (const auto& tok : split(raw, " \t,;")) {
        const auto v = to_int(tok);
        if (v < 1) throw std::invalid_argument("generator indices start at 1");
        sym.push_back(static_cast<int>(v - 1));
      }
      if (sym.empty()) throw std::invalid_argument("empty word");
      return Word(sym);
    }
    case Type::BoxT:
      return to_box(raw);
  }
  return std::int64_t{0};
}

Json param_json(const ParamValue& v) {
  return std::visit(
      [](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, cplx>) {
          return io::to_json(ExtComplex(x));
        } else if constexpr (std::is_same_v<T, std::vector<cplx>>) {
          Json a = Json::array();
          for (const auto& z : x) a.push_back(io::to_json(ExtComplex(z)));
          return a;
        } else if constexpr (std::is_same_v<T, Word> || std::is_same_v<T, Box>) {
          return io::to_json(x);
        } else {
          return x;
        }
      },
      v);
}

bool valid_name(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
  });
}

struct Section {
  std::string name;
  int line = 0;
  std::vector<std::tuple<std::string, std::string, int>> entries;  // key, value, line
};

// Fills a TaskSpec from raw entries; errors carry the line of the entry.
TaskSpec build_task(const SceneConfig& scene, int number, int section_line,
                    const std::vector<std::tuple<std::string, std::string, int>>& entries) {
  TaskSpec t;
  t.number = number;
  const std::string where = "[task." + std::to_string(number) + "] ";
  int kind_line = section_line;
  for (const auto& [k, v, line] : entries)
    if (k == "kind") {
      t.kind = v;
      kind_line = line;
    }
  if (t.kind.empty()) throw ConfigError(section_line, where + "missing task kind");
  const auto it = schema().find(t.kind);
  if (it == schema().end()) throw ConfigError(kind_line, where + "kind: unknown task '" + t.kind + "'");
  const auto& params = it->second;

  t.name = t.kind;
  for (int j = 0; j < static_cast<int>(scene.generators.size()); ++j) t.generators.push_back(j);
  std::set<std::string> seen;
  for (const auto& [k, v, line] : entries) {
    if (k == "kind") continue;
    if (k == "name") {
      if (!valid_name(v)) throw ConfigError(line, where + "name: use letters, digits, '-' and '_'");
      t.name = v;
      continue;
    }
    if (k == "generators") {
      t.generators.clear();
      try {
        for (const auto& tok : split(v, " \t,;")) {
          const auto g = to_int(tok);
          if (g < 1 || g > static_cast<std::int64_t>(scene.generators.size()))
            throw std::invalid_argument("no generator " + tok);
          t.generators.push_back(static_cast<int>(g - 1));
        }
      } catch (const std::invalid_argument& e) {
        throw ConfigError(line, where + "generators: " + e.what());
      }
      if (t.generators.empty()) throw ConfigError(line, where + "generators: empty list");
      continue;
    }
    const auto p = std::find_if(params.begin(), params.end(), [&](const Param& q) { return q.key == k; });
    if (p == params.end()) throw ConfigError(line, where + "unknown key '" + k + "' for " + t.kind);
    try {
      t.params[k] = convert(*p, v);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(line, where + k + ": " + e.what());
    }
    seen.insert(k);
  }
  for (const auto& p : params) {
    if (seen.count(p.key)) continue;
    if (p.fallback.empty()) throw ConfigError(section_line, where + "missing required key '" + p.key + "'");
    if (p.fallback == "$bbox")
      t.params[p.key] = scene.bbox;
    else if (p.fallback == "$resolution")
      t.params[p.key] = static_cast<std::int64_t>(scene.resolution);
    else
      t.params[p.key] = convert(p, p.fallback);
  }

  // Cross-field checks that do not need any computation.
  auto fail = [&](const std::string& key, const std::string& msg) { throw ConfigError(section_line, where + key + ": " + msg); };
  if (t.has("word")) {
    for (int s : t.get<Word>("word").symbols())
      if (s >= static_cast<int>(t.generators.size())) fail("word", "symbol " + std::to_string(s + 1) + " exceeds the generator count");
  }
  if (t.has("resolution") && t.get<std::int64_t>("resolution") < 8) fail("resolution", "must be at least 8");
  if (t.has("points") && t.get<std::int64_t>("points") < 1) fail("points", "must be positive");
  if (t.kind == "check-osc" && t.get<std::string>("region") == "polygon" &&
      t.get<std::vector<cplx>>("vertices").size() < 3)
    fail("vertices", "a polygon needs at least 3 vertices");
  if (t.has("s_steps") && (t.get<std::int64_t>("s_steps") < 2 || !(t.get<double>("s_max") > t.get<double>("s_min"))))
    fail("s_steps", "need s_min < s_max and at least 2 steps");
  if (t.has("r_steps") && (t.get<std::int64_t>("r_steps") < 1 || !(t.get<double>("r_max") >= t.get<double>("r_min"))))
    fail("r_steps", "need r_min <= r_max and at least 1 step");
  if (t.kind == "green-field" || t.kind == "john-test") {
    for (int g : t.generators)
      if (!scene.generators[g].is_polynomial() || scene.generators[g].degree() < 2)
        fail("generators", "fibered Green's functions need polynomials of degree >= 2");
  }
  return t;
}

}  // namespace

std::vector<std::string> task_kinds() {
  std::vector<std::string> out;
  for (const auto& [k, _] : schema()) out.push_back(k);
  return out;
}

std::vector<cplx> parse_coefficients(std::string_view text) { return to_cplx_list(std::string(text)); }

SceneConfig parse_config(std::string_view text) {
  std::vector<Section> sections;
  std::set<std::string> names;
  int lineno = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty() || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(lineno, "unterminated section header");
      const std::string name = trim(std::string_view(line).substr(1, line.size() - 2));
      if (name.empty()) throw ConfigError(lineno, "empty section name");
      if (!names.insert(name).second) throw ConfigError(lineno, "duplicate section [" + name + "]");
      sections.push_back({name, lineno, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(lineno, "expected 'key = value' or '[section]'");
    if (sections.empty()) throw ConfigError(lineno, "key outside of any section");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    if (key.empty()) throw ConfigError(lineno, "empty key");
    auto& sec = sections.back();
    for (const auto& e : sec.entries)
      if (std::get<0>(e) == key) throw ConfigError(lineno, "duplicate key '" + key + "' in [" + sec.name + "]");
    sec.entries.emplace_back(key, trim(std::string_view(line).substr(eq + 1)), lineno);
  }

  SceneConfig scene;
  std::map<int, const Section*> gens, tasks;
  auto section_number = [](const Section& s, std::size_t prefix) {
    try {
      const auto n = to_int(s.name.substr(prefix));
      if (n < 1) throw std::invalid_argument("");
      return static_cast<int>(n);
    } catch (const std::invalid_argument&) {
      throw ConfigError(s.line, "section [" + s.name + "] needs a positive number");
    }
  };
  for (const auto& s : sections) {
    if (s.name == "global") {
      for (const auto& [k, v, line] : s.entries) {
        try {
          if (k == "seed") {
            const auto r = std::from_chars(v.data(), v.data() + v.size(), scene.seed);
            if (r.ec != std::errc() || r.ptr != v.data() + v.size()) throw std::invalid_argument("expected an unsigned integer");
          } else if (k == "bbox") {
            scene.bbox = to_box(v);
          } else if (k == "resolution") {
            const auto r = to_int(v);
            if (r < 8) throw std::invalid_argument("must be at least 8");
            scene.resolution = static_cast<int>(r);
          } else if (k == "output_dir") {
            if (v.empty()) throw std::invalid_argument("empty path");
            scene.output_dir = v;
          } else {
            throw ConfigError(line, "[global] unknown key '" + k + "'");
          }
        } catch (const std::invalid_argument& e) {
          throw ConfigError(line, "[global] " + k + ": " + e.what());
        }
      }
    } else if (s.name.rfind("generator.", 0) == 0) {
      gens[section_number(s, 10)] = &s;
    } else if (s.name.rfind("task.", 0) == 0) {
      tasks[section_number(s, 5)] = &s;
    } else {
      throw ConfigError(s.line, "unknown section [" + s.name + "]");
    }
  }

  int expect = 1;
  for (const auto& [n, s] : gens) {
    const std::string where = "[generator." + std::to_string(n) + "] ";
    if (n != expect++) throw ConfigError(s->line, where + "generators must be numbered 1, 2, ... without gaps");
    std::vector<cplx> num, den{1.0};
    bool have_num = false;
    int den_line = s->line;
    for (const auto& [k, v, line] : s->entries) {
      try {
        if (k == "num") {
          num = parse_coefficients(v);
          have_num = true;
        } else if (k == "den") {
          den = parse_coefficients(v);
          den_line = line;
        } else {
          throw ConfigError(line, where + "unknown key '" + k + "'");
        }
        if ((k == "num" ? num : den).empty()) throw std::invalid_argument("no coefficients");
      } catch (const std::invalid_argument& e) {
        throw ConfigError(line, where + k + ": " + e.what());
      }
    }
    if (!have_num) throw ConfigError(s->line, where + "missing required key 'num'");
    if (std::all_of(den.begin(), den.end(), [](cplx c) { return c == cplx{}; }))
      throw ConfigError(den_line, where + "den: denominator identically zero");
    try {
      scene.generators.emplace_back(Polynomial(num), Polynomial(den));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(s->line, where + e.what());
    }
  }
  if (scene.generators.empty()) throw ConfigError(0, "no [generator.N] section");
  if (tasks.empty()) throw ConfigError(0, "no [task.N] section");

  std::set<std::string> task_names;
  for (const auto& [n, s] : tasks) {
    scene.tasks.push_back(build_task(scene, n, s->line, s->entries));
    if (!task_names.insert(scene.tasks.back().name).second)
      throw ConfigError(s->line, "[task." + std::to_string(n) + "] name: '" + scene.tasks.back().name + "' is used twice");
  }
  return scene;
}

SceneConfig load_config(const std::filesystem::path& path) { return parse_config(io::read_file(path)); }

TaskSpec make_task(const SceneConfig& scene, int number, const std::string& kind,
                   const std::map<std::string, std::string>& values) {
  std::vector<std::tuple<std::string, std::string, int>> entries{{"kind", kind, 0}};
  for (const auto& [k, v] : values) entries.emplace_back(k, v, 0);
  return build_task(scene, number, 0, entries);
}

// ---------------------------------------------------------------------------
// Task execution

namespace {

struct Artifacts {
  std::vector<std::pair<std::string, std::string>> files;  // suffix, bytes
  Json result;
};

GeneratorSystem subsystem(const SceneConfig& scene, const TaskSpec& t) {
  std::vector<RationalMap> g;
  for (int j : t.generators) g.push_back(scene.generators[j]);
  return GeneratorSystem(g);
}

std::size_t count_of(const TaskSpec& t, const char* key) { return static_cast<std::size_t>(t.get<std::int64_t>(key)); }

PointCloud task_cloud(const GeneratorSystem& G, const TaskSpec& t, std::uint64_t seed) {
  return backward_orbit_cloud(G, count_of(t, "points"), static_cast<int>(t.get<std::int64_t>("burn_in")), seed);
}

Word task_word(const TaskSpec& t) {
  const Word& w = t.get<Word>("word");
  const int len = static_cast<int>(t.get<std::int64_t>("length"));
  return len > 0 ? Word::periodic(w.symbols(), len) : w;
}

std::vector<double> s_grid(const TaskSpec& t) {
  const double a = t.get<double>("s_min"), b = t.get<double>("s_max");
  const int n = static_cast<int>(t.get<std::int64_t>("s_steps"));
  std::vector<double> s(n);
  for (int i = 0; i < n; ++i) s[i] = a + (b - a) * i / (n - 1);
  return s;
}

PoincareReport task_poincare(const GeneratorSystem& G, const TaskSpec& t) {
  std::vector<ExtComplex> xs;
  for (const auto& z : t.get<std::vector<cplx>>("base")) xs.emplace_back(z);
  if (xs.empty()) xs.push_back(find_seed_point(G).point);
  return poincare_min(G, xs, s_grid(t), static_cast<int>(t.get<std::int64_t>("length")));
}

DimensionReport task_box_dim(const PointCloud& cloud, const TaskSpec& t, GridRaster* finest) {
  const auto rasters = dyadic_rasters(cloud, t.get<Box>("bbox"), static_cast<int>(t.get<std::int64_t>("coarsest")),
                                      static_cast<int>(t.get<std::int64_t>("levels")));
  if (finest) *finest = rasters.back();
  return box_dimension(rasters);
}

void add_cloud_images(Artifacts& a, const PointCloud& cloud, const TaskSpec& t) {
  const Box& bbox = t.get<Box>("bbox");
  const int res = static_cast<int>(t.get<std::int64_t>("resolution"));
  const auto r = rasterize(cloud, bbox, res, res);
  a.files.emplace_back(".csv", io::cloud_csv(cloud));
  a.files.emplace_back(".ppm", io::density_ppm(cloud, bbox, res, res));
  a.files.emplace_back(".pgm", io::pgm_bytes(r.raster));
  a.result["points"] = cloud.size();
  a.result["occupied_cells"] = r.raster.count();
  a.result["outside_bbox"] = r.outside;
  a.result["at_infinity"] = r.at_infinity;
  a.result["provenance"] = cloud.provenance;
}

Artifacts run_task(const SceneConfig& scene, const TaskSpec& t, std::uint64_t seed) {
  const GeneratorSystem G = subsystem(scene, t);
  const std::uint64_t cloud_seed = derive_seed(seed, 0);
  Artifacts a;
  const std::string& k = t.kind;
  if (k == "render-julia") {
    add_cloud_images(a, task_cloud(G, t, cloud_seed), t);
  } else if (k == "fiber-julia") {
    const Word x = task_word(t);
    const auto cloud = t.get<bool>("equilibrium") ? equilibrium_sample(G, x, count_of(t, "points"), cloud_seed)
                                                  : fiber_julia_cloud(G, x, count_of(t, "points"), cloud_seed);
    a.result["word"] = io::to_json(x);
    add_cloud_images(a, cloud, t);
  } else if (k == "check-osc") {
    const bool disk = t.get<std::string>("region") == "disk";
    const auto U = disk ? RegionSpec::disk(t.get<cplx>("center"), t.get<double>("radius"),
                                           t.get<std::string>("metric") == "chordal" ? RegionSpec::Metric::Chordal
                                                                                     : RegionSpec::Metric::Euclidean)
                        : RegionSpec::polygon(t.get<std::vector<cplx>>("vertices"));
    const auto r = check_osc(G, U, static_cast<int>(t.get<std::int64_t>("density")));
    a.result = io::to_json(r);
    a.result["region"] = U.describe();
    a.files.emplace_back(".csv", io::csv(r));
  } else if (k == "check-hyperbolic") {
    const auto r = check_hyperbolic(G, static_cast<int>(t.get<std::int64_t>("length")), task_cloud(G, t, cloud_seed),
                                    t.get<double>("threshold"));
    a.result = io::to_json(r);
  } else if (k == "check-semihyp") {
    const auto cloud = task_cloud(G, t, cloud_seed);
    const std::size_t n = std::min(count_of(t, "samples"), cloud.size());
    PointCloud samples{{}, cloud.seed, cloud.provenance + "; strided subsample"};
    for (std::size_t i = 0; i < n; ++i) samples.points.push_back(cloud.points[i * cloud.size() / n]);
    for (const auto& z : t.get<std::vector<cplx>>("extra")) samples.points.emplace_back(z);
    const auto r = check_semihyperbolic(G, t.get<double>("delta"), static_cast<int>(t.get<std::int64_t>("length")),
                                        samples, static_cast<int>(t.get<std::int64_t>("n_cap")));
    a.result = io::to_json(r);
    a.files.emplace_back(".csv", io::csv(r));
  } else if (k == "box-dim") {
    GridRaster finest;
    const auto r = task_box_dim(task_cloud(G, t, cloud_seed), t, &finest);
    a.result = io::to_json(r);
    a.files.emplace_back(".csv", io::csv(r));
    a.files.emplace_back(".pgm", io::pgm_bytes(finest));
  } else if (k == "porosity") {
    const int res = static_cast<int>(t.get<std::int64_t>("resolution"));
    const auto raster = rasterize(task_cloud(G, t, cloud_seed), t.get<Box>("bbox"), res, res).raster;
    const auto r = porosity_estimate(raster, t.get<std::vector<double>>("radii"), static_cast<int>(t.get<std::int64_t>("centers")));
    a.result = io::to_json(r);
    a.files.emplace_back(".csv", io::csv(r));
    a.files.emplace_back(".pgm", io::pgm_bytes(raster));
  } else if (k == "uniform-perfectness") {
    const int n = static_cast<int>(t.get<std::int64_t>("r_steps"));
    const double lo = t.get<double>("r_min"), hi = t.get<double>("r_max");
    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i) grid[i] = n == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    UPOptions opts;
    opts.gap_factor = t.get<double>("gap_factor");
    const auto r = uniform_perfectness_estimate(task_cloud(G, t, cloud_seed), static_cast<int>(t.get<std::int64_t>("centers")),
                                                grid, opts);
    a.result = io::to_json(r);
    a.files.emplace_back(".csv", io::csv(r));
  } else if (k == "poincare") {
    const auto r = task_poincare(G, t);
    a.result = io::to_json(r);
    a.files.emplace_back(".csv", io::csv(r));
  } else if (k == "dim-bound") {
    const auto dim = task_box_dim(task_cloud(G, t, cloud_seed), t, nullptr);
    const auto p = task_poincare(G, t);
    a.result["dimension"] = io::to_json(dim);
    a.result["poincare"] = io::to_json(p);
    a.result["margin"] = t.get<double>("margin");
    a.result["bound"] = io::to_json(verify_dimension_bound(dim, p, t.get<double>("margin")));
  } else if (k == "green-field") {
    const Word x = task_word(t);
    const double R = escape_radius(G);
    const int res = static_cast<int>(t.get<std::int64_t>("resolution"));
    const int n_max = t.get<std::int64_t>("n_max") > 0 ? static_cast<int>(t.get<std::int64_t>("n_max")) : x.length();
    const Box& bbox = t.get<Box>("bbox");
    const auto b = basin_mask(G, x, bbox, res, res, R, n_max);
    a.files.emplace_back(".gfield", io::green_field_bytes(b.field));
    a.files.emplace_back(".pgm", io::pgm_bytes(b.mask));
    a.result["header"] = io::green_field_header(b.field);
    a.result["escaping_cells"] = b.mask.count();
    a.result["boundary_cells"] = b.boundary.count();

    // Functional equation on random escaping points of the box.
    StreamRng rng(derive_seed(seed, 1), 0);
    const std::size_t want = count_of(t, "samples");
    std::size_t tested = 0, tries = 0;
    double worst = 0.0;
    while (tested < want && tries < 100 * want + 100) {
      ++tries;
      const cplx y(bbox.re_min + bbox.width() * rng.uniform(), bbox.im_min + bbox.height() * rng.uniform());
      if (!green_value(G, x, y, R, n_max).escaped) continue;
      worst = std::max(worst, green_functional_check(G, x, y, R));
      ++tested;
    }
    Json fe;
    fe["samples"] = tested;
    fe["max_residual"] = worst;
    a.result["functional_equation"] = fe;

    Json prof = Json::array();
    for (double rho : t.get<std::vector<double>>("radii")) {
      Json p;
      p["radius"] = rho;
      p["max_deviation"] = green_circle_deviation(G, x, rho);
      p["bound"] = io::to_json(green_asymptotic_bound(G, rho));
      prof.push_back(p);
    }
    a.result["asymptotics"] = prof;
  } else if (k == "john-test") {
    const Word x = task_word(t);
    const int res = static_cast<int>(t.get<std::int64_t>("resolution"));
    const Box& bbox = t.get<Box>("bbox");
    const auto b = basin_mask(G, x, bbox, res, res, escape_radius(G), x.length());
    const cplx mid(0.5 * (bbox.re_min + bbox.re_max), 0.5 * (bbox.im_min + bbox.im_max));
    double r0 = t.get<double>("start_radius");
    if (r0 <= 0.0) r0 = 0.45 * std::min(bbox.width(), bbox.height());
    const int n_lines = static_cast<int>(t.get<std::int64_t>("lines"));
    std::vector<GreenLine> lines;
    for (int i = 0; i < n_lines; ++i)
      lines.push_back(green_line(b.field, mid + std::polar(r0, 2.0 * std::numbers::pi * (i + 0.5) / n_lines),
                                 t.get<double>("step")));
    const auto r = john_carrot_test(b.mask, lines, t.get<double>("c"));
    a.result = io::to_json(r);
    Json ls = Json::array();
    for (const auto& l : lines) ls.push_back(io::to_json(l));
    a.result["lines"] = ls;
    a.files.emplace_back(".csv", io::csv(r));
    a.files.emplace_back(".pgm", io::pgm_bytes(b.mask));
  } else {
    throw std::logic_error("unhandled task kind " + k);
  }
  return a;
}

std::string task_stem(const TaskSpec& t) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d-", t.number);
  return buf + t.name;
}

}  // namespace

RunSummary run_scene(const SceneConfig& scene, std::ostream* log) {
  namespace fs = std::filesystem;
  fs::create_directories(scene.output_dir);
  RunSummary summary;
  Json manifest;
  manifest["format"] = "semijulia-manifest/1";
  manifest["seed"] = scene.seed;
  Json gens = Json::array();
  for (const auto& g : scene.generators) gens.push_back(g.to_string());
  manifest["generators"] = gens;
  Json tasks = Json::array();

  for (const auto& t : scene.tasks) {
    const std::uint64_t seed = derive_seed(scene.seed, static_cast<std::uint64_t>(t.number));
    const auto start = std::chrono::steady_clock::now();
    Json entry;
    entry["task"] = t.number;
    entry["name"] = t.name;
    entry["kind"] = t.kind;
    entry["seed"] = seed;
    Json listed = Json::array();
    try {
      Artifacts a = run_task(scene, t, seed);
      Json report;
      report["task"] = t.number;
      report["name"] = t.name;
      report["kind"] = t.kind;
      report["seed"] = seed;
      Json tg = Json::array();
      for (int j : t.generators) tg.push_back(j + 1);
      report["generators"] = tg;
      Json params;
      for (const auto& [key, v] : t.params) params[key] = param_json(v);
      report["params"] = params;
      report["result"] = a.result;
      a.files.insert(a.files.begin(), {".json", report.dump(2) + "\n"});
      for (const auto& [suffix, bytes] : a.files) {
        const std::string rel = task_stem(t) + suffix;
        io::write_file(scene.output_dir / rel, bytes);
        Json art;
        art["path"] = rel;
        art["bytes"] = bytes.size();
        art["sha256"] = io::sha256_hex(bytes);
        listed.push_back(art);
        summary.artifacts.push_back(rel);
      }
      entry["status"] = "ok";
    } catch (const std::exception& e) {
      ++summary.failed;
      entry["status"] = "failed";
      entry["error"] = e.what();
    }
    entry["artifacts"] = listed;
    tasks.push_back(entry);
    if (log) {
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      *log << "[task " << t.number << "] " << t.name << " (" << t.kind << "): " << entry["status"].get<std::string>();
      if (entry.contains("error")) *log << ": " << entry["error"].get<std::string>();
      *log << " in " << io::fmt(std::round(secs * 100.0) / 100.0) << " s\n";
    }
  }
  manifest["tasks"] = tasks;
  manifest["failed"] = summary.failed;
  io::write_file(scene.output_dir / "manifest.json", manifest.dump(2) + "\n");
  return summary;
}

std::vector<std::string> verify_manifest(const std::filesystem::path& dir) {
  const Json m = Json::parse(io::read_file(dir / "manifest.json"));
  std::vector<std::string> bad;
  for (const auto& t : m.at("tasks"))
    for (const auto& a : t.at("artifacts")) {
      const std::string rel = a.at("path");
      try {
        if (io::sha256_hex(io::read_file(dir / rel)) != a.at("sha256").get<std::string>()) bad.push_back(rel);
      } catch (const std::runtime_error&) {
        bad.push_back(rel);
      }
    }
  return bad;
}

}  // namespace semijulia
