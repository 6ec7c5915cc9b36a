#include "entlab/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <json.hpp>

#include "entlab/errors.hpp"

namespace entlab {
namespace {

using njson = nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& field, const std::string& what) {
  fail(ErrorCode::ConfigError, field + ": " + what);
}

std::string qualify(const std::string& block, const std::string& key) {
  return block.empty() ? key : block + "." + key;
}

const njson& member(const njson& obj, const std::string& block,
                    const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end()) bad(qualify(block, key), "missing required key");
  return *it;
}

void check_keys(const njson& obj, const std::string& block,
                std::initializer_list<const char*> allowed) {
  for (const auto& kv : obj.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (kv.key() == k) {
        known = true;
        break;
      }
    if (!known) bad(qualify(block, kv.key()), "unknown key");
  }
}

const njson& object_block(const njson& root, const std::string& name) {
  const njson& blk = member(root, "", name);
  if (!blk.is_object()) bad(name, "expected an object");
  return blk;
}

double as_number(const njson& v, const std::string& field) {
  if (!v.is_number()) bad(field, "expected a number");
  return v.get<double>();
}

long as_integer(const njson& v, const std::string& field) {
  if (!v.is_number_integer()) bad(field, "expected an integer");
  return v.get<long>();
}

std::string as_string(const njson& v, const std::string& field) {
  if (!v.is_string()) bad(field, "expected a string");
  return v.get<std::string>();
}

std::string num_str(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

void parse_geometry(const njson& g, ExperimentConfig& cfg) {
  check_keys(g, "geometry", {"spatial_dim", "N", "a", "m", "curvature"});
  cfg.spatial_dim =
      int(as_integer(member(g, "geometry", "spatial_dim"), "geometry.spatial_dim"));
  cfg.sites_per_dim = int(as_integer(member(g, "geometry", "N"), "geometry.N"));
  cfg.spacing = as_number(member(g, "geometry", "a"), "geometry.a");
  cfg.mass = as_number(member(g, "geometry", "m"), "geometry.m");
  if (g.contains("curvature")) {
    const njson& c = g["curvature"];
    if (c.is_number()) {
      cfg.curvature_is_constant = true;
      cfg.curvature_value = c.get<double>();
    } else if (c.is_array()) {
      cfg.curvature_is_constant = false;
      cfg.curvature_profile.clear();
      for (const auto& v : c)
        cfg.curvature_profile.push_back(as_number(v, "geometry.curvature"));
    } else {
      bad("geometry.curvature", "expected a number or an array of numbers");
    }
  }
}

void parse_regions(const njson& r, ExperimentConfig& cfg) {
  check_keys(r, "regions", {"size_a", "size_b", "separations", "placement"});
  cfg.size_a = int(as_integer(member(r, "regions", "size_a"), "regions.size_a"));
  cfg.size_b = int(as_integer(member(r, "regions", "size_b"), "regions.size_b"));
  const njson& seps = member(r, "regions", "separations");
  if (!seps.is_array()) bad("regions.separations", "expected an array of distances");
  cfg.separations.clear();
  for (const auto& v : seps)
    cfg.separations.push_back(as_number(v, "regions.separations"));
  if (cfg.separations.empty())
    bad("regions.separations",
        "separation list is empty; at least one distance is required");
  if (r.contains("placement")) {
    cfg.placement = as_string(r["placement"], "regions.placement");
    if (cfg.placement != "interval")
      bad("regions.placement", "only \"interval\" placement is implemented");
  }
}

void parse_run(const njson& u, ExperimentConfig& cfg) {
  check_keys(u, "run",
             {"backend", "dimension", "wilson_r", "observables",
              "appendix_exponents", "epsilon", "size_cap"});
  cfg.backend = as_string(member(u, "run", "backend"), "run.backend");
  if (cfg.backend != "wilson" && cfg.backend != "spectral")
    bad("run.backend", "expected \"wilson\" or \"spectral\"");
  if (u.contains("dimension")) {
    long d = as_integer(u["dimension"], "run.dimension");
    if (d < 2) bad("run.dimension", "spacetime dimension must be at least 2");
    cfg.dimension = int(d);
  }
  if (u.contains("wilson_r"))
    cfg.wilson_r = as_number(u["wilson_r"], "run.wilson_r");

  const njson& obs = member(u, "run", "observables");
  if (!obs.is_array()) bad("run.observables", "expected an array of names");
  cfg.want_cut_norm = cfg.want_mutual_info = cfg.want_appendix_norm = false;
  for (const auto& v : obs) {
    std::string name = as_string(v, "run.observables");
    bool* flag = nullptr;
    if (name == "cut_norm") flag = &cfg.want_cut_norm;
    else if (name == "mutual_info") flag = &cfg.want_mutual_info;
    else if (name == "appendix_norm") flag = &cfg.want_appendix_norm;
    else bad("run.observables", "unknown observable \"" + name + "\"");
    if (*flag) bad("run.observables", "duplicate observable \"" + name + "\"");
    *flag = true;
  }
  if (!(cfg.want_cut_norm || cfg.want_mutual_info || cfg.want_appendix_norm))
    bad("run.observables", "at least one observable is required");

  if (u.contains("appendix_exponents")) {
    const njson& pairs = u["appendix_exponents"];
    if (!pairs.is_array())
      bad("run.appendix_exponents", "expected an array of [a, b] pairs");
    cfg.appendix_exponents.clear();
    for (const auto& p : pairs) {
      if (!p.is_array() || p.size() != 2)
        bad("run.appendix_exponents", "each entry must be a pair [a, b]");
      cfg.appendix_exponents.emplace_back(
          as_number(p[0], "run.appendix_exponents"),
          as_number(p[1], "run.appendix_exponents"));
    }
  }
  if (u.contains("epsilon"))
    cfg.epsilon = as_number(u["epsilon"], "run.epsilon");
  if (u.contains("size_cap")) {
    long cap = as_integer(u["size_cap"], "run.size_cap");
    if (cap < 1) bad("run.size_cap", "must be a positive integer");
    cfg.size_cap = int(cap);
  }
}

void parse_output(const njson& o, ExperimentConfig& cfg) {
  check_keys(o, "output", {"directory", "formats", "precision"});
  if (o.contains("directory")) {
    cfg.out_directory = as_string(o["directory"], "output.directory");
    if (cfg.out_directory.empty()) bad("output.directory", "must not be empty");
  }
  if (o.contains("formats")) {
    const njson& fm = o["formats"];
    if (!fm.is_array()) bad("output.formats", "expected an array of names");
    cfg.write_csv = cfg.write_json = false;
    for (const auto& v : fm) {
      std::string name = as_string(v, "output.formats");
      bool* flag = nullptr;
      if (name == "csv") flag = &cfg.write_csv;
      else if (name == "json") flag = &cfg.write_json;
      else bad("output.formats", "unknown format \"" + name + "\"");
      if (*flag) bad("output.formats", "duplicate format \"" + name + "\"");
      *flag = true;
    }
    if (!(cfg.write_csv || cfg.write_json))
      bad("output.formats", "at least one output format is required");
  }
  if (o.contains("precision")) {
    long p = as_integer(o["precision"], "output.precision");
    if (p < 6 || p > 17)
      bad("output.precision", "significant digits must lie in [6, 17]");
    cfg.precision = int(p);
  }
}

// geometry with only the lattice shape filled in, enough for site indexing
TorusGeometry shape_only(const ExperimentConfig& cfg) {
  TorusGeometry geom;
  geom.spatial_dim = cfg.spatial_dim;
  geom.sites_per_dim = cfg.sites_per_dim;
  geom.spacing = cfg.spacing;
  geom.mass = cfg.mass;
  return geom;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  njson root;
  try {
    root = njson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ConfigError,
         std::string("config is not valid JSON (") + e.what() + ")");
  }
  if (!root.is_object())
    fail(ErrorCode::ConfigError, "config root must be a JSON object");
  check_keys(root, "", {"geometry", "regions", "run", "output"});

  ExperimentConfig cfg;
  parse_geometry(object_block(root, "geometry"), cfg);
  parse_regions(object_block(root, "regions"), cfg);
  parse_run(object_block(root, "run"), cfg);
  if (root.contains("output")) parse_output(object_block(root, "output"), cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    fail(ErrorCode::ConfigError, "config file not readable: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  njson root;
  njson g;
  g["spatial_dim"] = cfg.spatial_dim;
  g["N"] = cfg.sites_per_dim;
  g["a"] = cfg.spacing;
  g["m"] = cfg.mass;
  if (cfg.curvature_is_constant)
    g["curvature"] = cfg.curvature_value;
  else
    g["curvature"] = cfg.curvature_profile;
  root["geometry"] = g;

  njson r;
  r["size_a"] = cfg.size_a;
  r["size_b"] = cfg.size_b;
  r["separations"] = cfg.separations;
  r["placement"] = cfg.placement;
  root["regions"] = r;

  njson u;
  u["backend"] = cfg.backend;
  u["dimension"] = cfg.effective_dimension();
  u["wilson_r"] = cfg.wilson_r;
  njson obs = njson::array();
  if (cfg.want_cut_norm) obs.push_back("cut_norm");
  if (cfg.want_mutual_info) obs.push_back("mutual_info");
  if (cfg.want_appendix_norm) obs.push_back("appendix_norm");
  u["observables"] = obs;
  njson pairs = njson::array();
  for (const auto& [a, b] : cfg.appendix_exponents)
    pairs.push_back(njson::array({a, b}));
  u["appendix_exponents"] = pairs;
  u["epsilon"] = cfg.epsilon;
  u["size_cap"] = cfg.size_cap;
  root["run"] = u;

  njson o;
  o["directory"] = cfg.out_directory;
  njson fm = njson::array();
  if (cfg.write_csv) fm.push_back("csv");
  if (cfg.write_json) fm.push_back("json");
  o["formats"] = fm;
  o["precision"] = cfg.precision;
  root["output"] = o;

  return root.dump(2) + "\n";
}

PreflightReport validate_experiment(const ExperimentConfig& cfg) {
  if (cfg.spatial_dim < 1 || cfg.spatial_dim > 3)
    bad("geometry.spatial_dim", "expected 1, 2 or 3");
  if (cfg.sites_per_dim < 4 || cfg.sites_per_dim % 2 != 0)
    bad("geometry.N", "must be an even site count, at least 4");
  if (!(cfg.spacing > 0.0)) bad("geometry.a", "lattice spacing must be positive");
  if (!(cfg.mass > 0.0)) bad("geometry.m", "mass must be positive");

  long total = 1;
  for (int j = 0; j < cfg.spatial_dim; ++j) total *= cfg.sites_per_dim;

  RVec curv;
  if (cfg.curvature_is_constant) {
    if (cfg.curvature_value != 0.0)
      curv = RVec::Constant(total, cfg.curvature_value);
  } else {
    if (long(cfg.curvature_profile.size()) != total)
      bad("geometry.curvature", "profile needs one entry per site (N^p = " +
                                    std::to_string(total) + ")");
    curv = Eigen::Map<const RVec>(cfg.curvature_profile.data(), total);
  }

  PreflightReport rep;
  try {
    rep.geometry = make_torus(cfg.spatial_dim, cfg.sites_per_dim, cfg.spacing,
                              cfg.mass, curv);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::PositivityViolation)
      bad("geometry.curvature",
          "positivity violated: inf(m^2 + R/4) must stay positive");
    throw;
  }

  const int D = cfg.effective_dimension();
  if (D < cfg.spatial_dim + 1)
    bad("run.dimension", "spacetime dimension must be at least spatial_dim + 1");
  const int m8 = D % 8;
  if (m8 != 2 && m8 != 3 && m8 != 4)
    bad("run.dimension",
        "no Majorana conjugation with the needed parity in this dimension "
        "(need D mod 8 in {2, 3, 4})");
  rep.spinor_size = 1 << (D / 2);
  rep.matrix_size = long(rep.spinor_size) * total;
  if (rep.matrix_size > cfg.size_cap)
    bad("run.size_cap", "total matrix size " + std::to_string(rep.matrix_size) +
                            " exceeds the cap " + std::to_string(cfg.size_cap));

  if (cfg.backend != "wilson" && cfg.backend != "spectral")
    bad("run.backend", "expected \"wilson\" or \"spectral\"");
  if (cfg.wilson_r < 0.0 || cfg.wilson_r > 1.0)
    bad("run.wilson_r", "doubler coefficient must lie in [0, 1]");
  if (!(cfg.want_cut_norm || cfg.want_mutual_info || cfg.want_appendix_norm))
    bad("run.observables", "at least one observable is required");
  if (cfg.precision < 6 || cfg.precision > 17)
    bad("output.precision", "significant digits must lie in [6, 17]");

  if (cfg.size_a < 1) bad("regions.size_a", "A must contain at least one site");
  if (cfg.size_b < 0) bad("regions.size_b", "must be nonnegative");
  if (cfg.separations.empty())
    bad("regions.separations",
        "separation list is empty; at least one distance is required");

  double prev = 0.0;
  for (double d : cfg.separations) {
    if (!(d > 0.0)) bad("regions.separations", "distances must be positive");
    if (d <= prev) bad("regions.separations", "must be strictly ascending");
    prev = d;
    const double steps = d / cfg.spacing;
    const long n = llround(steps);
    if (n < 1 || std::abs(steps - double(n)) > 1e-9)
      bad("regions.separations", "entry " + num_str(d) +
                                     " is not a whole number of lattice "
                                     "spacings");
  }
  const double max_d = cfg.separations.back();
  const double circumference = cfg.sites_per_dim * cfg.spacing;
  if (!(max_d + (cfg.size_a + cfg.size_b) * cfg.spacing < circumference))
    bad("regions.separations",
        "scan does not fit on the torus: need max d + (|A| + |B|) a < N a");
  if (cfg.size_b > 0) {
    // the complementary arc from the far end of B back to A must not be the
    // shorter one, or the requested d stops being the true region distance
    const long corner = cfg.size_a - 1 + llround(max_d / cfg.spacing);
    const double wrap =
        (cfg.sites_per_dim - (corner + cfg.size_b - 1)) * cfg.spacing;
    if (wrap < max_d)
      bad("regions.separations",
          "entry " + num_str(max_d) +
              " exceeds the minimum-image distance on this torus");
  }

  if (cfg.want_appendix_norm) {
    if (cfg.size_b < 1)
      bad("regions.size_b", "appendix_norm needs a nonempty region B");
    if (!(cfg.epsilon > 0.0))
      bad("run.epsilon", "a positive cutoff width is required for appendix_norm");
    if (!(cfg.separations.front() > 4.0 * cfg.epsilon))
      bad("run.epsilon",
          "cutoff collars overlap: the smallest separation must exceed "
          "4 epsilon");
    if (cfg.appendix_exponents.empty())
      bad("run.appendix_exponents",
          "at least one (a, b) exponent pair is required");
  }

  rep.mass_gap = effective_mass(rep.geometry);
  rep.predicted_rate = 0.5 * rep.mass_gap;
  return rep;
}

std::vector<int> scan_region_a(const ExperimentConfig& cfg) {
  TorusGeometry geom = shape_only(cfg);
  std::vector<int> corner(cfg.spatial_dim, 0), extent(cfg.spatial_dim, 1);
  extent[0] = cfg.size_a;
  return block_sites(geom, corner, extent);
}

std::vector<int> scan_region_b(const ExperimentConfig& cfg, double d) {
  if (cfg.size_b == 0) return {};
  TorusGeometry geom = shape_only(cfg);
  std::vector<int> corner(cfg.spatial_dim, 0), extent(cfg.spatial_dim, 1);
  corner[0] = cfg.size_a - 1 + int(llround(d / cfg.spacing));
  extent[0] = cfg.size_b;
  return block_sites(geom, corner, extent);
}

}  // namespace entlab
