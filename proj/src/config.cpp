#include "smm/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace smm {

namespace {

template <class T>
T get(const YAML::Node& node, const char* key, const T& fallback) {
  const YAML::Node v = node[key];
  if (!v) return fallback;
  try {
    return v.as<T>();
  } catch (const YAML::Exception& ex) {
    throw ConfigError(std::string("bad value for '") + key + "': " + ex.what());
  }
}

void check_keys(const YAML::Node& node, const std::set<std::string>& allowed, const std::string& where) {
  if (!node.IsMap()) throw ConfigError(where + " must be a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

Box read_box(const YAML::Node& n, const std::string& where) {
  if (!n.IsSequence() || n.size() != 4) throw ConfigError(where + ": box must be [x0, y0, x1, y1]");
  const Box b{n[0].as<double>(), n[1].as<double>(), n[2].as<double>(), n[3].as<double>()};
  if (!(b.x1 > b.x0 && b.y1 > b.y0)) throw ConfigError(where + ": empty box");
  return b;
}

harness::MethodEntry read_method(const YAML::Node& n) {
  check_keys(n, {"name", "lo", "variant", "bc", "ip_mode", "ip_c", "ldg_w", "ldg_kappa"}, "methods entry");
  harness::MethodEntry m;
  try {
    m.lo.method = parse_method(get<std::string>(n, "lo", "ldg"));
    m.lo.variant = parse_variant(get<std::string>(n, "variant", "consistent"));
    m.lo.bc = parse_boundary(
        get<std::string>(n, "bc", m.lo.variant == LoVariant::Independent ? "full" : "half"));
    m.lo.ip_mode = parse_penalty_mode(get<std::string>(n, "ip_mode", "mip"));
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(ex.what());
  }
  m.lo.ip_c = get<double>(n, "ip_c", m.lo.ip_c);
  if (n["ldg_w"]) {
    const auto w = n["ldg_w"].as<std::vector<double>>();
    if (w.size() != 2) throw ConfigError("ldg_w must have two components");
    m.lo.ldg_w = {w[0], w[1]};
  }
  if (n["ldg_kappa"]) m.lo.ldg_kappa = n["ldg_kappa"].as<double>();
  m.name = get<std::string>(n, "name", m.lo.label());
  m.lo.validate();
  return m;
}

void read_outer(const YAML::Node& root, OuterConfig& outer) {
  if (const auto t = root["tolerances"]) {
    check_keys(t, {"outer", "inner", "max_outer", "max_inner", "norm"}, "tolerances");
    if (t["norm"]) {
      try {
        outer.norm = parse_outer_norm(t["norm"].as<std::string>());
      } catch (const std::invalid_argument& ex) {
        throw ConfigError(ex.what());
      }
    }
    outer.tol = get<double>(t, "outer", outer.tol);
    outer.inner_tol = get<double>(t, "inner", outer.inner_tol);
    outer.max_iters = get<int>(t, "max_outer", outer.max_iters);
    outer.max_inner = get<int>(t, "max_inner", outer.max_inner);
  }
  if (const auto s = root["solver"]) {
    check_keys(s, {"preconditioner", "anderson"}, "solver");
    outer.preconditioner = get<std::string>(s, "preconditioner", outer.preconditioner);
    if (s["anderson"] && s["anderson"].IsScalar()) outer.anderson_depth = s["anderson"].as<int>();
  }
  if (!(outer.tol > 0.0) || !(outer.inner_tol > 0.0)) throw ConfigError("tolerances must be positive");
  if (outer.max_iters < 1 || outer.max_inner < 1) throw ConfigError("iteration limits must be >= 1");
}

int read_sn(const YAML::Node& root, int fallback) {
  if (const auto q = root["quadrature"]) {
    check_keys(q, {"sn"}, "quadrature");
    return get<int>(q, "sn", fallback);
  }
  return fallback;
}

void read_crooked(const YAML::Node& root, harness::CrookedPipeOptions& o) {
  auto& p = o.problem;
  if (const auto m = root["mesh"]) {
    check_keys(m, {"nx", "ny", "bbox", "refine"}, "mesh");
    p.nx = get<int>(m, "nx", p.nx);
    p.ny = get<int>(m, "ny", p.ny);
    p.refine = get<int>(m, "refine", p.refine);
    if (m["bbox"]) p.bbox = read_box(m["bbox"], "mesh.bbox");
  }
  if (const auto mats = root["materials"]) {
    check_keys(mats, {"wall", "pipe"}, "materials");
    const auto read = [&](const char* key, double& sigma_t) {
      if (const auto n = mats[key]) {
        check_keys(n, {"sigma_t", "sigma_a"}, std::string("materials.") + key);
        sigma_t = get<double>(n, "sigma_t", sigma_t);
        p.sigma_a = get<double>(n, "sigma_a", p.sigma_a);
      }
    };
    read("wall", p.wall_sigma_t);
    read("pipe", p.pipe_sigma_t);
  }
  if (const auto r = root["regions"]) {
    check_keys(r, {"default", "boxes"}, "regions");
    const auto index = [](const std::string& name) {
      if (name == "wall") return 0;
      if (name == "pipe") return 1;
      throw ConfigError("unknown material '" + name + "' (expected wall or pipe)");
    };
    RegionMap map;
    map.default_material = index(get<std::string>(r, "default", "wall"));
    for (const auto& b : r["boxes"]) {
      check_keys(b, {"box", "material"}, "regions.boxes entry");
      map.regions.push_back({read_box(b["box"], "regions.boxes"), index(b["material"].as<std::string>())});
    }
    p.regions = map;
  }
  p.source = get<double>(root, "source", p.source);
  if (const auto in = root["inflow"]) {
    check_keys(in, {"value", "ymax"}, "inflow");
    p.inflow = get<double>(in, "value", p.inflow);
    p.inflow_ymax = get<double>(in, "ymax", p.inflow_ymax);
  }
  p.sn = read_sn(root, p.sn);
  if (const auto s = root["solver"]; s && s["anderson"] && s["anderson"].IsSequence())
    o.anderson = s["anderson"].as<std::vector<int>>();
  o.samples_per_element = get<int>(root, "samples_per_element", o.samples_per_element);
  read_outer(root, o.outer);
}

void read_mms(const YAML::Node& root, harness::MmsOptions& o) {
  if (const auto m = root["materials"]) {
    check_keys(m, {"sigma_t", "sigma_s"}, "materials");
    o.problem.sigma_t = get<double>(m, "sigma_t", o.problem.sigma_t);
    o.problem.sigma_s = get<double>(m, "sigma_s", o.problem.sigma_s);
  }
  o.problem.delta = get<double>(root, "delta", o.problem.delta);
  if (root["sizes"]) o.sizes = root["sizes"].as<std::vector<int>>();
  o.problem.sn = read_sn(root, o.problem.sn);
  read_outer(root, o.outer);
}

void read_diffusion(const YAML::Node& root, harness::DiffusionLimitOptions& o) {
  if (const auto m = root["mesh"]) {
    check_keys(m, {"n"}, "mesh");
    o.n = get<int>(m, "n", o.n);
  }
  if (root["eps"]) o.eps = root["eps"].as<std::vector<double>>();
  o.lineout_points = get<int>(root, "lineout_points", o.lineout_points);
  o.sn = read_sn(root, o.sn);
  read_outer(root, o.outer);
}

}  // namespace

CaseName parse_case(const std::string& s) {
  if (s == "mms") return CaseName::Mms;
  if (s == "diffusion-limit") return CaseName::DiffusionLimit;
  if (s == "crooked-pipe") return CaseName::CrookedPipe;
  throw ConfigError("unknown case '" + s + "' (expected mms, diffusion-limit or crooked-pipe)");
}

std::string to_string(CaseName c) {
  switch (c) {
    case CaseName::Mms: return "mms";
    case CaseName::DiffusionLimit: return "diffusion-limit";
    case CaseName::CrookedPipe: return "crooked-pipe";
  }
  return "?";
}

OuterConfig& RunConfig::outer() {
  switch (name) {
    case CaseName::Mms: return mms.outer;
    case CaseName::DiffusionLimit: return diffusion.outer;
    case CaseName::CrookedPipe: break;
  }
  return crooked.outer;
}

RunConfig default_config(CaseName c) {
  RunConfig cfg;
  cfg.name = c;
  switch (c) {
    case CaseName::Mms: cfg.methods = harness::mms_methods(); break;
    case CaseName::DiffusionLimit: cfg.methods = harness::diffusion_limit_methods(); break;
    case CaseName::CrookedPipe: cfg.methods = harness::crooked_pipe_methods(); break;
  }
  return cfg;
}

RunConfig parse_config(const std::string& yaml_text, CaseName c) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& ex) {
    throw ConfigError(std::string("YAML parse error: ") + ex.what());
  }
  RunConfig cfg = default_config(c);
  if (root.IsNull()) return cfg;

  std::set<std::string> allowed{"case", "mesh", "materials", "quadrature", "methods", "tolerances", "solver"};
  switch (c) {
    case CaseName::Mms: allowed.insert({"sizes", "delta"}); break;
    case CaseName::DiffusionLimit: allowed.insert({"eps", "lineout_points"}); break;
    case CaseName::CrookedPipe:
      allowed.insert({"regions", "source", "inflow", "samples_per_element"});
      break;
  }
  check_keys(root, allowed, "config");
  if (root["case"] && parse_case(root["case"].as<std::string>()) != c)
    throw ConfigError("config is for case '" + root["case"].as<std::string>() + "', not '" + to_string(c) + "'");

  try {
    switch (c) {
      case CaseName::Mms: read_mms(root, cfg.mms); break;
      case CaseName::DiffusionLimit: read_diffusion(root, cfg.diffusion); break;
      case CaseName::CrookedPipe: read_crooked(root, cfg.crooked); break;
    }
    if (const auto m = root["methods"]) {
      if (!m.IsSequence()) throw ConfigError("methods must be a list");
      cfg.methods.clear();
      for (const auto& entry : m) cfg.methods.push_back(read_method(entry));
    }
  } catch (const YAML::Exception& ex) {
    throw ConfigError(std::string("config: ") + ex.what());
  } catch (const UnsupportedConfiguration& ex) {
    throw ConfigError(ex.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path, CaseName c) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), c);
}

}  // namespace smm
