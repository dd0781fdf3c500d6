#include "kairon/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace kairon {

using nlohmann::ordered_json;

namespace {

[[noreturn]] void bad(const std::string& msg) { throw ConfigError("config error: " + msg); }

double get_number(const ordered_json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) bad(std::string(key) + " must be a number");
  return j.at(key).get<double>();
}

int get_int(const ordered_json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer()) bad(std::string(key) + " must be an integer");
  return j.at(key).get<int>();
}

std::vector<double> get_vector(const ordered_json& j, const char* key) {
  std::vector<double> out;
  if (!j.contains(key)) return out;
  if (!j.at(key).is_array()) bad(std::string(key) + " must be an array of numbers");
  for (const auto& x : j.at(key)) {
    if (!x.is_number()) bad(std::string(key) + " must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace

Worldline WorldlineConfig::build(int m) const {
  if (kind == "time_axis") return Worldline::time_axis(m);
  if (kind == "straight_line") {
    if (beta.size() != static_cast<std::size_t>(m))
      bad("worldline.beta needs exactly m components");
    double b2 = 0.0;
    for (double b : beta) b2 += b * b;
    if (!(std::sqrt(b2) < 1.0))
      bad("worldline.beta has |beta| >= 1; class-T certification requires a time-like "
          "worldline with a uniform speed bound < 1");
    SpacetimeVector base_v(m);
    if (!base.empty()) {
      if (base.size() != static_cast<std::size_t>(m + 1)) bad("worldline.base needs m+1 components");
      base_v = SpacetimeVector(m, {base.data(), base.size()});
    }
    return Worldline::straight_line({beta.data(), beta.size()}, base_v);
  }
  bad("worldline.kind must be time_axis or straight_line");
}

PoincareTransform TransformStep::build(int m) const {
  if (type == "boost") {
    if (direction.size() != static_cast<std::size_t>(m)) bad("boost.direction needs m components");
    double n2 = 0.0;
    for (double d : direction) n2 += d * d;
    if (std::abs(n2 - 1.0) > 1e-9) bad("boost.direction must be a unit vector");
    std::array<double, kMaxSpatialDim> dir{};
    const double n = std::sqrt(n2);
    for (std::size_t k = 0; k < direction.size(); ++k) dir[k] = direction[k] / n;
    return boost(UnitDirection(m, {dir.data(), direction.size()}), rapidity);
  }
  if (type == "rotation") {
    if (m < 2) bad("rotation requires m >= 2");
    if (!(axis_i >= 1 && axis_j <= m && axis_i < axis_j)) bad("rotation needs 1 <= i < j <= m");
    return rotation(m, axis_i, axis_j, angle);
  }
  if (type == "translation") {
    if (offset.size() != static_cast<std::size_t>(m + 1)) bad("translation.a needs m+1 components");
    return SpacetimeVector(m, {offset.data(), offset.size()});
  }
  bad("transform.type must be boost, rotation or translation");
}

int QuadratureConfig::resolved_sphere_resolution(int m) const {
  if (sphere_resolution > 0) return sphere_resolution;
  switch (m) {
    case 1: return 1;
    case 2: return 512;
    default: return 32;
  }
}

RunConfig RunConfig::defaults(int m) {
  RunConfig c;
  c.m = checked_spatial_dim(m);
  c.seed = 20260801;
  c.initial_data_source = m == 1 ? "bump(t)" : "bump(t)*(1+0.5*w1)";
  c.support = std::array<double, 2>{-1.0, 1.0};
  c.worldline.kind = "time_axis";
  c.inner_product_worldlines.push_back(c.worldline);
  WorldlineConfig line;
  line.kind = "straight_line";
  line.beta.assign(m, 0.0);
  line.beta[0] = 0.5;
  c.inner_product_worldlines.push_back(line);
  c.propagate.grid.assign(m, GridAxis{-3.0, 3.0, m == 3 ? 21 : 61});
  c.propagate.direction.assign(m, 0.0);
  c.propagate.direction[0] = 1.0;
  if (m == 3) {
    c.quadrature.s_steps = 800;
    c.quadrature.t_steps = 1000;
  }
  TransformStep step;
  step.type = "boost";
  step.direction.assign(m, 0.0);
  step.direction[0] = 1.0;
  step.rapidity = 0.8;
  c.transforms.push_back(step);
  return c;
}

RunConfig RunConfig::from_json(const ordered_json& j) {
  if (!j.is_object()) bad("top level must be an object");
  if (!j.contains("m")) bad("missing required key 'm'");
  const int m_in = get_int(j, "m", 2);
  if (m_in < 1 || m_in > 3) bad("m must be 1, 2 or 3");

  RunConfig c = defaults(m_in);

  if (j.contains("seed")) {
    if (!j.at("seed").is_number_integer()) bad("seed must be an integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }

  if (j.contains("initial_data")) {
    const auto& d = j.at("initial_data");
    if (d.is_string()) {
      c.initial_data_source = d.get<std::string>();
      c.support.reset();
    } else if (d.is_object()) {
      if (!d.contains("expression") || !d.at("expression").is_string())
        bad("initial_data.expression must be a string");
      c.initial_data_source = d.at("expression").get<std::string>();
      c.support.reset();
      if (d.contains("support")) {
        const auto s = get_vector(d, "support");
        if (s.size() != 2 || !(s[0] < s[1])) bad("initial_data.support must be [lo, hi] with lo < hi");
        c.support = std::array<double, 2>{s[0], s[1]};
      }
    } else {
      bad("initial_data must be a string or an object");
    }
  }

  if (j.contains("worldline")) {
    const auto& w = j.at("worldline");
    if (!w.is_object() || !w.contains("kind")) bad("worldline needs a kind");
    c.worldline.kind = w.at("kind").get<std::string>();
    c.worldline.beta = get_vector(w, "beta");
    c.worldline.base = get_vector(w, "base");
    c.worldline.build(c.m);  // validate now
  }

  if (j.contains("quadrature")) {
    const auto& q = j.at("quadrature");
    c.quadrature.sphere_resolution = get_int(q, "sphere_resolution", c.quadrature.sphere_resolution);
    c.quadrature.s_steps = get_int(q, "s_steps", c.quadrature.s_steps);
    c.quadrature.loop_steps = get_int(q, "loop_steps", c.quadrature.loop_steps);
    c.quadrature.t_steps = get_int(q, "t_steps", c.quadrature.t_steps);
    for (const char* key : {"s_window", "t_window"}) {
      if (q.contains(key)) {
        const auto v = get_vector(q, key);
        if (v.size() != 2 || !(v[0] < v[1])) bad(std::string("quadrature.") + key + " must be [lo, hi]");
        (key[0] == 's' ? c.quadrature.s_window : c.quadrature.t_window) = {v[0], v[1]};
      }
    }
    if (c.quadrature.sphere_resolution < 0 || c.quadrature.s_steps < 2 ||
        c.quadrature.loop_steps < 2 || c.quadrature.t_steps < 2)
      bad("quadrature resolutions must be positive");
  }

  if (j.contains("samples")) {
    const auto& s = j.at("samples");
    c.samples.group = get_int(s, "group", c.samples.group);
    c.samples.jacobian = get_int(s, "jacobian", c.samples.jacobian);
    c.samples.mc = static_cast<std::int64_t>(get_number(s, "mc", static_cast<double>(c.samples.mc)));
    c.samples.field_points = get_int(s, "field_points", c.samples.field_points);
    c.samples.rapidity = get_number(s, "rapidity", c.samples.rapidity);
    if (c.samples.group < 1 || c.samples.jacobian < 1 || c.samples.mc < 1 ||
        c.samples.field_points < 1 || c.samples.rapidity < 0)
      bad("sample counts must be positive");
  }

  if (j.contains("transforms")) {
    if (!j.at("transforms").is_array()) bad("transforms must be an array");
    c.transforms.clear();
    for (const auto& t : j.at("transforms")) {
      TransformStep step;
      if (!t.is_object() || !t.contains("type")) bad("each transform needs a type");
      step.type = t.at("type").get<std::string>();
      step.direction = get_vector(t, "direction");
      step.rapidity = get_number(t, "rapidity", 0.0);
      step.axis_i = get_int(t, "i", 1);
      step.axis_j = get_int(t, "j", 2);
      step.angle = get_number(t, "angle", 0.0);
      step.offset = get_vector(t, "a");
      step.build(c.m);  // validate now
      c.transforms.push_back(step);
    }
  }

  if (j.contains("tolerances")) {
    if (!j.at("tolerances").is_object()) bad("tolerances must be an object");
    for (const auto& [key, value] : j.at("tolerances").items()) {
      if (!value.is_number()) bad("tolerances entries must be numbers");
      const double tol = value.get<double>();
      if (!(tol > 0.0)) bad("tolerances must be > 0");
      c.tolerance_overrides[key] = tol;
    }
  }

  if (j.contains("tolerance_scale")) {
    c.tolerance_scale = get_number(j, "tolerance_scale", 1.0);
    if (!(c.tolerance_scale > 0.0)) bad("tolerance_scale must be > 0");
  }

  if (j.contains("propagate")) {
    const auto& p = j.at("propagate");
    c.propagate.x0 = get_number(p, "x0", c.propagate.x0);
    if (p.contains("grid")) {
      if (!p.at("grid").is_array()) bad("propagate.grid must be an array");
      c.propagate.grid.clear();
      for (const auto& g : p.at("grid")) {
        GridAxis ax;
        ax.min = get_number(g, "min", ax.min);
        ax.max = get_number(g, "max", ax.max);
        ax.count = get_int(g, "count", ax.count);
        if (ax.count < 1 || (ax.count > 1 && !(ax.min < ax.max))) bad("bad propagate.grid axis");
        c.propagate.grid.push_back(ax);
      }
    }
    if (c.propagate.grid.size() != static_cast<std::size_t>(c.m))
      bad("propagate.grid needs one axis per spatial dimension");
    if (p.contains("mode")) c.propagate.mode = p.at("mode").get<std::string>();
    if (c.propagate.mode != "intensity" && c.propagate.mode != "fixed_direction")
      bad("propagate.mode must be intensity or fixed_direction");
    if (p.contains("direction")) c.propagate.direction = get_vector(p, "direction");
    if (c.propagate.mode == "fixed_direction") {
      if (c.propagate.direction.size() != static_cast<std::size_t>(c.m))
        bad("propagate.direction needs m components");
      double n2 = 0.0;
      for (double d : c.propagate.direction) n2 += d * d;
      if (std::abs(n2 - 1.0) > 1e-9) bad("propagate.direction must be a unit vector");
    }
  }

  if (j.contains("inner_product")) {
    const auto& ip = j.at("inner_product");
    if (!ip.is_object() || !ip.contains("worldlines") || !ip.at("worldlines").is_array())
      bad("inner_product.worldlines must be an array");
    c.inner_product_worldlines.clear();
    for (const auto& w : ip.at("worldlines")) {
      WorldlineConfig wc;
      if (!w.is_object() || !w.contains("kind")) bad("inner_product worldline needs a kind");
      wc.kind = w.at("kind").get<std::string>();
      wc.beta = get_vector(w, "beta");
      wc.base = get_vector(w, "base");
      wc.build(c.m);  // validate now
      c.inner_product_worldlines.push_back(wc);
    }
  }

  if (j.contains("output")) {
    const auto& o = j.at("output");
    if (o.contains("report")) c.report_path = o.at("report").get<std::string>();
    if (o.contains("csv")) c.csv_path = o.at("csv").get<std::string>();
  }

  // Expression must parse for the declared m.
  try {
    Expression::parse(c.initial_data_source, c.m);
  } catch (const ParseError& e) {
    bad(std::string("initial_data does not parse: ") + e.what());
  }
  return c;
}

RunConfig RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open config file: " + path);
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    bad(std::string("config is not valid JSON: ") + e.what());
  }
  return from_json(j);
}

Expression RunConfig::parsed_initial_data() const {
  return Expression::parse(initial_data_source, m);
}

InitialData RunConfig::initial_data() const {
  const Expression e = parsed_initial_data();
  if (support) return InitialData::from_expression(e, *support);
  return InitialData::from_expression(e);
}

ordered_json RunConfig::echo() const {
  ordered_json j;
  j["m"] = m;
  j["seed"] = seed;
  ordered_json data;
  data["expression"] = initial_data_source;
  if (support) data["support"] = {(*support)[0], (*support)[1]};
  j["initial_data"] = data;
  ordered_json w;
  w["kind"] = worldline.kind;
  if (!worldline.beta.empty()) w["beta"] = worldline.beta;
  if (!worldline.base.empty()) w["base"] = worldline.base;
  j["worldline"] = w;
  j["quadrature"] = {{"sphere_resolution", quadrature.resolved_sphere_resolution(m)},
                     {"s_steps", quadrature.s_steps},
                     {"loop_steps", quadrature.loop_steps},
                     {"t_steps", quadrature.t_steps},
                     {"s_window", {quadrature.s_window[0], quadrature.s_window[1]}},
                     {"t_window", {quadrature.t_window[0], quadrature.t_window[1]}}};
  j["samples"] = {{"group", samples.group},
                  {"jacobian", samples.jacobian},
                  {"mc", samples.mc},
                  {"field_points", samples.field_points},
                  {"rapidity", samples.rapidity}};
  ordered_json ts = ordered_json::array();
  for (const auto& t : transforms) {
    ordered_json o;
    o["type"] = t.type;
    if (t.type == "boost") {
      o["direction"] = t.direction;
      o["rapidity"] = t.rapidity;
    } else if (t.type == "rotation") {
      o["i"] = t.axis_i;
      o["j"] = t.axis_j;
      o["angle"] = t.angle;
    } else {
      o["a"] = t.offset;
    }
    ts.push_back(o);
  }
  j["transforms"] = ts;
  if (!tolerance_overrides.empty()) {
    ordered_json tj;
    for (const auto& [k, v] : tolerance_overrides) tj[k] = v;
    j["tolerances"] = tj;
  }
  j["tolerance_scale"] = tolerance_scale;
  ordered_json grid = ordered_json::array();
  for (const auto& g : propagate.grid)
    grid.push_back({{"min", g.min}, {"max", g.max}, {"count", g.count}});
  j["propagate"] = {{"x0", propagate.x0}, {"grid", grid}, {"mode", propagate.mode},
                    {"direction", propagate.direction}};
  ordered_json ws = ordered_json::array();
  for (const auto& wc : inner_product_worldlines) {
    ordered_json o;
    o["kind"] = wc.kind;
    if (!wc.beta.empty()) o["beta"] = wc.beta;
    if (!wc.base.empty()) o["base"] = wc.base;
    ws.push_back(o);
  }
  j["inner_product"] = {{"worldlines", ws}};
  return j;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex;
  for (int k = 15; k >= 0; --k) os << ((h >> (4 * k)) & 0xf);
  return os.str();
}

std::string RunConfig::hash() const { return fnv1a_hex(echo().dump()); }

}  // namespace kairon
