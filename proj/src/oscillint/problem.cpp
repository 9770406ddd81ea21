#include "oscillint/problem.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <regex>
#include <sstream>

#include "oscillint/error.hpp"
#include "oscillint/json_format.hpp"

namespace oscillint {

namespace {

using Params = std::map<std::string, double>;

std::string child(const std::string& ptr, const std::string& key) {
  std::string k;
  for (char c : key) {
    if (c == '~')
      k += "~0";
    else if (c == '/')
      k += "~1";
    else
      k += c;
  }
  return ptr + "/" + k;
}

std::string child(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

void require_object(const Json& j, const std::string& ptr) {
  if (!j.is_object()) throw SchemaError(ptr, "expected an object");
}

void check_keys(const Json& j, const std::string& ptr, std::initializer_list<const char*> allowed) {
  require_object(j, ptr);
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw SchemaError(child(ptr, k), "unknown key");
  }
}

const Json& need(const Json& j, const std::string& ptr, const char* key) {
  if (!j.contains(key)) throw SchemaError(child(ptr, key), "missing required key");
  return j.at(key);
}

double real_in(const Json& j, const std::string& ptr, double lo, double hi, bool open_lo = false) {
  const double v = parse_real(j, ptr);
  if (!(open_lo ? v > lo : v >= lo) || !(v <= hi)) {
    std::ostringstream os;
    os << "must lie in " << (open_lo ? "(" : "[") << lo << ", " << hi << "]";
    throw SchemaError(ptr, os.str());
  }
  return v;
}

int int_in(const Json& j, const std::string& ptr, int lo, int hi) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) throw SchemaError(ptr, "expected an integer");
  const auto v = j.get<long long>();
  if (v < lo || v > hi)
    throw SchemaError(ptr, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(v);
}

std::vector<double> real_array(const Json& j, const std::string& ptr) {
  if (!j.is_array()) throw SchemaError(ptr, "expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_real(j[i], child(ptr, i)));
  return out;
}

// Canonical expression: explicit defaults, validated structure. Numbers keep
// their original spelling so "2*pi" survives a round trip.
Json canon_expr(const Json& j, const std::string& ptr, const Params& params) {
  if (j.is_number() || j.is_string()) {
    parse_real(j, ptr);
    return Json{{"kind", "const"}, {"value", j}};
  }
  require_object(j, ptr);
  const std::string kind = [&] {
    const Json& k = need(j, ptr, "kind");
    if (!k.is_string()) throw SchemaError(child(ptr, "kind"), "expected a string");
    return k.get<std::string>();
  }();
  Json out{{"kind", kind}};
  if (kind == "const") {
    check_keys(j, ptr, {"kind", "value"});
    parse_real(need(j, ptr, "value"), child(ptr, "value"));
    out["value"] = j.at("value");
  } else if (kind == "sin" || kind == "cos") {
    check_keys(j, ptr, {"kind", "amp", "freq", "phase"});
    parse_real(need(j, ptr, "amp"), child(ptr, "amp"));
    out["amp"] = j.at("amp");
    out["freq"] = j.contains("freq") ? j.at("freq") : Json(1.0);
    out["phase"] = j.contains("phase") ? j.at("phase") : Json(0.0);
    parse_real(out["freq"], child(ptr, "freq"));
    parse_real(out["phase"], child(ptr, "phase"));
  } else if (kind == "poly") {
    check_keys(j, ptr, {"kind", "coeffs"});
    const auto c = real_array(need(j, ptr, "coeffs"), child(ptr, "coeffs"));
    if (c.empty()) throw SchemaError(child(ptr, "coeffs"), "needs at least one coefficient");
    out["coeffs"] = j.at("coeffs");
  } else if (kind == "pw_const") {
    check_keys(j, ptr, {"kind", "breaks", "values", "period"});
    const auto br = real_array(need(j, ptr, "breaks"), child(ptr, "breaks"));
    const auto va = real_array(need(j, ptr, "values"), child(ptr, "values"));
    if (va.size() != br.size() + 1) throw SchemaError(child(ptr, "values"), "needs one more entry than breaks");
    for (std::size_t i = 1; i < br.size(); ++i)
      if (!(br[i] > br[i - 1])) throw SchemaError(child(child(ptr, "breaks"), i), "breaks must increase");
    out["breaks"] = j.at("breaks");
    out["values"] = j.at("values");
    if (j.contains("period")) {
      real_in(j.at("period"), child(ptr, "period"), 0.0, INFINITY, true);
      out["period"] = j.at("period");
    }
  } else if (kind == "sum" || kind == "prod" || kind == "quot") {
    check_keys(j, ptr, {"kind", "args"});
    const Json& args = need(j, ptr, "args");
    const std::string ap = child(ptr, "args");
    if (!args.is_array() || args.empty()) throw SchemaError(ap, "expected a non-empty array");
    if (kind == "quot" && args.size() != 2) throw SchemaError(ap, "quot takes exactly two args");
    Json list = Json::array();
    for (std::size_t i = 0; i < args.size(); ++i) list.push_back(canon_expr(args[i], child(ap, i), params));
    out["args"] = list;
  } else if (kind == "scale") {
    check_keys(j, ptr, {"kind", "factor", "arg"});
    parse_real(need(j, ptr, "factor"), child(ptr, "factor"));
    out["factor"] = j.at("factor");
    out["arg"] = canon_expr(need(j, ptr, "arg"), child(ptr, "arg"), params);
  } else if (kind == "param") {
    check_keys(j, ptr, {"kind", "name"});
    const Json& n = need(j, ptr, "name");
    if (!n.is_string()) throw SchemaError(child(ptr, "name"), "expected a string");
    if (!params.count(n.get<std::string>())) throw SchemaError(child(ptr, "name"), "undeclared parameter");
    out["name"] = n;
  } else {
    throw SchemaError(child(ptr, "kind"), "unknown expression kind '" + kind + "'");
  }
  return out;
}

Expr build_expr(const Json& j, const std::string& ptr, const Params& params) {
  const std::string kind = j.at("kind").get<std::string>();
  const auto r = [&](const char* key) { return parse_real(j.at(key), child(ptr, key)); };
  const auto arr = [&](const char* key) { return real_array(j.at(key), child(ptr, key)); };
  if (kind == "const") return Expr::constant(r("value"));
  if (kind == "sin") return Expr::sine(r("amp"), r("freq"), r("phase"));
  if (kind == "cos") return Expr::cosine(r("amp"), r("freq"), r("phase"));
  if (kind == "poly") return Expr::poly(arr("coeffs"));
  if (kind == "pw_const") {
    std::optional<double> period;
    if (j.contains("period")) period = r("period");
    return Expr::pw_const(arr("breaks"), arr("values"), period);
  }
  if (kind == "param") return Expr::constant(params.at(j.at("name").get<std::string>()));
  if (kind == "scale") return Expr::scale(r("factor"), build_expr(j.at("arg"), child(ptr, "arg"), params));
  std::vector<Expr> args;
  const std::string ap = child(ptr, "args");
  for (std::size_t i = 0; i < j.at("args").size(); ++i) args.push_back(build_expr(j.at("args")[i], child(ap, i), params));
  if (kind == "sum") return Expr::sum(std::move(args));
  if (kind == "prod") return Expr::prod(std::move(args));
  return Expr::quot(args[0], args[1]);
}

Json canon_equation(const Json& j, const std::string& ptr, const Params& params) {
  check_keys(j, ptr, {"a", "b", "f", "t_start", "period"});
  Json out;
  out["a"] = canon_expr(need(j, ptr, "a"), child(ptr, "a"), params);
  out["b"] = canon_expr(need(j, ptr, "b"), child(ptr, "b"), params);
  if (j.contains("f")) out["f"] = canon_expr(j.at("f"), child(ptr, "f"), params);
  out["t_start"] = j.contains("t_start") ? j.at("t_start") : Json(0.0);
  real_in(out["t_start"], child(ptr, "t_start"), 0.0, INFINITY);
  if (j.contains("period")) {
    const double w = parse_real(j.at("period"), child(ptr, "period"));
    if (!(w > 0.0) || !std::isfinite(w)) throw SchemaError(child(ptr, "period"), "must be positive");
    out["period"] = j.at("period");
  }
  return out;
}

EquationSpec build_equation(const Json& j, const std::string& ptr, const Params& params, const std::string& label) {
  EquationSpec eq;
  try {
    eq.a = build_expr(j.at("a"), child(ptr, "a"), params);
    eq.b = build_expr(j.at("b"), child(ptr, "b"), params);
    if (j.contains("f")) eq.f = build_expr(j.at("f"), child(ptr, "f"), params);
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(ptr, e.what());
  }
  eq.t_start = parse_real(j.at("t_start"), child(ptr, "t_start"));
  if (j.contains("period")) eq.period = parse_real(j.at("period"), child(ptr, "period"));
  eq.label = label;
  try {
    eq.validate();
  } catch (const Error& e) {
    throw SchemaError(j.contains("period") ? child(ptr, "period") : ptr, e.what());
  }
  return eq;
}

Params merged(const Params& base, const Params& overrides) {
  Params p = base;
  for (const auto& [k, v] : overrides) {
    if (!p.count(k)) throw Error(ErrorCode::InvalidArgument, "unknown parameter '" + k + "'");
    p[k] = v;
  }
  return p;
}

RunConfig parse_config(const Json& j, const std::string& ptr) {
  check_keys(j, ptr,
             {"tol", "horizon", "grid", "search_T", "margin", "sample_density", "check_density", "t0", "nm_restarts",
              "kmax", "fan", "guard_margin", "floquet_horizon", "s_per_unit", "scan_T"});
  RunConfig c;
  const auto has = [&](const char* k) { return j.contains(k); };
  const auto at = [&](const char* k) -> const Json& { return j.at(k); };
  const auto p = [&](const char* k) { return child(ptr, k); };
  if (has("tol")) c.tol = real_in(at("tol"), p("tol"), 1e-14, 1e-4);
  if (has("horizon")) c.horizon = real_in(at("horizon"), p("horizon"), 0.0, 1e6, true);
  if (has("grid")) c.grid = int_in(at("grid"), p("grid"), 20, 100000);
  if (has("search_T")) c.search_T = real_in(at("search_T"), p("search_T"), 0.0, 1e6, true);
  if (has("margin")) c.margin = real_in(at("margin"), p("margin"), 0.0, 1e-3);
  if (has("sample_density")) c.sample_density = real_in(at("sample_density"), p("sample_density"), 100.0, 1e7);
  if (has("check_density")) c.check_density = real_in(at("check_density"), p("check_density"), 10.0, 1e5);
  if (has("t0")) c.t0 = real_in(at("t0"), p("t0"), 0.0, 1e6);
  if (has("nm_restarts")) c.nm_restarts = int_in(at("nm_restarts"), p("nm_restarts"), 1, 100);
  if (has("kmax")) c.kmax = int_in(at("kmax"), p("kmax"), 1, 64);
  if (has("fan")) c.fan = int_in(at("fan"), p("fan"), 4, 1024);
  if (has("guard_margin")) c.guard_margin = real_in(at("guard_margin"), p("guard_margin"), 0.0, 0.5, true);
  if (has("floquet_horizon")) c.floquet_horizon = real_in(at("floquet_horizon"), p("floquet_horizon"), 0.0, 1e6);
  if (has("s_per_unit")) c.s_per_unit = int_in(at("s_per_unit"), p("s_per_unit"), 10, 10000);
  if (has("scan_T")) c.scan_T = real_in(at("scan_T"), p("scan_T"), 0.0, 1e5, true);
  if (c.guard_margin >= 0.5) throw SchemaError(p("guard_margin"), "must lie in (0, 0.5)");
  return c;
}

Json config_json(const RunConfig& c) {
  return Json{{"tol", c.tol},
              {"horizon", c.horizon},
              {"grid", c.grid},
              {"search_T", c.search_T},
              {"margin", c.margin},
              {"sample_density", c.sample_density},
              {"check_density", c.check_density},
              {"t0", c.t0},
              {"nm_restarts", c.nm_restarts},
              {"kmax", c.kmax},
              {"fan", c.fan},
              {"guard_margin", c.guard_margin},
              {"floquet_horizon", c.floquet_horizon},
              {"s_per_unit", c.s_per_unit},
              {"scan_T", c.scan_T}};
}

}  // namespace

double parse_real(const Json& node, const std::string& pointer) {
  if (node.is_number()) {
    const double v = node.get<double>();
    if (!std::isfinite(v)) throw SchemaError(pointer, "must be finite");
    return v;
  }
  if (!node.is_string()) throw SchemaError(pointer, "expected a number");
  std::string s;
  for (char c : node.get<std::string>())
    if (c != ' ') s += c;
  static const std::regex pi_re(R"(^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?(\*)?pi(?:/((?:\d+\.?\d*|\.\d+)))?$)");
  static const std::regex sign_re(R"(^([+-])pi(?:/((?:\d+\.?\d*|\.\d+)))?$)");
  std::smatch m;
  double v = 0.0;
  if (std::regex_match(s, m, pi_re) && !(m[2].matched && !m[1].matched)) {
    v = (m[1].matched ? std::stod(m[1].str()) : 1.0) * std::numbers::pi;
    if (m[3].matched) v /= std::stod(m[3].str());
  } else if (std::regex_match(s, m, sign_re)) {
    v = (m[1].str() == "-" ? -1.0 : 1.0) * std::numbers::pi;
    if (m[2].matched) v /= std::stod(m[2].str());
  } else {
    throw SchemaError(pointer, "expected a number or a multiple of pi such as \"2*pi\"");
  }
  if (!std::isfinite(v)) throw SchemaError(pointer, "must be finite");
  return v;
}

CertConfig RunConfig::cert() const {
  CertConfig c;
  c.tol = tol;
  c.horizon = horizon;
  c.search_T = search_T;
  c.margin = margin;
  c.sample_density = sample_density;
  c.check_density = check_density;
  c.t0 = t0;
  c.nm_restarts = nm_restarts;
  return c;
}

FloquetConfig RunConfig::floquet() const {
  FloquetConfig c;
  c.tol = tol;
  c.horizon = floquet_horizon;
  c.fan = fan;
  c.kmax = kmax;
  c.guard_margin = guard_margin;
  c.sample_density = sample_density;
  return c;
}

double SweepSpec::value(int i) const {
  if (steps == 1) return from;
  return from + (to - from) * static_cast<double>(i) / (steps - 1);
}

EquationSpec ProblemFile::build(const Params& overrides) const {
  return build_equation(equation, "/equation", merged(params, overrides), label);
}

EquationSpec ProblemFile::build_dominated(const Params& overrides) const {
  if (!comparison) throw Error(ErrorCode::InvalidArgument, "problem has no comparison section");
  return build_equation(comparison->dominated, "/comparison/dominated", merged(params, overrides), label);
}

Expr ProblemFile::build_witness(const Params& overrides) const {
  if (!witness_u) throw Error(ErrorCode::InvalidArgument, "problem has no witness_u section");
  return build_expr(witness_u->u, "/witness_u/u", merged(params, overrides));
}

ProblemFile parse_problem_json(const Json& doc) {
  check_keys(doc, "", {"label", "params", "equation", "config", "simulate", "sweep", "witness_u", "comparison"});
  ProblemFile p;
  if (doc.contains("label")) {
    if (!doc.at("label").is_string()) throw SchemaError("/label", "expected a string");
    p.label = doc.at("label").get<std::string>();
  }
  if (doc.contains("params")) {
    const Json& ps = doc.at("params");
    require_object(ps, "/params");
    for (const auto& [k, v] : ps.items()) {
      if (k.empty()) throw SchemaError("/params/", "parameter names must be non-empty");
      p.params[k] = parse_real(v, child("/params", k));
    }
  }
  p.equation = canon_equation(need(doc, "", "equation"), "/equation", p.params);
  if (doc.contains("config")) p.config = parse_config(doc.at("config"), "/config");
  const EquationSpec eq = p.build();

  if (doc.contains("simulate")) {
    const Json& s = doc.at("simulate");
    check_keys(s, "/simulate", {"x0", "v0", "T", "dt"});
    SimulateSpec sim;
    if (s.contains("x0")) sim.x0 = parse_real(s.at("x0"), "/simulate/x0");
    if (s.contains("v0")) sim.v0 = parse_real(s.at("v0"), "/simulate/v0");
    if (s.contains("T")) sim.T = real_in(s.at("T"), "/simulate/T", eq.t_start, 1e7, true);
    if (s.contains("dt")) sim.dt = real_in(s.at("dt"), "/simulate/dt", 0.0, 1e6, true);
    p.simulate = sim;
  }
  if (doc.contains("sweep")) {
    const Json& s = doc.at("sweep");
    check_keys(s, "/sweep", {"param", "from", "to", "steps", "criteria"});
    SweepSpec sw;
    const Json& name = need(s, "/sweep", "param");
    if (!name.is_string()) throw SchemaError("/sweep/param", "expected a string");
    sw.param = name.get<std::string>();
    if (!p.params.count(sw.param)) throw SchemaError("/sweep/param", "undeclared parameter");
    sw.from = parse_real(need(s, "/sweep", "from"), "/sweep/from");
    sw.to = parse_real(need(s, "/sweep", "to"), "/sweep/to");
    sw.steps = int_in(need(s, "/sweep", "steps"), "/sweep/steps", 1, 100000);
    if (s.contains("criteria")) {
      const Json& cs = s.at("criteria");
      if (!cs.is_array()) throw SchemaError("/sweep/criteria", "expected an array");
      const auto& names = criterion_families();
      for (std::size_t i = 0; i < cs.size(); ++i) {
        const std::string ptr = child("/sweep/criteria", i);
        if (!cs[i].is_string()) throw SchemaError(ptr, "expected a string");
        const std::string n = cs[i].get<std::string>();
        if (std::find(names.begin(), names.end(), n) == names.end()) throw SchemaError(ptr, "unknown criterion");
        sw.criteria.push_back(n);
      }
    }
    p.sweep = sw;
  }
  if (doc.contains("witness_u")) {
    const Json& s = doc.at("witness_u");
    check_keys(s, "/witness_u", {"u", "horizon"});
    WitnessSpec w;
    w.u = canon_expr(need(s, "/witness_u", "u"), "/witness_u/u", p.params);
    w.horizon = s.contains("horizon") ? real_in(s.at("horizon"), "/witness_u/horizon", 0.0, 1e6, true)
                                      : p.config.horizon;
    p.witness_u = w;
    try {
      p.build_witness();
    } catch (const SchemaError&) {
      throw;
    } catch (const Error& e) {
      throw SchemaError("/witness_u/u", e.what());
    }
  }
  if (doc.contains("comparison")) {
    const Json& s = doc.at("comparison");
    check_keys(s, "/comparison", {"dominated", "T", "grid"});
    ComparisonSpec c;
    c.dominated = canon_equation(need(s, "/comparison", "dominated"), "/comparison/dominated", p.params);
    c.T = s.contains("T") ? real_in(s.at("T"), "/comparison/T", 0.0, 1e5, true) : p.config.scan_T;
    c.grid = s.contains("grid") ? int_in(s.at("grid"), "/comparison/grid", 1, 100000) : p.config.grid;
    p.comparison = c;
    const EquationSpec d = p.build_dominated();
    if (d.t_start != eq.t_start) throw SchemaError("/comparison/dominated/t_start", "must match the equation");
  }
  return p;
}

ProblemFile parse_problem_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
  return parse_problem_json(doc);
}

ProblemFile parse_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_problem_text(os.str());
}

Json to_json(const ProblemFile& p) {
  Json doc;
  if (!p.label.empty()) doc["label"] = p.label;
  if (!p.params.empty()) {
    Json ps = Json::object();
    for (const auto& [k, v] : p.params) ps[k] = v;
    doc["params"] = ps;
  }
  doc["equation"] = p.equation;
  doc["config"] = config_json(p.config);
  if (p.simulate)
    doc["simulate"] = Json{{"x0", p.simulate->x0}, {"v0", p.simulate->v0}, {"T", p.simulate->T}, {"dt", p.simulate->dt}};
  if (p.sweep)
    doc["sweep"] =
        Json{{"param", p.sweep->param},
             {"from", p.sweep->from},
             {"to", p.sweep->to},
             {"steps", p.sweep->steps},
             {"criteria", p.sweep->criteria}};
  if (p.witness_u) doc["witness_u"] = Json{{"u", p.witness_u->u}, {"horizon", p.witness_u->horizon}};
  if (p.comparison)
    doc["comparison"] =
        Json{{"dominated", p.comparison->dominated}, {"T", p.comparison->T}, {"grid", p.comparison->grid}};
  return doc;
}

std::string serialize(const ProblemFile& p) { return format_json(to_json(p)); }

}  // namespace oscillint
