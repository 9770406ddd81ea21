#include "oscillint/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oscillint/error.hpp"
#include "oscillint/json_format.hpp"
#include "oscillint/parallel.hpp"

namespace oscillint {

Json certificate_json(const Certificate& c) {
  Json w = Json::object();
  for (const auto& [k, v] : c.witnesses) w[k] = v;
  return Json{{"criterion", c.criterion},
              {"verdict", to_string(c.verdict)},
              {"claim", to_string(c.claim)},
              {"witnesses", w},
              {"margin", c.margin},
              {"window", Json{{"lo", c.window.lo}, {"hi", c.window.hi}, {"kind", c.window.kind}}},
              {"rigorous", c.rigorous},
              {"condition", c.condition},
              {"note", c.note}};
}

Json certify_json(const CertifyReport& r, const std::string& label) {
  Json certs = Json::array();
  for (const auto& c : r.certificates) certs.push_back(certificate_json(c));
  return Json{{"label", label},
              {"certificates", certs},
              {"summary", Json{{"claim", to_string(r.summary)}, {"criteria", r.summary_criteria}}}};
}

Json floquet_json(const FloquetResult& r) {
  Json lam = Json::array();
  for (const auto& m : {r.lambda.first, r.lambda.second})
    lam.push_back(Json{{"mod", m.mod()}, {"arg", m.arg()}, {"re", m.re}, {"im", m.im}});
  Json zone_k = r.zone.k ? Json(*r.zone.k) : Json(nullptr);
  return Json{{"omega", r.omega},
              {"trace", r.trace},
              {"W_direct", r.W_direct},
              {"W_liouville", r.W_liouville},
              {"lambda", lam},
              {"real_multipliers", r.lambda.real},
              {"classification", to_string(r.classification)},
              {"int_a", r.int_a},
              {"monodromy", Json{{"x1", r.x1}, {"x2", r.x2}, {"x1p", r.x1p}, {"x2p", r.x2p}}},
              {"guard",
               Json{{"zone_k", zone_k},
                    {"zone_applicable", r.zone.applicable},
                    {"near_boundary", r.zone.near_boundary},
                    {"P", r.P},
                    {"Q", r.Q},
                    {"min_gap", r.spacing.min_gap},
                    {"max_gap", r.spacing.max_gap},
                    {"gaps", r.spacing.gaps},
                    {"oscillatory", r.spacing.oscillatory},
                    {"max_growth", r.spacing.max_growth},
                    {"analytic", r.analytic_guard},
                    {"empirical", r.empirical_guard}}},
              {"note", r.note}};
}

Json decay_json(const DecayEstimate& d) {
  return Json{{"rate", d.rate},
              {"K", d.K},
              {"residual", d.residual},
              {"horizon", d.horizon},
              {"method", d.method}};
}

Json comparison_json(const ComparisonResult& r) {
  const auto part = [](const ComparisonPart& p) {
    return Json{{"worst", p.worst}, {"t", p.t}, {"s", p.s}};
  };
  Json out{{"status", to_string(r.status)}, {"worst", r.worst}, {"note", r.note}};
  if (r.status != ComparisonStatus::Inapplicable) {
    out["x1_minus_v1"] = part(r.x1);
    out["x2_minus_v2"] = part(r.x2);
    out["X_minus_V"] = part(r.X);
    out["Y_minus_Y1"] = part(r.Y);
    out["forced_checked"] = r.forced_checked;
    if (r.forced_checked) out["v_minus_x"] = part(r.forced);
  }
  return out;
}

std::string trajectory_csv(const Trajectory& tr, double t0, double T, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
  std::ostringstream os;
  os << "t,x,xdot\n";
  const auto n = static_cast<long long>(std::floor((T - t0) / dt + 1e-9));
  for (long long k = 0; k <= n; ++k) {
    const double t = std::min(t0 + static_cast<double>(k) * dt, T);
    const auto y = tr.state(t);
    os << format_real(t) << ',' << format_real(y[0]) << ',' << format_real(y[1]) << '\n';
  }
  if (t0 + static_cast<double>(n) * dt < T - 1e-12 * std::max(1.0, std::abs(T))) {
    const auto y = tr.state(T);
    os << format_real(T) << ',' << format_real(y[0]) << ',' << format_real(y[1]) << '\n';
  }
  return os.str();
}

Json zeros_json(const Trajectory& tr) {
  Json out = Json::array();
  for (const auto& z : tr.zeros()) out.push_back(Json{{"t", z.t}, {"tangential", z.tangential}});
  return out;
}

CommandResult run_certify(const ProblemFile& p) {
  const EquationSpec eq = p.build();
  CertifyReport r = certify_all(eq, p.config.cert());
  if (p.witness_u) {
    const auto c = cert_witness_u(eq, p.build_witness(), p.witness_u->horizon, p.config.cert());
    r.certificates.push_back(c);
    if (c.passed() && r.summary == Claim::None) {
      r.summary = c.claim;
      r.summary_criteria = {c.criterion};
    }
  }
  CommandResult out;
  out.output = format_json(certify_json(r, p.label));
  const bool all_inapplicable = std::all_of(r.certificates.begin(), r.certificates.end(),
                                            [](const Certificate& c) { return c.verdict == Verdict::Inapplicable; });
  out.exit_code = all_inapplicable ? 2 : 0;
  return out;
}

CommandResult run_floquet(const ProblemFile& p) {
  const EquationSpec eq = p.build();
  if (!eq.periodic()) throw Error(ErrorCode::InvalidArgument, "floquet needs equation.period");
  Json doc = floquet_json(classify(eq, p.config.floquet()));
  doc["label"] = p.label;
  return {format_json(doc), {}, 0};
}

CommandResult run_simulate(const ProblemFile& p) {
  if (!p.simulate) throw Error(ErrorCode::InvalidArgument, "simulate needs a simulate section or --x0/--v0/--T");
  const EquationSpec eq = p.build();
  const auto& s = *p.simulate;
  if (!(s.T > eq.t_start)) throw Error(ErrorCode::InvalidArgument, "simulate needs T > t_start");
  const auto tr = solve_ivp(eq, eq.t_start, s.x0, s.v0, s.T, p.config.tol);
  return {trajectory_csv(tr, eq.t_start, s.T, s.dt), format_json(zeros_json(tr)), 0};
}

CommandResult run_oracle(const ProblemFile& p) {
  const EquationSpec eq = p.build();
  const RunConfig& c = p.config;
  const double T = eq.t_start + c.scan_T;
  Json doc;
  doc["label"] = p.label;
  doc["decay"] = decay_json(empirical_decay_rate(eq, c.horizon, c.tol));
  const auto pos = positivity_scan(eq, T, c.grid, c.tol);
  doc["positivity"] = pos.positive;
  Json pd{{"T", T}, {"grid", c.grid}};
  if (!pos.positive) {
    pd["s"] = pos.s;
    pd["t"] = pos.t;
  }
  doc["positivity_detail"] = pd;
  if (pos.positive) {
    const auto e = check_eq34(eq, T, c.grid, c.tol, c.s_per_unit);
    doc["eq34"] = Json{{"min", e.min}, {"max", e.max}};
  } else {
    doc["eq34"] = nullptr;
  }
  doc["lemma6_max_discrepancy"] = lemma6_consistency(eq, T, 10, c.tol, c.s_per_unit);
  const auto br = bounded_response(eq, c.horizon, c.tol);
  doc["bounded_response"] = Json{{"max_first_half", br.max_first_half},
                                 {"max_second_half", br.max_second_half},
                                 {"bounded", br.bounded}};
  if (p.comparison)
    doc["comparison"] = comparison_json(
        comparison_check(eq, p.build_dominated(), eq.t_start + p.comparison->T, p.comparison->grid, c.tol));
  return {format_json(doc), {}, 0};
}

CommandResult run_sweep(const ProblemFile& p) {
  if (!p.sweep) throw Error(ErrorCode::InvalidArgument, "sweep needs a sweep section or --param/--from/--to/--steps");
  const SweepSpec& s = *p.sweep;
  std::vector<std::string> families;
  for (const auto& f : criterion_families())
    if (s.criteria.empty() || std::find(s.criteria.begin(), s.criteria.end(), f) != s.criteria.end())
      families.push_back(f);

  std::vector<std::string> rows(static_cast<std::size_t>(s.steps));
  parallel_for(rows.size(), [&](std::size_t i) {
    const double v = s.value(static_cast<int>(i));
    const EquationSpec eq = p.build({{s.param, v}});
    const auto r = certify_all(eq, p.config.cert(), s.criteria);
    const auto d = empirical_decay_rate(eq, p.config.horizon, p.config.tol);
    std::ostringstream os;
    os << i << ',' << format_real(v) << ',' << to_string(r.summary) << ',';
    for (std::size_t k = 0; k < r.summary_criteria.size(); ++k) os << (k ? ";" : "") << r.summary_criteria[k];
    for (const auto& c : r.certificates) os << ',' << to_string(c.verdict);
    os << ',' << format_real(d.rate) << '\n';
    rows[i] = os.str();
  });
  std::ostringstream os;
  os << "index," << s.param << ",summary,summary_criteria";
  for (const auto& f : families) os << ',' << f;
  os << ",lambda_fit\n";
  for (const auto& r : rows) os << r;
  return {os.str(), {}, 0};
}

CommandResult run_command(const std::string& command, const ProblemFile& p) {
  if (command == "certify") return run_certify(p);
  if (command == "floquet") return run_floquet(p);
  if (command == "simulate") return run_simulate(p);
  if (command == "oracle") return run_oracle(p);
  if (command == "sweep") return run_sweep(p);
  throw Error(ErrorCode::InvalidArgument, "unknown command '" + command + "'");
}

}  // namespace oscillint
