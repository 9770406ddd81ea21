// Command-line front end. Talks to the library only through the C API.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>

#include <CLI11.hpp>

#include "oscillint/oscillint.h"

namespace {

constexpr double kKeep = std::numeric_limits<double>::quiet_NaN();

int report_error(oscillint_status s) {
  std::cerr << "oscillint: " << oscillint_status_string(s) << ": " << oscillint_last_error() << '\n';
  return 1;
}

bool write_text(const std::string& path, const char* text) {
  if (path.empty() || path == "-") {
    std::fputs(text, stdout);
    return true;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "oscillint: cannot write " << path << '\n';
    return false;
  }
  return true;
}

struct Options {
  std::string file;
  std::string out;
  std::string zeros;
  double x0 = kKeep, v0 = kKeep, T = kKeep, dt = kKeep;
  std::string param;
  double from = kKeep, to = kKeep;
  int steps = 0;
};

int run(const std::string& command, const Options& o) {
  oscillint_problem* problem = nullptr;
  oscillint_status s = oscillint_problem_load(o.file.c_str(), &problem);
  if (s != OSCILLINT_OK) return report_error(s);

  if (command == "simulate" && (!std::isnan(o.x0) || !std::isnan(o.v0) || !std::isnan(o.T) || !std::isnan(o.dt)))
    s = oscillint_problem_set_simulate(problem, o.x0, o.v0, o.T, o.dt);
  if (s == OSCILLINT_OK && command == "sweep" && !o.param.empty())
    s = oscillint_problem_set_sweep(problem, o.param.c_str(), o.from, o.to, o.steps);
  if (s != OSCILLINT_OK) {
    oscillint_problem_free(problem);
    return report_error(s);
  }

  oscillint_result* result = nullptr;
  s = oscillint_run(problem, command.c_str(), &result);
  oscillint_problem_free(problem);
  if (s != OSCILLINT_OK) return report_error(s);

  bool ok = write_text(o.out, oscillint_result_output(result));
  if (ok && !o.zeros.empty()) ok = write_text(o.zeros, oscillint_result_zeros(result));
  const int code = ok ? oscillint_result_exit_code(result) : 1;
  oscillint_result_free(result);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stability and positivity analysis for x'' + a(t) x' + b(t) x = f(t)"};
  app.set_version_flag("--version", std::string(oscillint_version()));
  app.require_subcommand(1);

  Options o;
  auto add_file = [&](CLI::App* sub) { sub->add_option("file", o.file, "Problem file (JSON)")->required(); };

  auto* certify = app.add_subcommand("certify", "Run every stability and positivity criterion");
  add_file(certify);
  certify->add_option("--json", o.out, "Write the report here instead of stdout");

  auto* floquet = app.add_subcommand("floquet", "Monodromy, multipliers and classification of a periodic equation");
  add_file(floquet);
  floquet->add_option("--json", o.out, "Write the report here instead of stdout");

  auto* simulate = app.add_subcommand("simulate", "Integrate an initial value problem to CSV");
  add_file(simulate);
  simulate->add_option("--x0", o.x0, "Initial x");
  simulate->add_option("--v0", o.v0, "Initial x'");
  simulate->add_option("--T", o.T, "Final time");
  simulate->add_option("--dt", o.dt, "Output spacing");
  simulate->add_option("--out", o.out, "Write the CSV here instead of stdout");
  simulate->add_option("--zeros", o.zeros, "Write the zeros of x as JSON here");

  auto* oracle = app.add_subcommand("oracle", "Numerical decay, positivity and identity checks");
  add_file(oracle);
  oracle->add_option("--json", o.out, "Write the report here instead of stdout");

  auto* sweep = app.add_subcommand("sweep", "Certify over a parameter range to CSV");
  add_file(sweep);
  auto* param = sweep->add_option("--param", o.param, "Parameter declared in the file's params");
  sweep->add_option("--from", o.from, "First value")->needs(param);
  sweep->add_option("--to", o.to, "Last value")->needs(param);
  sweep->add_option("--steps", o.steps, "Number of points")->needs(param)->check(CLI::PositiveNumber);
  sweep->add_option("--out", o.out, "Write the CSV here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (!o.param.empty() && (std::isnan(o.from) || std::isnan(o.to) || o.steps == 0)) {
    std::cerr << "oscillint: --param needs --from, --to and --steps\n";
    return 1;
  }
  return run(app.get_subcommands().front()->get_name(), o);
}
