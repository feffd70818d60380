// Copyright 2026 The unisamp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "unisamp/harness.hpp"
#include "unisamp/operators.hpp"
#include "unisamp/orlicz.hpp"
#include "unisamp/signals.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitUncertified = 2;

std::string trim(const std::string & s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// Reads key=value lines into "--key=value" tokens; '#' starts a comment, as does a leading "//".
std::vector<std::string> read_config(const std::string & path)
{
  std::ifstream in(path);
  if (!in) {
    throw CLI::ValidationError("--config", "cannot read " + path);
  }
  std::vector<std::string> args;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty() || line.rfind("//", 0) == 0) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw CLI::ValidationError("--config", path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    while (!key.empty() && key.front() == '-') {
      key.erase(0, 1);
    }
    args.push_back("--" + key + "=" + trim(line.substr(eq + 1)));
  }
  return args;
}

std::string option_key(const std::string & token)
{
  if (token.rfind("--", 0) != 0) {
    return {};
  }
  return token.substr(2, token.find('=') == std::string::npos ? std::string::npos : token.find('=') - 2);
}

/// Splices config entries into argv; flags given on the command line win.
std::vector<std::string> expand_config(int argc, char ** argv)
{
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string config;
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config = args[i].substr(9);
    } else {
      kept.push_back(args[i]);
    }
  }
  if (config.empty()) {
    return kept;
  }
  std::set<std::string> given;
  for (const auto & a : kept) {
    given.insert(option_key(a));
  }
  for (auto & a : read_config(config)) {
    if (!given.contains(option_key(a))) {
      kept.push_back(std::move(a));
    }
  }
  return kept;
}

std::string num(double v, const char * spec = "%.6g")
{
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

void print_kernel_report(const unisamp::AssumptionReport & r, std::ostream & out)
{
  out << "kernel " << r.kernel << ", grid " << r.grid << ", probes " << r.probe_count << "\n";
  out << "chi2 partition defect    " << num(r.chi2_partition_defect, "%.3e") << " (truncation "
      << num(r.chi2_truncation_bound, "%.3e") << ")\n";
  out << "chi3 moment M            " << num(r.chi3_moment_M, "%.12g") << "\n";
  for (const auto & t : r.chi4_tail_profile) {
    out << "chi4 tail w=" << num(t.w, "%g") << std::string(t.w < 10 ? 12 : 11, ' ') << num(t.tail_mass, "%.3e")
        << "\n";
  }
  out << "chi4 monotone            " << (r.chi4_monotone ? "yes" : "no") << "\n";
  out << "chi5 compact C           "
      << (r.chi5_verified ? "[-" + num(r.chi5_radius, "%.4g") + ", " + num(r.chi5_radius, "%.4g") + "]"
                          : std::string("not found"))
      << "\n";
  out << "Gamma (max ||chi_w||_1)  " << num(r.gamma_l1_bound, "%.12g") << "\n";
  for (const auto & p : r.scaled_l1_profile) {
    out << "w*||chi_w||_1 w=" << num(p.w, "%g") << std::string(p.w < 10 ? 8 : 7, ' ') << num(p.w_times_l1, "%.12g")
        << "\n";
  }
  if (!r.valid) {
    out << "invalid: " << r.invalid_reason << "\n";
  }
}

void print_sweep(const unisamp::ApproximationReport & r, std::ostream & out)
{
  out << r.op_label << ", signal " << r.config.signal << ", phi " << r.config.phi << "\n";
  out << "w,sup_error_continuity,l1_grid_error";
  for (double l : r.config.lambda_list) {
    out << ",modular_lambda_" << num(l, "%g");
  }
  out << ",luxemburg_error,certified\n";
  for (const auto & row : r.rows) {
    out << num(row.w, "%g") << ',' << num(row.sup_error_continuity, "%.6e") << ',' << num(row.l1_grid_error, "%.6e");
    for (const auto & m : row.modular_error) {
      out << ',' << (m.infinite ? std::string("inf") : num(m.value, "%.6e"));
    }
    out << ',' << num(row.luxemburg_error, "%.6e") << ',' << (row.certified ? "yes" : "no") << "\n";
  }
  out << "bound M*Upsilon*||f|| = " << num(r.moment_M * r.upsilon * r.signal_sup, "%.9g") << ", "
      << (r.boundedness_holds ? "holds" : "violated") << " (margin " << num(r.boundedness_margin, "%.3e") << ")\n";
  for (std::size_t i = 0; i < r.modular_rows_decreasing.size(); ++i) {
    out << "modular row lambda=" << num(r.config.lambda_list[i], "%g") << " nonincreasing in w: "
        << (r.modular_rows_decreasing[i] ? "yes" : "no") << "\n";
  }
  if (r.l_report) {
    out << "tails outside K: " << (r.l_report->modular_only ? "nonzero, modular-only convergence" : "zero") << "\n";
    for (const auto & n : r.l_report->notes) {
      out << "note: " << n << "\n";
    }
  }
  for (const auto & f : r.files) {
    out << "wrote " << f.string() << "\n";
  }
}

std::vector<double> parse_triple(const std::string & text)
{
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const std::string t = trim(item);
    const double d = std::stod(t, &used);
    if (used != t.size()) {
      throw std::invalid_argument("bad number '" + t + "'");
    }
    v.push_back(d);
  }
  if (v.size() != 3) {
    throw std::invalid_argument("--grid expects lo,hi,step");
  }
  return v;
}

int run(int argc, char ** argv)
{
  CLI::App app{"Sampling-type operators in Orlicz spaces: kernels, operators, sweeps."};
  app.require_subcommand(1);

  // kernels check
  auto * kernels = app.add_subcommand("kernels", "Kernel condition checks");
  kernels->require_subcommand(1);
  auto * kcheck = kernels->add_subcommand("check", "Check the kernel conditions on a sampling grid");
  std::string k_kernel;
  std::string k_grid = "regular";
  std::vector<double> k_w{1, 5, 40};
  std::size_t k_probes = 200;
  kcheck->add_option("--kernel", k_kernel, "bspline:<n>, combined-m, fejer, mellin")->required();
  kcheck->add_option("--grid", k_grid, "regular | irregular:<name> | jitter:<eta>");
  kcheck->add_option("--w", k_w, "comma-separated w values")->delimiter(',');
  kcheck->add_option("--probes", k_probes, "number of seeded probes");

  // approx run / approx check
  auto * approx = app.add_subcommand("approx", "Operator sweeps");
  approx->require_subcommand(1);
  auto * arun = approx->add_subcommand("run", "Run a w sweep and write CSVs");
  auto * acheck = approx->add_subcommand("check", "Print the assumption matrix for an operator and signal");
  unisamp::SweepConfig sc;
  std::string eval_grid;
  std::string sampling_grid = "regular";
  std::string out_dir;
  bool no_checks = false;
  for (auto * sub : {arun, acheck}) {
    sub->add_option("--operator", sc.op, "t1..t7")->required();
    sub->add_option("--kernel", sc.kernel, "kernel name (ignored for t6/t7)");
    sub->add_option("--psi", sc.psi, "Durrmeyer kernel for t3");
    sub->add_option("--signal", sc.signal, "signal name")->required();
    sub->add_option("--w", sc.w_list, "comma-separated w values")->delimiter(',')->required();
    sub->add_option("--phi", sc.phi, "power:p=1 | exp:alpha=1 | zygmund:alpha=1,beta=1");
    sub->add_option("--sampling-grid", sampling_grid, "regular | irregular:<name> | jitter:<eta>");
    sub->add_option("--epsilon", sc.epsilon, "tail tolerance for the assumption checks");
    sub->add_option("--out", out_dir, "output directory");
  }
  arun->add_option("--grid", eval_grid, "evaluation grid lo,hi,step");
  arun->add_option("--lambda", sc.lambda_list, "comma-separated lambda values")->delimiter(',');
  arun->add_option("--exclusion", sc.exclusion_radius, "breakpoint exclusion radius");
  arun->add_flag("--no-checks", no_checks, "skip the sample-functional checks");

  // figure
  auto * figure = app.add_subcommand("figure", "Reproduce a figure as CSV data");
  std::string fig_id;
  std::string fig_out = ".";
  figure->add_option("id,--id", fig_id, "fig1..fig4")->required();
  figure->add_option("--out", fig_out, "output directory");

  // orlicz
  auto * orlicz = app.add_subcommand("orlicz", "Orlicz modular, Luxemburg norm, Delta2");
  orlicz->require_subcommand(1);
  auto * onorm = orlicz->add_subcommand("norm", "Modular and Luxemburg norm of a signal");
  std::string o_signal;
  std::string o_phi = "power:p=1";
  std::string o_measure = "lebesgue";
  std::vector<double> o_lambda{1.0};
  onorm->add_option("--signal", o_signal, "signal name")->required();
  onorm->add_option("--phi", o_phi, "phi spec");
  onorm->add_option("--lambda", o_lambda, "modular scale factors")->delimiter(',');
  onorm->add_option("--measure", o_measure, "lebesgue | haar (x > 0 signals only)")
    ->check(CLI::IsMember({"lebesgue", "haar"}));
  auto * odelta = orlicz->add_subcommand("delta2", "Classify the Delta2 condition");
  std::string d_phi;
  odelta->add_option("--phi", d_phi, "phi spec")->required();

  std::vector<std::string> args = expand_config(argc, argv);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  if (kcheck->parsed()) {
    const unisamp::OperatorSpec spec =
      k_kernel == "mellin" ? unisamp::make_operator("t6", "mellin", "") : unisamp::make_operator("t1", k_kernel, k_grid);
    const auto report = unisamp::check_kernel_assumptions(spec, k_w, k_probes);
    print_kernel_report(report, std::cout);
    return report.valid ? kExitOk : kExitUncertified;
  }

  if (arun->parsed() || acheck->parsed()) {
    if (unisamp::is_mellin(unisamp::parse_operator_id(sc.op))) {
      sc.kernel = "";
      sampling_grid = "";
    }
    sc.grid = sampling_grid;
    if (acheck->parsed()) {
      const auto spec = unisamp::make_operator(sc.op, sc.kernel, sc.grid, sc.psi);
      const auto f = unisamp::signal_by_name(sc.signal);
      const auto phi = unisamp::PhiFunction::parse(sc.phi);
      const auto summary = unisamp::check_assumptions_cmd(spec, f, phi, sc.w_list, std::cout, out_dir, sc.epsilon);
      return summary.uncertified ? kExitUncertified : kExitOk;
    }
    if (!eval_grid.empty()) {
      const auto g = parse_triple(eval_grid);
      sc.lo = g[0];
      sc.hi = g[1];
      sc.step = g[2];
    }
    sc.output_dir = out_dir;
    sc.check_assumptions = !no_checks;
    const auto report = unisamp::run_sweep(sc);
    print_sweep(report, std::cout);
    return report.all_certified() ? kExitOk : kExitUncertified;
  }

  if (figure->parsed()) {
    unisamp::ApproximationReport report;
    const auto files = unisamp::reproduce_figure(fig_id, fig_out, &report);
    if (fig_id == "fig1") {
      for (const auto & f : files) {
        std::cout << "wrote " << f.string() << "\n";
      }
      return kExitOk;
    }
    print_sweep(report, std::cout);
    return report.all_certified() ? kExitOk : kExitUncertified;
  }

  if (onorm->parsed()) {
    const auto f = unisamp::signal_by_name(o_signal);
    const auto phi = unisamp::PhiFunction::parse(o_phi);
    const bool half = f.domain() == unisamp::SignalDomain::positive_half_line;
    if (o_measure == "haar" && !half) {
      throw std::invalid_argument("haar measure needs a signal on x > 0");
    }
    double lo = half ? 0.0 : -1.0;
    double hi = 1.0;
    if (const auto s = f.support()) {
      lo = s->first;
      hi = s->second;
    } else {
      const double r = f.truncation_radius(1e-8);
      if (!std::isfinite(r)) {
        throw std::invalid_argument("signal " + f.name() + " does not decay");
      }
      hi = r;
      lo = half ? 0.0 : -r;
      std::cout << "truncated to |x| <= " << num(r, "%g") << "\n";
    }
    const unisamp::IntegrationDomain domain = o_measure == "haar"
      ? unisamp::log_half_line_u(std::max(lo, 0x1p-40), hi)
      : unisamp::finite(lo, hi);
    bool certified = true;
    for (double l : o_lambda) {
      const auto m = unisamp::modular(f, phi, l, domain);
      certified = certified && m.certified;
      std::cout << "modular lambda=" << num(l, "%g") << " " << (m.infinite ? std::string("inf") : num(m.value, "%.12g"))
                << "\n";
    }
    try {
      const auto n = unisamp::luxemburg_norm(f, phi, domain);
      certified = certified && n.certified;
      std::cout << "luxemburg " << num(n.value, "%.12g") << "\n";
    } catch (const std::domain_error & e) {
      std::cout << "luxemburg: " << e.what() << "\n";
      certified = false;
    }
    return certified ? kExitOk : kExitUncertified;
  }

  if (odelta->parsed()) {
    const auto phi = unisamp::PhiFunction::parse(d_phi);
    const auto c = unisamp::delta2_classify(phi);
    std::cout << "phi " << phi.spec() << "\n";
    std::cout << "delta2 " << (c.satisfied ? "true" : "false") << "\n";
    std::cout << "sup phi(2x)/phi(x) " << (c.ratio_infinite ? std::string("inf") : num(c.sup_ratio, "%.9g")) << " at x="
              << num(c.argmax, "%g") << "\n";
    std::cout << "analytic " << (c.analytic ? "true" : "false") << (c.needs_review ? " (needs review)" : "") << "\n";
    return c.needs_review ? kExitUncertified : kExitOk;
  }
  return kExitInput;
}

}  // namespace

int main(int argc, char ** argv)
{
  try {
    return run(argc, argv);
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kExitInput;
}
