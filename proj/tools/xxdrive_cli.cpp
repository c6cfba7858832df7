// Copyright 2026 The xxdrive Authors
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

// xxdrive: command-line front end.
//
//   xxdrive solve      --n 64 --omega 6 --eps 0.1 [--method spectral] [--heatmap C.csv]
//   xxdrive sweep      --n 257 --eps 0.01 --omega-min 7.9 --omega-max 8 --omega-steps 4000
//   xxdrive scaling    --omega 8 --eps 0.1 --sizes 32,64,128,256,512
//   xxdrive resonances --n 257 --omega 7.98 --width 0.01
//   xxdrive oracle     --n 8 --omega 3 --eps 0.1
//
// Exit status: 0 success, 1 bad parameters or I/O, 2 solver failure.

#include <CLI11.hpp>

#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "xxdrive/xxdrive.hpp"

using namespace xxdrive;
using nlohmann::json;

namespace {

struct Common {
  int n = 64;
  double eps = 0.1;
  double mu0 = 1.0;
  double omega = 0.0;
  std::string method;
  std::string format = "csv";
  std::string out;
};

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text(path, text);
  }
}

std::string num(double v) { return detail::fmt17(v); }

CovarianceMatrix greens_matrix(const ChainParams& p) {
  Eigen::MatrixXcd C(p.n, p.n);
  for (int j = 1; j <= p.n; ++j)
    for (int k = j; k <= p.n; ++k) C(j - 1, k - 1) = C(k - 1, j - 1) = near_diagonal_covariance(p, j, k);
  return {p, Method::greens, C};
}

CovarianceMatrix solve_with(const ChainParams& p, Method m, int order) {
  switch (m) {
    case Method::dense: return solve_dense(p);
    case Method::spectral: return solve_exact(p);
    case Method::schur: return solve_schur(p);
    case Method::weak: return covariance_matrix_weak(p);
    case Method::series: return series_covariance(p, order).covariance;
    case Method::greens: return greens_matrix(p);
    case Method::ode: {
      if (p.n > 64) throw SizeGuardError("ode oracle is meant for small chains (n <= 64)");
      return solve_ode(p).covariance;
    }
  }
  throw ParameterError("unhandled method");
}

std::string profile_text(const CovarianceMatrix& C, Format f) {
  const auto prof = observable_profile(C);
  const int n = C.n();
  const double res = residual_norm(C, C.params);
  if (f == Format::csv) {
    std::ostringstream os;
    os << "site,sz_re,sz_im,sz_abs,current_re,current_im,current_abs\n";
    for (int k = 0; k < n; ++k) {
      const cplx z = prof.magnetization[k];
      os << k + 1 << ',' << num(z.real()) << ',' << num(z.imag()) << ',' << num(std::abs(z));
      if (k + 1 < n) {
        const cplx j = prof.current[k];
        os << ',' << num(j.real()) << ',' << num(j.imag()) << ',' << num(std::abs(j));
      } else {
        os << ",,,";
      }
      os << '\n';
    }
    return os.str();
  }
  json j = {{"n", n},
            {"omega", C.params.omega},
            {"eps", C.params.eps},
            {"mu0", C.params.mu0},
            {"method", std::string(to_string(C.method))},
            {"residual", res},
            {"midpoint_current_abs", midpoint_current_abs(C)}};
  json mz = json::array(), cur = json::array();
  for (auto z : prof.magnetization) mz.push_back({z.real(), z.imag()});
  for (auto z : prof.current) cur.push_back({z.real(), z.imag()});
  j["magnetization"] = mz;
  j["current"] = cur;
  return j.dump(2) + "\n";
}

std::vector<int> parse_sizes(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw ParameterError("bad size '" + item + "' in --sizes");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Oscillating steady states of the boundary-driven XX chain"};
  app.require_subcommand(1);
  Common c;

  auto add_common = [&](CLI::App* sub, bool needs_n, bool needs_omega) {
    auto* on = sub->add_option("--n", c.n, "chain length");
    if (needs_n) on->required();
    sub->add_option("--eps", c.eps, "bath coupling")->capture_default_str();
    sub->add_option("--mu0", c.mu0, "driving amplitude")->capture_default_str();
    auto* ow = sub->add_option("--omega", c.omega, "driving frequency");
    if (needs_omega) ow->required();
    sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    sub->add_option("--out", c.out, "output file (default stdout)");
  };
  const std::vector<std::string> methods{"dense", "spectral", "schur", "weak", "series", "greens", "ode"};

  auto* solve = app.add_subcommand("solve", "one steady state: observables and optional heat map");
  add_common(solve, true, true);
  solve->add_option("--method", c.method, "solver")->check(CLI::IsMember(methods));
  std::string heatmap;
  int order = 60;
  solve->add_option("--heatmap", heatmap, "also write |C_jk| to this file");
  solve->add_option("--order", order, "series order for --method series")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "midpoint current over a frequency grid");
  add_common(sweep, true, false);
  double wmin = 0.0, wmax = 10.0;
  int wsteps = kSmoothSweepPoints;
  unsigned workers = 0;
  bool no_audit = false;
  sweep->add_option("--omega-min", wmin)->capture_default_str();
  sweep->add_option("--omega-max", wmax)->capture_default_str();
  sweep->add_option("--omega-steps", wsteps)->capture_default_str();
  sweep->add_option("--method", c.method, "solver (default: exact up to n = 1024, weak beyond)")
      ->check(CLI::IsMember({"dense", "spectral", "schur", "weak"}));
  sweep->add_option("--workers", workers, "worker threads (0 = all cores)");
  sweep->add_flag("--no-audit", no_audit, "skip the second-method audit");

  auto* scaling = app.add_subcommand("scaling", "midpoint current against chain length, with a fit");
  add_common(scaling, false, true);
  std::string sizes;
  int n_min = 0, n_max = 0, n_count = 9;
  std::string parity = "any";
  scaling->add_option("--sizes", sizes, "comma-separated chain lengths");
  scaling->add_option("--n-min", n_min, "geometric size range start");
  scaling->add_option("--n-max", n_max, "geometric size range end");
  scaling->add_option("--n-per-window", n_count, "sizes per factor-1.3 window")->capture_default_str();
  scaling->add_option("--parity", parity)->check(CLI::IsMember({"even", "odd", "any"}))->capture_default_str();
  scaling->add_option("--method", c.method)->check(CLI::IsMember({"dense", "spectral", "schur", "weak"}));

  auto* reson = app.add_subcommand("resonances", "pair frequencies eps_p + eps_m near a target");
  add_common(reson, true, true);
  double width = 0.05;
  reson->add_option("--width", width, "half width of the window")->capture_default_str();

  auto* orc = app.add_subcommand("oracle", "time-domain cross-check against the exact solver");
  add_common(orc, true, true);
  double t_end = 1000.0;
  orc->add_option("--t-end", t_end)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    const Format fmt = parse_format(c.format);
    ChainParams p{c.n, c.eps, c.mu0, c.omega};

    if (*solve) {
      p.validate();
      const Method m = c.method.empty() ? auto_method(p.n) : parse_method(c.method);
      const auto C = solve_with(p, m, order);
      emit(profile_text(C, fmt), c.out);
      if (!heatmap.empty()) write_text(heatmap, format_heatmap(C, fmt));
    } else if (*sweep) {
      SweepOptions opt;
      if (!c.method.empty()) opt.method = parse_method(c.method);
      opt.workers = workers;
      opt.audit = !no_audit;
      const auto res = sweep_frequency(p.with_omega(0.0), linear_grid(wmin, wmax, wsteps), opt);
      emit(format_records(res.records, fmt), c.out);
      std::size_t failed = 0;
      for (const auto& r : res.records) failed += r.failed;
      if (failed) std::cerr << failed << " of " << res.records.size() << " points failed\n";
      if (res.audit.checked)
        std::cerr << "audit: " << res.audit.checked << " points, worst relative difference " << res.audit.worst
                  << "\n";
    } else if (*scaling) {
      std::vector<int> ns = sizes.empty() ? std::vector<int>{} : parse_sizes(sizes);
      if (ns.empty()) {
        detail::require(n_min >= 2 && n_max > n_min, "scaling: give --sizes or --n-min/--n-max");
        ns = geometric_sizes(n_min, n_max, 1.3, n_count);
      }
      if (parity != "any") {
        const int want = parity == "even" ? 0 : 1;
        std::erase_if(ns, [&](int n) { return n % 2 != want; });
      }
      ScalingOptions opt;
      if (!c.method.empty()) opt.method = parse_method(c.method);
      const auto st = scaling_study(p.omega, p.eps, ns, opt);
      const bool power = st.fit.kind == FitKind::power_law;
      if (fmt == Format::json) {
        json j = {{"omega", p.omega},
                  {"eps", p.eps},
                  {"kind", power ? "power_law" : "exponential"},
                  {power ? "alpha" : "xi", st.fit.value},
                  {"stderr", st.fit.std_error},
                  {"r_squared", st.fit.r_squared},
                  {"low_quality", st.fit.low_quality},
                  {"window", st.fit.window}};
        json pts = json::array();
        for (const auto& [n, v] : st.raw) pts.push_back({{"n", n}, {"current_abs", v}});
        j["points"] = pts;
        emit(j.dump(2) + "\n", c.out);
      } else {
        std::ostringstream os;
        os << "# " << (power ? "alpha" : "xi") << " = " << num(st.fit.value) << " +- " << num(st.fit.std_error)
           << ", r^2 = " << num(st.fit.r_squared) << (st.fit.low_quality ? " (low quality)" : "") << "\n";
        os << "n,current_abs\n";
        for (const auto& [n, v] : st.raw) os << static_cast<long>(n) << ',' << num(v) << '\n';
        emit(os.str(), c.out);
      }
    } else if (*reson) {
      const auto t = resonances_near(p, p.omega, width);
      std::ostringstream os;
      if (fmt == Format::csv) {
        os << "p,m,omega,distance\n";
        for (const auto& r : t.entries) os << r.p << ',' << r.m << ',' << num(r.omega) << ',' << num(r.omega - p.omega) << '\n';
      } else {
        json arr = json::array();
        for (const auto& r : t.entries) arr.push_back({{"p", r.p}, {"m", r.m}, {"omega", r.omega}});
        os << json{{"n", p.n}, {"width_scale", t.width_scale}, {"entries", arr}}.dump(2) << "\n";
      }
      emit(os.str(), c.out);
    } else if (*orc) {
      p.validate();
      OracleOptions opt;
      opt.t_end = t_end;
      const auto h = solve_ode(p, opt);
      const auto C = solve_exact(p);
      const double rel = (h.covariance.data - C.data).cwiseAbs().maxCoeff() / C.data.cwiseAbs().maxCoeff();
      json j = {{"n", p.n},
                {"omega", p.omega},
                {"eps", p.eps},
                {"max_relative_difference", rel},
                {"checkerboard", h.checkerboard},
                {"periodicity", h.periodicity},
                {"midpoint_current_ode", midpoint_current_abs(h.covariance)},
                {"midpoint_current_exact", midpoint_current_abs(C)}};
      emit(j.dump(2) + "\n", c.out);
    }
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
