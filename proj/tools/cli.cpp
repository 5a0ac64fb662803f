#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include <rbm/rbm.hpp>

namespace rbm::cli {

using nlohmann::json;

namespace {

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json validation_json(const ValidationReport& rep) {
  json checks = json::array();
  for (const Check& c : rep.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"value", c.value}});
  }
  return {{"ok", rep.ok()}, {"checks", checks}};
}

json geometry_json(const KernelGeometry& g) {
  return {{"theta1_minus", g.theta1_minus},
          {"theta1_plus", g.theta1_plus},
          {"theta2_minus", g.theta2_minus},
          {"theta2_plus", g.theta2_plus},
          {"beta", g.beta},
          {"theta2_at_theta1_minus", g.theta2_at_t1m},
          {"p", optional_json(g.p)},
          {"p_prime", optional_json(g.p_prime)},
          {"q", g.q},
          {"gamma1_tangency_sign", g.gamma1_tangency_sign},
          {"scale", g.scale}};
}

json index_json(const IndexData& idx) {
  return {{"delta", idx.delta},
          {"Delta", idx.Delta},
          {"chi", idx.chi},
          {"Delta_from_formula", idx.Delta_from_formula},
          {"Delta_from_tracking", idx.Delta_from_tracking}};
}

json classification_json(const ModelParams& p, double tol, const LaplaceOptions& opts) {
  const AsymptoticsClass c = classify(p, tol);
  json j = {{"case", to_string(c.case_label)},
            {"kappa", c.kappa},
            {"tau2", c.tau2},
            {"skew_symmetric", c.skew_symmetric}};
  if (c.case_label == TailCase::c1a) j["b"] = constant_b_case1a(p, opts);
  if (!c.ambiguous.empty()) {
    json a = json::array();
    for (TailCase t : c.ambiguous) a.push_back(to_string(t));
    j["ambiguous"] = a;
  }
  return j;
}

LaplaceOptions laplace_options(const RunSpec& spec) {
  LaplaceOptions o;
  o.rel_tol = spec.tol;
  o.margin = spec.margin;
  return o;
}

std::vector<std::complex<double>> grid_points(const Grid& g) {
  if (g.count < 1) throw std::invalid_argument("grid count must be at least 1");
  std::vector<std::complex<double>> pts;
  for (int k = 0; k < g.count; ++k) {
    const double x = g.count == 1 ? g.lo : g.lo + (g.hi - g.lo) * k / (g.count - 1);
    pts.emplace_back(x, g.imag);
  }
  return pts;
}

bool is_identity_reflection(const ModelParams& p) {
  return std::abs(p.r11 - 1.0) <= 1e-12 && std::abs(p.r22 - 1.0) <= 1e-12 && std::abs(p.r12) <= 1e-12 &&
         std::abs(p.r21) <= 1e-12;
}

// Closed form of phi1 (or of phi2 through the swapped model) when a special case applies.
std::optional<LaplaceValue> closed_form(const ModelParams& p, bool first, std::complex<double> z) {
  const ModelParams m = first ? p : p.swapped();
  if (is_skew_symmetric(m)) return closed_form_skew(m, z);
  if (is_identity_reflection(m)) return closed_form_orthogonal(m, z);
  return std::nullopt;
}

struct Row {
  std::complex<double> z;
  LaplaceValue v;
  bool refused = false;
  std::string why;
};

std::vector<Row> evaluate_grid(const RunSpec& spec, const ModelParams& p) {
  if (spec.grid.axis != "theta1" && spec.grid.axis != "theta2") {
    throw std::invalid_argument("grid axis must be theta1 or theta2");
  }
  const bool first = spec.grid.axis == "theta2";
  const StationaryLaplace L(p, laplace_options(spec));
  const auto pts = grid_points(spec.grid);
  std::vector<Row> rows(pts.size());
  parallel_for(
      pts.size(),
      [&](std::size_t i) {
        rows[i].z = pts[i];
        try {
          rows[i].v = first ? L.phi1_any(pts[i]) : L.phi2_any(pts[i]);
        } catch (const DomainError& e) {
          rows[i].refused = true;
          rows[i].why = e.what();
        }
      },
      spec.threads);
  return rows;
}

void write_number(std::ostream& os, double v) {
  if (std::isfinite(v)) {
    os << v;
  } else {
    os << "nan";
  }
}

void write_grid_csv(std::ostream& os, std::ostream& err, const std::vector<Row>& rows, const ModelParams* compare_with,
                    bool first) {
  os << std::setprecision(17);
  os << "re_theta,im_theta,re_phi,im_phi,abs_err,method";
  if (compare_with) os << ",re_closed,im_closed,rel_err";
  os << "\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const Row& r : rows) {
    const std::complex<double> v = r.refused ? std::complex<double>(nan, nan) : r.v.value;
    write_number(os, r.z.real());
    os << ',';
    write_number(os, r.z.imag());
    os << ',';
    write_number(os, v.real());
    os << ',';
    write_number(os, v.imag());
    os << ',';
    write_number(os, r.refused ? nan : r.v.abs_error_estimate);
    os << ',' << (r.refused ? "refused" : to_string(r.v.method));
    if (compare_with) {
      std::complex<double> c(nan, nan);
      try {
        c = closed_form(*compare_with, first, r.z)->value;
      } catch (const DomainError&) {
      }
      os << ',';
      write_number(os, c.real());
      os << ',';
      write_number(os, c.imag());
      os << ',';
      write_number(os, r.refused ? nan : std::abs(v - c) / std::abs(c));
    }
    os << "\n";
    if (r.refused) err << "refused at (" << r.z.real() << ", " << r.z.imag() << "): " << r.why << "\n";
  }
}

json simulation_json(const ModelParams& p, const RunSpec& spec) {
  SimConfig cfg = spec.sim;
  if (spec.threads != 0) cfg.threads = spec.threads;
  const auto samples = simulate(p, cfg);
  const PhiEstimate e = estimate_phi(samples, spec.theta1, spec.theta2);
  const MassEstimate m = estimate_boundary_masses(samples);
  return {{"theta", json::array({complex_json(spec.theta1), complex_json(spec.theta2)})},
          {"phi_estimate", complex_json(e.mean)},
          {"stderr", e.std_error},
          {"nu1", m.nu1},
          {"nu2", m.nu2},
          {"stderrs", json::array({m.std_error1, m.std_error2})},
          {"config",
           {{"step", cfg.step_h},
            {"burnin", cfg.burn_in},
            {"horizon", cfg.horizon_T},
            {"paths", cfg.n_paths},
            {"seed", cfg.master_seed}}}};
}

json spot_values(const StationaryLaplace& L, bool first, const std::vector<double>& at) {
  json arr = json::array();
  for (double t : at) {
    json e = {{first ? "theta2" : "theta1", t}};
    try {
      const LaplaceValue v = first ? L.phi1_any(t) : L.phi2_any(t);
      e["value"] = complex_json(v.value);
      e["abs_error"] = v.abs_error_estimate;
      e["method"] = to_string(v.method);
    } catch (const DomainError& ex) {
      e["refused"] = ex.what();
    }
    arr.push_back(e);
  }
  return arr;
}

json report_json(const ModelParams& p, const ParamsFile& file, const RunSpec& spec) {
  const LaplaceOptions opts = laplace_options(spec);
  const StationaryLaplace L(p, opts);
  json j;
  j["params"] = json::parse(params_to_json(p));
  j["validation"] = validation_json(validate(p));
  const WedgeAngles a = quadrant_to_wedge(p);
  j["wedge_angles"] = {{"beta", a.beta}, {"delta", a.delta}, {"epsilon", a.epsilon}};
  if (file.wedge) j["input_was_wedge"] = true;
  j["geometry"] = geometry_json(L.first().geometry());
  j["index"] = index_json(L.first().index());
  j["masses"] = {{"nu1", nu_masses(p).nu1_total}, {"nu2", nu_masses(p).nu2_total}};
  j["classification"] = classification_json(p, spec.classify_tol, opts);
  const DiekerMoriartyResult dm = dieker_moriarty(p);
  j["dieker_moriarty"] = {{"sum_of_exponentials", dm.is_sum_of_exponentials},
                          {"ratio", dm.ratio},
                          {"n", dm.n ? json(*dm.n) : json(nullptr)}};
  const std::vector<double> at{-2.0, -1.0, -0.5, 0.0};
  j["phi1"] = spot_values(L, true, at);
  j["phi2"] = spot_values(L, false, at);
  if (closed_form(p, true, -1.0)) {
    json cmp = json::array();
    double worst = 0.0;
    for (double t : at) {
      const std::complex<double> c = closed_form(p, true, t)->value;
      const std::complex<double> v = L.phi1_any(t).value;
      const double r = std::abs(v - c) / std::abs(c);
      worst = std::max(worst, r);
      cmp.push_back({{"theta2", t}, {"closed_form", complex_json(c)}, {"rel_err", r}});
    }
    j["closed_form"] = {{"kind", is_skew_symmetric(p) ? "skew_symmetric" : "orthogonal"},
                        {"points", cmp},
                        {"max_rel_err", worst}};
  }
  if (spec.with_monte_carlo) j["monte_carlo"] = simulation_json(p, spec);
  return j;
}

int execute(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  const ParamsFile file = load_params_file(spec.params_path);
  const ModelParams& p = file.params;
  const ValidationReport rep = validate(p);

  if (spec.subcommand == "validate") {
    json j = validation_json(rep);
    if (rep.ok()) {
      const WedgeAngles a = quadrant_to_wedge(p);
      j["wedge_angles"] = {{"beta", a.beta}, {"delta", a.delta}, {"epsilon", a.epsilon}};
    }
    out << j.dump(2) << "\n";
    if (!rep.ok()) err << rep.summary();
    return rep.ok() ? ExitCode::ok : ExitCode::invalid_params;
  }
  if (!rep.ok()) {
    err << "invalid parameters:\n" << rep.summary();
    return ExitCode::invalid_params;
  }

  if (spec.subcommand == "geometry") {
    const KernelGeometry g = kernel_geometry(p);
    json j = geometry_json(g);
    j["index"] = index_json(compute_index(p));
    out << j.dump(2) << "\n";
  } else if (spec.subcommand == "curve") {
    const HyperbolaPath path = build_path(p);
    out << std::setprecision(17) << "s,re_theta2,im_theta2,re_logG,im_logG\n";
    for (const PathNode& n : path.nodes) {
      out << n.s << ',' << n.theta2.real() << ',' << n.theta2.imag() << ',' << n.logG.real() << ','
          << n.logG.imag() << "\n";
    }
  } else if (spec.subcommand == "classify") {
    out << classification_json(p, spec.classify_tol, laplace_options(spec)).dump(2) << "\n";
  } else if (spec.subcommand == "eval" || spec.subcommand == "compare") {
    const bool first = spec.grid.axis == "theta2";
    const bool comparing = spec.subcommand == "compare";
    if (comparing && !closed_form(p, first, spec.grid.lo)) {
      err << "compare: no closed form applies (parameters are neither skew-symmetric nor R = I)\n";
      return ExitCode::usage_error;
    }
    write_grid_csv(out, err, evaluate_grid(spec, p), comparing ? &p : nullptr, first);
  } else if (spec.subcommand == "simulate") {
    out << simulation_json(p, spec).dump(2) << "\n";
  } else if (spec.subcommand == "report") {
    out << report_json(p, file, spec).dump(2) << "\n";
  } else {
    err << "unknown subcommand " << spec.subcommand << "\n";
    return ExitCode::usage_error;
  }
  return ExitCode::ok;
}

}  // namespace

std::pair<double, double> parse_range(const std::string& text) {
  const auto colon = text.find(':', 1);
  if (colon == std::string::npos) throw std::invalid_argument("range must be LO:HI, got " + text);
  std::size_t used = 0;
  const std::string a = text.substr(0, colon), b = text.substr(colon + 1);
  const double lo = std::stod(a, &used);
  if (used != a.size()) throw std::invalid_argument("bad range bound " + a);
  const double hi = std::stod(b, &used);
  if (used != b.size()) throw std::invalid_argument("bad range bound " + b);
  return {lo, hi};
}

Grid parse_grid(const std::string& text) {
  const auto first = text.find(':');
  const auto last = text.rfind(':');
  if (first == std::string::npos || last == first) {
    throw std::invalid_argument("grid must be AXIS:LO:HI:COUNT, got " + text);
  }
  Grid g;
  g.axis = text.substr(0, first);
  const auto [lo, hi] = parse_range(text.substr(first + 1, last - first - 1));
  g.lo = lo;
  g.hi = hi;
  std::size_t used = 0;
  const std::string c = text.substr(last + 1);
  g.count = std::stoi(c, &used);
  if (used != c.size() || g.count < 1) throw std::invalid_argument("bad grid count " + c);
  return g;
}

namespace {

std::complex<double> parse_complex(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty number");
  if (s.back() != 'j' && s.back() != 'i') {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("bad number " + s);
    return v;
  }
  // re+imj or re-imj; the sign separating the parts is the last one not
  // following an exponent marker.
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size() - 1; i > 0; --i) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  const std::string body = s.substr(0, s.size() - 1);
  if (split == std::string::npos) {
    std::size_t used = 0;
    const double im = std::stod(body, &used);
    if (used != body.size()) throw std::invalid_argument("bad number " + s);
    return {0.0, im};
  }
  std::size_t u1 = 0, u2 = 0;
  const std::string a = s.substr(0, split), b = body.substr(split);
  const double re = std::stod(a, &u1);
  const double im = std::stod(b, &u2);
  if (u1 != a.size() || u2 != b.size()) throw std::invalid_argument("bad number " + s);
  return {re, im};
}

}  // namespace

std::pair<std::complex<double>, std::complex<double>> parse_theta(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw std::invalid_argument("theta must be a,b, got " + text);
  return {parse_complex(text.substr(0, comma)), parse_complex(text.substr(comma + 1))};
}

std::optional<RunSpec> parse_command_line(int argc, const char* const* argv, int& exit_code, std::ostream& out,
                                          std::ostream& err) {
  RunSpec spec;
  CLI::App app{"Stationary distribution of reflected Brownian motion in the quadrant"};
  app.require_subcommand(1);
  std::string range, grid, theta;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--params", spec.params_path, "Parameter file (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", spec.out_path, "Output file (default: standard output)");
    sub->add_option("--tol", spec.tol, "Relative quadrature tolerance of the transforms")->capture_default_str();
    sub->add_option("--margin", spec.margin, "Refusal distance to the curve, in units of scale")
        ->capture_default_str();
    sub->add_option("--threads", spec.threads, "Worker threads (0 = automatic; capped by RBM_THREADS)");
  };
  auto grid_opts = [&](CLI::App* sub) {
    sub->add_option("--axis", spec.grid.axis, "theta2 (phi1) or theta1 (phi2)")->capture_default_str();
    sub->add_option("--range", range, "LO:HI of the real part");
    sub->add_option("--count", spec.grid.count, "Number of grid points")->capture_default_str();
    sub->add_option("--imag", spec.grid.imag, "Imaginary part of every grid point")->capture_default_str();
    sub->add_option("--grid", grid, "AXIS:LO:HI:COUNT shorthand");
  };
  auto sim_opts = [&](CLI::App* sub) {
    sub->add_option("--step", spec.sim.step_h, "Euler step")->capture_default_str();
    sub->add_option("--burnin", spec.sim.burn_in, "Burn-in time")->capture_default_str();
    sub->add_option("--horizon", spec.sim.horizon_T, "Final time")->capture_default_str();
    sub->add_option("--paths", spec.sim.n_paths, "Number of paths")->capture_default_str();
    sub->add_option("--seed", spec.sim.master_seed, "Master seed")->capture_default_str();
    sub->add_option("--theta", theta, "Point a,b of the transform estimate (complex as re+imj)");
  };

  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {{"validate", "Check the stationarity conditions"},
                      {"geometry", "Kernel geometry and index as JSON"},
                      {"curve", "Nodes of the integration path and log G as CSV"},
                      {"classify", "Tail asymptotics of the boundary density as JSON"},
                      {"eval", "Transform on a grid as CSV"},
                      {"compare", "Transform on a grid next to the closed form as CSV"},
                      {"simulate", "Monte Carlo estimate of the transform and boundary masses"},
                      {"report", "Every analysis chained into one JSON document"}};
  for (const Sub& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    common(sub);
    const std::string n = s.name;
    if (n == "eval" || n == "compare") grid_opts(sub);
    if (n == "simulate" || n == "report") sim_opts(sub);
    if (n == "classify" || n == "report") {
      sub->add_option("--classify-tol", spec.classify_tol, "Equality tolerance of the tail table, times scale")
          ->capture_default_str();
    }
    if (n == "report") sub->add_flag("--mc", spec.with_monte_carlo, "Append a Monte Carlo cross-check");
  }

  try {
    app.parse(argc, argv);
    for (CLI::App* sub : app.get_subcommands()) spec.subcommand = sub->get_name();
    if (!range.empty()) {
      const auto [lo, hi] = parse_range(range);
      spec.grid.lo = lo;
      spec.grid.hi = hi;
    }
    if (!grid.empty()) {
      const double imag = spec.grid.imag;
      spec.grid = parse_grid(grid);
      spec.grid.imag = imag;
    }
    if (!theta.empty()) std::tie(spec.theta1, spec.theta2) = parse_theta(theta);
  } catch (const CLI::ParseError& e) {
    exit_code = app.exit(e, out, err);
    if (exit_code != 0) exit_code = ExitCode::usage_error;
    return std::nullopt;
  } catch (const std::invalid_argument& e) {
    err << e.what() << "\n";
    exit_code = ExitCode::usage_error;
    return std::nullopt;
  }
  exit_code = ExitCode::ok;
  return spec;
}

int run(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  std::ofstream file;
  std::ostream* target = &out;
  if (spec.out_path) {
    file.open(*spec.out_path);
    if (!file) {
      err << "cannot open output file " << *spec.out_path << "\n";
      return ExitCode::usage_error;
    }
    target = &file;
  }
  try {
    return execute(spec, *target, err);
  } catch (const InvalidParams& e) {
    err << "invalid parameters: " << e.what() << "\n";
    return ExitCode::invalid_params;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return ExitCode::numerical_failure;
  } catch (const DomainError& e) {
    err << "evaluation refused: " << e.what() << "\n";
    return ExitCode::numerical_failure;
  } catch (const std::invalid_argument& e) {
    err << e.what() << "\n";
    return ExitCode::usage_error;
  }
}

}  // namespace rbm::cli
