// graphctl: command-line front end for the graph control workbench.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "graphctl/graphctl.hpp"

using nlohmann::json;
using namespace graphctl;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

// Graph argument: a file path, "-" for stdin, or a JSON document.
struct LoadedGraph {
  GraphInput input;
  std::string text;
};

LoadedGraph load_graph(const std::string& arg) {
  std::string text;
  if (arg == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else if (!arg.empty() && arg.find_first_not_of(" \t\r\n") != std::string::npos &&
             arg[arg.find_first_not_of(" \t\r\n")] == '{') {
    text = arg;
  } else {
    std::ifstream f(arg);
    if (!f) throw ValidationError("cannot open graph file '" + arg + "'");
    text.assign(std::istreambuf_iterator<char>(f), {});
  }
  return {parse_graph_json(text), text};
}

json report(const std::string& command, const std::string& input, json results) {
  return {{"command", command}, {"input_digest", digest(input)}, {"version", kVersion}, {"results", std::move(results)}};
}

json path_json(const GraphPath& p) {
  json steps = json::array();
  for (const auto& s : p.steps) {
    steps.push_back({{"edge", s.edge}, {"dir", s.dir == Direction::Forward ? "forward" : "backward"}});
  }
  return {{"steps", steps}, {"start", p.start}, {"end", p.end}, {"length", p.total_length}, {"periodic", p.periodic}};
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw ValidationError("bad integer '" + item + "' in list");
    }
  }
  return out;
}

Pulse parse_pulse(const std::string& spec) {
  Pulse p;
  bool has_edge = false, has_center = false, has_width = false;
  std::stringstream ss(spec);
  std::string kv;
  while (std::getline(ss, kv, ',')) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ValidationError("pulse field '" + kv + "' is not key=value");
    const std::string k = kv.substr(0, eq), v = kv.substr(eq + 1);
    try {
      if (k == "edge") {
        p.edge = std::stoi(v);
        has_edge = true;
      } else if (k == "center") {
        p.center = std::stod(v);
        has_center = true;
      } else if (k == "width") {
        p.width = std::stod(v);
        has_width = true;
      } else if (k == "amp") {
        p.amplitude = std::stod(v);
      } else if (k == "kind") {
        if (v == "left") {
          p.kind = Pulse::Kind::LeftMover;
        } else if (v == "right") {
          p.kind = Pulse::Kind::RightMover;
        } else if (v == "velocity") {
          p.kind = Pulse::Kind::Velocity;
        } else {
          throw ValidationError("pulse kind must be left, right or velocity");
        }
      } else {
        throw ValidationError("unknown pulse field '" + k + "'");
      }
    } catch (const std::logic_error&) {
      throw ValidationError("bad value in pulse field '" + kv + "'");
    }
  }
  if (!has_edge || !has_center || !has_width) throw ValidationError("pulse needs edge, center and width");
  return p;
}

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

// ---------------------------------------------------------------------------

int run_check_ggcc(const std::string& graph_arg, bool certificates) {
  const auto g = load_graph(graph_arg);
  const NormalizedGraph ng = normalize(g.input.graph, g.input.omega);
  const GgccVerdict v = check_ggcc(ng, certificates);
  json criteria;
  for (const auto& [c, ok] : v.criteria) criteria[to_string(c)] = ok;
  json res{{"holds", v.holds}, {"criteria_agree", v.criteria_agree}, {"criteria", criteria},
           {"L", optional_number(v.ggcc_length)}, {"T_star", optional_number(v.optimal_time)}};
  if (v.violating_path) {
    res["witness"] = path_json(*v.violating_path);
    res["witness"]["kind"] = v.violating_path->periodic ? "cycle" : "exterior_path";
  } else {
    res["witness"] = nullptr;
  }
  if (certificates) {
    if (v.abp) {
      json abp = json::object();
      for (const auto& [e, vx] : *v.abp) abp[std::to_string(e)] = vx;
      res["abp"] = abp;
    }
    if (v.watershed) {
      json rivers = json::array();
      for (const auto& r : v.watershed->rivers) {
        json jr = path_json(r.path);
        jr["source_at_start"] = r.source_at_start;
        jr["source_at_end"] = r.source_at_end;
        rivers.push_back(jr);
      }
      res["watershed"] = rivers;
    }
    res["normalized_graph"] = json::parse(to_graph_json(ng.graph, ng.omega));
  }
  print(report("check-ggcc", g.text, res));
  return 0;
}

int run_optimal_time(const std::string& graph_arg) {
  const auto g = load_graph(graph_arg);
  const NormalizedGraph ng = normalize(g.input.graph, g.input.omega);
  json res{{"holds", check_forest(ng)}, {"L", optional_number(ggcc_length(ng))}};
  if (const auto t = optimal_watershed_time(ng)) {
    res["T_star"] = t->t_star;
    res["max_river"] = t->max_river;
    res["per_tree_budget"] = t->per_tree_budget;
  } else {
    res["T_star"] = nullptr;
  }
  print(report("optimal-time", g.text, res));
  return 0;
}

int run_quasimode(const std::string& graph_arg, const std::string& n_list, bool as_json) {
  const auto g = load_graph(graph_arg);
  const NormalizedGraph ng = normalize(g.input.graph, g.input.omega);
  const ViolatingPath vp = find_violating_path(ng);
  json rows = json::array();
  if (!as_json) {
    std::cout << "n,mu,q,l2_closed,l2_quadrature,grad_closed,grad_quadrature,defect_closed,defect_quadrature,"
                 "n_times_defect\n";
  }
  double sup = 0.0;
  for (int n : parse_int_list(n_list)) {
    Quasimode qm;
    try {
      qm = build_quasimode(ng, vp, n);
    } catch (const std::domain_error& e) {
      std::cerr << "skipping n = " << n << ": " << e.what() << "\n";
      continue;
    }
    const QuasimodeMetrics m = metrics(ng, qm);
    sup = std::max(sup, n * m.defect_sq.closed_form);
    if (as_json) {
      rows.push_back({{"n", n}, {"mu", qm.mu}, {"q", qm.q},
                      {"l2", {m.l2_norm_sq.closed_form, m.l2_norm_sq.quadrature}},
                      {"grad", {m.grad_norm_sq.closed_form, m.grad_norm_sq.quadrature}},
                      {"defect", {m.defect_sq.closed_form, m.defect_sq.quadrature}},
                      {"flux_residual", qm.flux_residual}});
    } else {
      std::printf("%d,%.17g,%lld,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", n, qm.mu,
                  static_cast<long long>(qm.q), m.l2_norm_sq.closed_form, m.l2_norm_sq.quadrature,
                  m.grad_norm_sq.closed_form, m.grad_norm_sq.quadrature, m.defect_sq.closed_form,
                  m.defect_sq.quadrature, n * m.defect_sq.closed_form);
    }
  }
  if (as_json) {
    print(report("quasimode", g.text,
                 {{"path", path_json(vp.path)}, {"rows", rows}, {"sup_n_defect", sup}}));
  }
  return 0;
}

int run_spectrum(const std::string& graph_arg, double kmax, bool with_omega, bool as_json) {
  const auto g = load_graph(graph_arg);
  const Spectrum s = eigenvalues(g.input.graph, kmax);
  for (const auto& w : s.warnings) std::cerr << "warning: " << w << "\n";
  const WeylCount weyl = weyl_count_check(g.input.graph, s, kmax);
  if (!weyl.within()) {
    std::cerr << "warning: counted " << weyl.counted << " eigenvalues, Weyl predicts " << weyl.predicted << "\n";
  }
  json rows = json::array();
  if (!as_json) std::cout << "k,lambda,multiplicity,obs_mass_min\n";
  for (const auto& p : s.pairs) {
    const double mass = with_omega ? min_observation_mass(g.input.graph, p, g.input.omega) : 0.0;
    if (as_json) {
      json r{{"k", p.k}, {"lambda", p.lambda}, {"multiplicity", p.multiplicity}};
      if (with_omega) r["obs_mass_min"] = mass;
      rows.push_back(r);
    } else if (with_omega) {
      std::printf("%.15g,%.15g,%d,%.6g\n", p.k, p.lambda, p.multiplicity, mass);
    } else {
      std::printf("%.15g,%.15g,%d,\n", p.k, p.lambda, p.multiplicity);
    }
  }
  if (as_json) {
    print(report("spectrum", g.text,
                 {{"eigenvalues", rows}, {"weyl", {{"counted", weyl.counted}, {"predicted", weyl.predicted}}},
                  {"constant_mode", s.constant_mode}, {"warnings", s.warnings}}));
  }
  return 0;
}

int run_simulate(const std::string& graph_arg, const std::vector<std::string>& pulse_specs, double T, double dt,
                 const std::string& trace_path) {
  const auto g = load_graph(graph_arg);
  std::vector<Pulse> pulses;
  for (const auto& s : pulse_specs) pulses.push_back(parse_pulse(s));
  for (const auto& p : pulses) {
    if (!g.input.graph.has_edge_id(p.edge)) throw ValidationError("pulse on unknown edge " + std::to_string(p.edge));
  }
  const WaveState init = make_state(g.input.graph, pulses);
  const auto rows = trace(g.input.graph, init, g.input.omega, T, dt > 0 ? dt : std::max(T, 1e-9));
  if (!trace_path.empty()) {
    std::ofstream out(trace_path);
    if (!out) throw ValidationError("cannot write trace file '" + trace_path + "'");
    out << "t";
    for (const auto& e : g.input.graph.edges()) out << ",energy_edge_" << e.id;
    out << ",observed\n";
    out.precision(17);
    for (const auto& r : rows) {
      out << r.t;
      for (double e : r.edge_energy) out << "," << e;
      out << "," << r.observed << "\n";
    }
  }
  double e_end = 0.0;
  for (double e : rows.back().edge_energy) e_end += e;
  print(report("simulate", g.text,
               {{"T", T}, {"initial_energy", energy(init)}, {"final_energy", e_end},
                {"observed_energy", rows.back().observed}, {"samples", rows.size()}}));
  return 0;
}

int run_observability(const std::string& graph_arg, double T, const std::string& family_name) {
  const auto g = load_graph(graph_arg);
  ProbeFamily family = ProbeFamily::All;
  if (family_name == "grid") {
    family = ProbeFamily::Grid;
  } else if (family_name == "adversarial") {
    family = ProbeFamily::Adversarial;
  } else if (family_name != "all") {
    throw ValidationError("probe family must be all, grid or adversarial");
  }
  const ObservabilityResult r = observability_ratio(g.input.graph, g.input.omega, T, family);
  json pulses = json::array();
  for (const auto& p : r.argmin.pulses) {
    pulses.push_back({{"edge", p.edge}, {"center", p.center}, {"width", p.width}, {"kind", to_string(p.kind)},
                      {"amp", p.amplitude}});
  }
  print(report("observability", g.text,
               {{"T", T}, {"ratio", r.ratio}, {"probes", r.probes},
                {"argmin_probe", {{"label", r.argmin.label}, {"pulses", pulses}}},
                {"note", "pulses live on the normalized graph"}}));
  return 0;
}

int run_cf(const std::string& expr, int depth) {
  const Number alpha = parse_number(expr);
  const ContinuedFraction cf = continued_fraction(alpha, depth);
  json conv = json::array();
  for (const auto& c : convergents(alpha, cf)) {
    conv.push_back({{"p", c.p}, {"q", c.q}, {"error", c.error}, {"quality", c.quality}});
  }
  const auto stat = badly_approximable_statistic(alpha, depth);
  print(report("diophantine cf", expr,
               {{"value", alpha.value.str(30)},
                {"quotients", cf.quotients()},
                {"rational", cf.rational},
                {"precision_exhausted", cf.precision_exhausted},
                {"convergents", conv},
                {"statistic",
                 {{"min_quality", stat.min_quality}, {"max_quotient", stat.max_quotient}, {"caveat", stat.kCaveat}}},
                {"irrationality_exponent_estimate", irrationality_exponent_estimate(alpha, depth)}}));
  return 0;
}

int run_simdir(const std::vector<std::string>& exprs, std::int64_t N) {
  std::vector<double> alphas;
  std::string joined;
  for (const auto& e : exprs) {
    alphas.push_back(parse_number(e).to_double());
    joined += e + " ";
  }
  const auto s = dirichlet_simultaneous(alphas, N);
  print(report("diophantine simdir", joined + std::to_string(N),
               {{"q", s.q}, {"p", s.p}, {"N", s.N}, {"errors", s.errors}, {"rescaled", s.rescaled}}));
  return 0;
}

int run_scenario(const std::string& name, const std::vector<std::string>& params, const std::string& out_path) {
  const Scenario s = make_scenario(name, params);
  const std::string text = to_graph_json(s.graph, s.omega);
  if (out_path.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream out(out_path);
    if (!out) throw ValidationError("cannot write '" + out_path + "'");
    out << text << "\n";
    std::cerr << s.note << " -> " << out_path << "\n";
  }
  return 0;
}

constexpr const char* kGraphHelp = "graph JSON: a file path, '-' for stdin, or the JSON text itself";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Controllability workbench for PDEs on metric graphs"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string graph_arg;
  bool certificates = false;
  auto* check = app.add_subcommand("check-ggcc", "Decide the geometric control condition");
  check->add_option("graph", graph_arg, kGraphHelp)->required();
  check->add_flag("--certificates", certificates, "include ABP map, watershed and normalized graph");

  auto* opt = app.add_subcommand("optimal-time", "Watershed length L and optimal time T*");
  opt->add_option("graph", graph_arg, kGraphHelp)->required();

  std::string n_list = "4,8,16,32,64,128,256,512";
  bool as_json = false;
  auto* qm = app.add_subcommand("quasimode", "Quasimodes along an uncontrolled path");
  qm->add_option("graph", graph_arg, kGraphHelp)->required();
  qm->add_option("--n-list", n_list, "comma separated values of n");
  qm->add_flag("--json", as_json, "JSON report instead of CSV");
  qm->add_flag("--csv", "CSV output (default)");

  double kmax = 20.0;
  bool with_omega = false;
  auto* spec = app.add_subcommand("spectrum", "Eigenvalues of the graph Laplacian");
  spec->add_option("graph", graph_arg, kGraphHelp)->required();
  spec->add_option("--kmax", kmax, "largest wavenumber")->check(CLI::PositiveNumber);
  spec->add_flag("--omega", with_omega, "report the least observation mass per eigenspace");
  spec->add_flag("--json", as_json, "JSON report instead of CSV");
  spec->add_flag("--csv", "CSV output (default)");

  std::vector<std::string> pulse_specs;
  double T = 1.0, dt = 0.0;
  std::string trace_path;
  auto* sim = app.add_subcommand("simulate", "Exact wave evolution from box pulses");
  sim->add_option("graph", graph_arg, kGraphHelp)->required();
  sim->add_option("--pulse", pulse_specs, "edge=ID,center=X,width=W[,kind=left|right|velocity][,amp=A]")
      ->required();
  sim->add_option("--T", T, "final time")->check(CLI::NonNegativeNumber);
  sim->add_option("--dt", dt, "trace sampling step");
  sim->add_option("--trace", trace_path, "CSV trace output");

  std::string family = "all";
  auto* obs = app.add_subcommand("observability", "Observability ratio over the probe family");
  obs->add_option("graph", graph_arg, kGraphHelp)->required();
  obs->add_option("--T", T, "observation time")->required()->check(CLI::NonNegativeNumber);
  obs->add_option("--family", family, "all, grid or adversarial");

  auto* dio = app.add_subcommand("diophantine", "Rational approximation tools");
  dio->require_subcommand(1);
  std::string expr;
  int depth = 20;
  auto* cf = dio->add_subcommand("cf", "Continued fraction and convergents");
  cf->add_option("alpha", expr, "expression such as sqrt(2), e, 355/113")->required();
  cf->add_option("--depth", depth)->check(CLI::PositiveNumber);
  std::vector<std::string> alphas;
  std::int64_t N = 10;
  auto* sd = dio->add_subcommand("simdir", "Simultaneous Dirichlet approximation");
  sd->add_option("alphas", alphas)->required();
  sd->add_option("--N", N)->check(CLI::PositiveNumber);

  std::string scenario_name, out_path;
  std::vector<std::string> scenario_params;
  auto* sc = app.add_subcommand("scenario", "Emit a named example graph as JSON");
  std::string names;
  for (const auto& [n, usage] : scenario_usage()) names += "\n  " + usage;
  sc->footer("Scenarios:" + names);
  sc->add_option("name", scenario_name)->required();
  sc->add_option("params", scenario_params);
  sc->add_option("-o,--output", out_path, "write to a file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*check) return run_check_ggcc(graph_arg, certificates);
    if (*opt) return run_optimal_time(graph_arg);
    if (*qm) return run_quasimode(graph_arg, n_list, as_json);
    if (*spec) return run_spectrum(graph_arg, kmax, with_omega, as_json);
    if (*sim) return run_simulate(graph_arg, pulse_specs, T, dt, trace_path);
    if (*obs) return run_observability(graph_arg, T, family);
    if (*cf) return run_cf(expr, depth);
    if (*sd) return run_simdir(alphas, N);
    if (*sc) return run_scenario(scenario_name, scenario_params, out_path);
  } catch (const NumericalGuardError& e) {
    std::cerr << "numerical guard: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
