#include "graphctl/scenarios.hpp"

#include <sstream>

#include "graphctl/numbers.hpp"

namespace graphctl {

namespace {

double evaluate(const std::string& e) {
  try {
    return parse_number(e).to_double();
  } catch (const std::invalid_argument& err) {
    throw ValidationError(err.what());
  }
}

Edge make_edge(int id, int tail, int head, const Length& len) {
  Edge e;
  e.id = id;
  e.tail = tail;
  e.head = head;
  e.length = len.value;
  e.length_expr = len.expr;
  return e;
}

std::string show(const Length& l) {
  if (!l.expr.empty()) return l.expr;
  std::ostringstream os;
  os << l.value;
  return os.str();
}

Scenario finish(Scenario s) {
  require_valid(s.graph, s.omega);
  return s;
}

BoundaryCondition bc_param(const std::string& s) {
  try {
    return boundary_condition_from_string(s);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
}

}  // namespace

Length::Length(const char* e) : value(evaluate(e)), expr(e) {}
Length::Length(const std::string& e) : value(evaluate(e)), expr(e) {}

Scenario interval_scenario(Length len, BoundaryCondition left, BoundaryCondition right,
                           std::optional<Interval> omega) {
  Scenario s;
  s.name = "interval";
  s.note = "interval of length " + show(len);
  s.graph = MetricGraph({{0, left}, {1, right}}, {make_edge(0, 0, 1, len)});
  if (omega) s.omega.add(0, omega->a, omega->b);
  return finish(std::move(s));
}

Scenario star_scenario(const std::vector<Length>& lengths, const std::vector<int>& controlled) {
  if (lengths.size() < 2) throw ValidationError("star: need at least two edges");
  Scenario s;
  s.name = "star";
  std::vector<Vertex> vs{{0, BoundaryCondition::Interior}};
  std::vector<Edge> es;
  std::string ls;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    vs.push_back({static_cast<int>(i) + 1, BoundaryCondition::Dirichlet});
    es.push_back(make_edge(static_cast<int>(i), 0, static_cast<int>(i) + 1, lengths[i]));
    ls += (i ? ", " : "") + show(lengths[i]);
  }
  s.note = "star with edge lengths (" + ls + ")";
  s.graph = MetricGraph(std::move(vs), std::move(es));
  for (int c : controlled) {
    if (c < 0 || c >= static_cast<int>(lengths.size())) throw ValidationError("star: controlled edge out of range");
    s.omega.add_whole_edge(s.graph, c);
  }
  return finish(std::move(s));
}

Scenario x_graph(Length lt, Length lb, XProfile profile, bool whole_edges) {
  Scenario s;
  s.name = profile == XProfile::Mixed ? "x_mixed" : "x_graph";
  const auto tip_bc = profile == XProfile::Mixed ? BoundaryCondition::Neumann : BoundaryCondition::Dirichlet;
  s.graph = MetricGraph({{0, BoundaryCondition::Interior},
                         {1, tip_bc},
                         {2, tip_bc},
                         {3, BoundaryCondition::Dirichlet},
                         {4, BoundaryCondition::Dirichlet}},
                        {make_edge(0, 1, 0, lb), make_edge(1, 2, 0, lb), make_edge(2, 0, 3, lt),
                         make_edge(3, 0, 4, lt)});
  s.note = "X graph, l_t = " + show(lt) + ", l_b = " + show(lb) +
           (profile == XProfile::Mixed ? ", Neumann on edges 0 and 1" : ", Dirichlet tips");
  if (whole_edges) {
    s.omega.add_whole_edge(s.graph, 0);
    s.omega.add_whole_edge(s.graph, 2);
  } else {
    s.omega.add(0, lb.value / 4, 3 * lb.value / 4);
    s.omega.add(2, lt.value / 4, 3 * lt.value / 4);
  }
  return finish(std::move(s));
}

Scenario bot_graph(Length l1, Length l2, Length l3, double margin) {
  if (!(margin > 0)) throw ValidationError("bot_graph: margin must be positive");
  Scenario s;
  s.name = "bot_graph";
  s.note = "three-branch star, uncontrolled lengths (" + show(l1) + ", " + show(l2) + ", " + show(l3) + ")";
  const Length ls[3] = {l1, l2, l3};
  std::vector<Vertex> vs{{0, BoundaryCondition::Interior}};
  std::vector<Edge> es;
  for (int i = 0; i < 3; ++i) {
    vs.push_back({i + 1, BoundaryCondition::Dirichlet});
    Length full(ls[i].value + margin);
    es.push_back(make_edge(i, 0, i + 1, full));
  }
  s.graph = MetricGraph(std::move(vs), std::move(es));
  for (int i = 0; i < 3; ++i) s.omega.add(i, ls[i].value, ls[i].value + margin);
  return finish(std::move(s));
}

Scenario triangle_scenario(Length a, Length b, Length c) {
  Scenario s;
  s.name = "triangle";
  s.note = "uncontrolled triangle (" + show(a) + ", " + show(b) + ", " + show(c) + ") with a controlled pendant";
  s.graph = MetricGraph({{0, BoundaryCondition::Interior},
                         {1, BoundaryCondition::Interior},
                         {2, BoundaryCondition::Interior},
                         {3, BoundaryCondition::Dirichlet}},
                        {make_edge(0, 0, 1, a), make_edge(1, 1, 2, b), make_edge(2, 2, 0, c),
                         make_edge(3, 0, 3, Length(1.0))});
  s.omega.add_whole_edge(s.graph, 3);
  return finish(std::move(s));
}

namespace {

std::vector<Length> lengths_from(const std::vector<std::string>& params, std::size_t from, std::size_t count) {
  std::vector<Length> out;
  for (std::size_t i = from; i < from + count && i < params.size(); ++i) out.emplace_back(params[i]);
  return out;
}

std::vector<int> int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw ValidationError("bad integer '" + item + "'");
    }
  }
  return out;
}

}  // namespace

Scenario make_scenario(const std::string& name, const std::vector<std::string>& p) {
  auto need = [&](std::size_t lo, std::size_t hi) {
    if (p.size() < lo || p.size() > hi) {
      throw ValidationError("scenario " + name + ": expected " + std::to_string(lo) + ".." + std::to_string(hi) +
                            " parameters, got " + std::to_string(p.size()));
    }
  };
  if (name == "interval") {
    need(1, 5);
    const auto left = p.size() > 1 ? bc_param(p[1]) : BoundaryCondition::Dirichlet;
    const auto right = p.size() > 2 ? bc_param(p[2]) : BoundaryCondition::Dirichlet;
    std::optional<Interval> om;
    if (p.size() == 5) om = Interval{evaluate(p[3]), evaluate(p[4])};
    if (p.size() == 4) throw ValidationError("scenario interval: omega needs both ends");
    return interval_scenario(Length(p[0]), left, right, om);
  }
  if (name == "star") {
    // star N l_1 ... l_N [controlled=i,j]
    need(1, 64);
    int n = 0;
    try {
      n = std::stoi(p[0]);
    } catch (const std::exception&) {
      throw ValidationError("scenario star: first parameter is the number of edges");
    }
    if (n < 2) throw ValidationError("scenario star: need at least two edges");
    std::vector<Length> ls = lengths_from(p, 1, n);
    while (static_cast<int>(ls.size()) < n) ls.emplace_back(1.0);
    std::vector<int> controlled{0};
    if (p.size() > static_cast<std::size_t>(n) + 1) controlled = int_list(p[n + 1]);
    return star_scenario(ls, controlled);
  }
  if (name == "x_graph" || name == "x_mixed") {
    need(0, 3);
    const Length lt = p.size() > 0 ? Length(p[0]) : Length("sqrt(2)");
    const Length lb = p.size() > 1 ? Length(p[1]) : Length(1.0);
    XProfile profile = name == "x_mixed" ? XProfile::Mixed : XProfile::Dirichlet;
    bool whole = true;
    if (p.size() > 2) {
      if (p[2] == "mixed") {
        profile = XProfile::Mixed;
      } else if (p[2] == "dirichlet") {
        profile = XProfile::Dirichlet;
      } else if (p[2] == "inner") {
        whole = false;
      } else {
        throw ValidationError("scenario x_graph: third parameter is dirichlet, mixed or inner");
      }
    }
    return x_graph(lt, lb, profile, whole);
  }
  if (name == "bot_graph") {
    need(3, 4);
    const double margin = p.size() == 4 ? evaluate(p[3]) : 1.0;
    return bot_graph(Length(p[0]), Length(p[1]), Length(p[2]), margin);
  }
  if (name == "triangle") {
    need(0, 3);
    const auto ls = lengths_from(p, 0, 3);
    return triangle_scenario(ls.size() > 0 ? ls[0] : Length(1.0), ls.size() > 1 ? ls[1] : Length(1.0),
                             ls.size() > 2 ? ls[2] : Length("sqrt(2)"));
  }
  throw ValidationError("unknown scenario '" + name + "'");
}

std::vector<std::pair<std::string, std::string>> scenario_usage() {
  return {
      {"interval", "interval L [bc_left bc_right [a b]]"},
      {"star", "star N l_1 ... l_N [controlled edges, e.g. 0,2]"},
      {"x_graph", "x_graph [l_t l_b [dirichlet|mixed|inner]]"},
      {"x_mixed", "x_mixed [l_t l_b]"},
      {"bot_graph", "bot_graph l1 l2 l3 [margin]"},
      {"triangle", "triangle [a b c]"},
  };
}

std::vector<Scenario> scenario_catalog() {
  std::vector<Scenario> out;
  out.push_back(interval_scenario(1.0, BoundaryCondition::Dirichlet, BoundaryCondition::Dirichlet, Interval{0.2, 0.4}));
  out.push_back(interval_scenario(1.0, BoundaryCondition::Dirichlet, BoundaryCondition::Neumann));
  out.push_back(star_scenario({1.0, 1.0, "sqrt(2)"}, {0}));
  out.push_back(star_scenario({1.0, 1.0, 1.0}, {0, 1}));
  out.push_back(x_graph("sqrt(2)", 1.0));
  out.push_back(x_graph("3/2", 1.0));
  out.push_back(x_graph("e", 1.0, XProfile::Dirichlet, false));
  out.push_back(x_graph(1.0, 1.0, XProfile::Mixed));
  out.push_back(bot_graph(3.0, 2.0, 1.0));
  out.push_back(triangle_scenario());
  return out;
}

}  // namespace graphctl
