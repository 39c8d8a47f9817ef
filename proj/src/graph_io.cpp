#include "graphctl/graph_io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "graphctl/numbers.hpp"

namespace graphctl {

using nlohmann::json;

namespace {

double read_length(const json& j, std::string& expr) {
  if (j.is_number()) return j.get<double>();
  if (j.is_object() && j.contains("expr") && j["expr"].is_string()) {
    expr = j["expr"].get<std::string>();
    try {
      return parse_number(expr).to_double();
    } catch (const std::invalid_argument& e) {
      throw ValidationError(e.what());
    }
  }
  throw ValidationError("edge length must be a number or {\"expr\": ...}");
}

const json& field(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) throw ValidationError(std::string("missing field '") + key + "'");
  return obj[key];
}

}  // namespace

GraphInput parse_graph_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("graph JSON: ") + e.what());
  }
  try {
    std::vector<Vertex> vertices;
    for (const auto& v : field(doc, "vertices")) {
      Vertex vx;
      vx.id = field(v, "id").get<int>();
      if (v.contains("bc")) {
        try {
          vx.bc = boundary_condition_from_string(v["bc"].get<std::string>());
        } catch (const std::invalid_argument& e) {
          throw ValidationError(e.what());
        }
      }
      vertices.push_back(vx);
    }
    std::vector<Edge> edges;
    for (const auto& e : field(doc, "edges")) {
      Edge ed;
      ed.id = field(e, "id").get<int>();
      ed.tail = field(e, "from").get<int>();
      ed.head = field(e, "to").get<int>();
      ed.length = read_length(field(e, "length"), ed.length_expr);
      edges.push_back(ed);
    }
    GraphInput in{MetricGraph(std::move(vertices), std::move(edges)), {}};
    if (doc.contains("control")) {
      for (const auto& c : doc["control"]) {
        const int edge = field(c, "edge").get<int>();
        for (const auto& iv : field(c, "intervals")) {
          if (!iv.is_array() || iv.size() != 2) throw ValidationError("control interval must be [a, b]");
          in.omega.add(edge, iv[0].get<double>(), iv[1].get<double>());
        }
      }
    }
    require_valid(in.graph, in.omega);
    return in;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("graph JSON: ") + e.what());
  }
}

GraphInput load_graph_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open graph file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_graph_json(ss.str());
}

std::string to_graph_json(const MetricGraph& g, const ControlSet& omega, int indent) {
  json doc;
  doc["vertices"] = json::array();
  for (const auto& v : g.vertices()) doc["vertices"].push_back({{"id", v.id}, {"bc", to_string(v.bc)}});
  doc["edges"] = json::array();
  for (const auto& e : g.edges()) {
    json je{{"id", e.id}, {"from", g.vertex(g.tail_index(g.edge_index(e.id))).id},
            {"to", g.vertex(g.head_index(g.edge_index(e.id))).id}};
    if (e.length_expr.empty()) {
      je["length"] = e.length;
    } else {
      je["length"] = {{"expr", e.length_expr}};
    }
    doc["edges"].push_back(je);
  }
  doc["control"] = json::array();
  for (const auto& [edge, ivs] : omega.by_edge()) {
    json arr = json::array();
    for (const auto& iv : ivs) arr.push_back({iv.a, iv.b});
    doc["control"].push_back({{"edge", edge}, {"intervals", arr}});
  }
  return doc.dump(indent);
}

std::string digest(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace graphctl
