#include "qg/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <sstream>

#include <json.hpp>

namespace qg {

using nlohmann::json;

MetricGraph::MetricGraph(std::vector<Vertex> vertices, std::vector<Edge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (!vindex_.emplace(vertices_[i].id, i).second)
      throw ValidationError("duplicate vertex id '" + vertices_[i].id + "'");
  }
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (!eindex_.emplace(edges_[i].id, i).second)
      throw ValidationError("duplicate edge id '" + edges_[i].id + "'");
  }
  validate();
}

void MetricGraph::validate() const {
  for (const Edge& e : edges_) {
    if (!vindex_.count(e.from))
      throw ValidationError("edge '" + e.id + "': unknown vertex '" + e.from +
                            "'");
    if (!vindex_.count(e.to))
      throw ValidationError("edge '" + e.id + "': unknown vertex '" + e.to +
                            "'");
    if (!(e.length > 0.0) || !std::isfinite(e.length))
      throw ValidationError("edge '" + e.id +
                            "': length must be positive and finite");
  }
}

std::size_t MetricGraph::vertex_index(const std::string& id) const {
  auto it = vindex_.find(id);
  if (it == vindex_.end())
    throw ValidationError("unknown vertex '" + id + "'");
  return it->second;
}

std::size_t MetricGraph::edge_index(const std::string& id) const {
  auto it = eindex_.find(id);
  if (it == eindex_.end()) throw ValidationError("unknown edge '" + id + "'");
  return it->second;
}

std::size_t MetricGraph::degree(std::size_t vertex_idx) const {
  const std::string& id = vertices_.at(vertex_idx).id;
  std::size_t d = 0;
  for (const Edge& e : edges_) {
    if (e.from == id) ++d;
    if (e.to == id) ++d;
  }
  return d;
}

double MetricGraph::total_length() const {
  double s = 0.0;
  for (const Edge& e : edges_) s += e.length;
  return s;
}

bool MetricGraph::connected() const {
  if (vertices_.empty()) return true;
  std::vector<char> seen(vertices_.size(), 0);
  std::queue<std::size_t> q;
  q.push(0);
  seen[0] = 1;
  while (!q.empty()) {
    std::size_t v = q.front();
    q.pop();
    for (const Edge& e : edges_) {
      std::size_t a = vindex_.at(e.from), b = vindex_.at(e.to);
      if (a == v && !seen[b]) seen[b] = 1, q.push(b);
      if (b == v && !seen[a]) seen[a] = 1, q.push(a);
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

bool MetricGraph::all_neumann() const {
  return std::all_of(vertices_.begin(), vertices_.end(), [](const Vertex& v) {
    return v.condition == VertexCondition::Neumann;
  });
}

bool MetricGraph::operator==(const MetricGraph& other) const {
  if (vertices_.size() != other.vertices_.size() ||
      edges_.size() != other.edges_.size())
    return false;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (vertices_[i].id != other.vertices_[i].id ||
        vertices_[i].condition != other.vertices_[i].condition)
      return false;
  }
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge &a = edges_[i], &b = other.edges_[i];
    if (a.id != b.id || a.from != b.from || a.to != b.to ||
        a.length != b.length)
      return false;
  }
  return true;
}

ExtendedGraph::ExtendedGraph(MetricGraph g, std::vector<Lead> leads)
    : graph_(std::move(g)), leads_(std::move(leads)) {
  validate();
}

void ExtendedGraph::validate() {
  std::unordered_map<std::string, int> ids;
  for (const Lead& l : leads_) {
    if (++ids[l.id] > 1)
      throw ValidationError("duplicate lead id '" + l.id + "'");
    std::size_t v = graph_.vertex_index(l.vertex);  // throws if unknown
    if (graph_.vertices()[v].condition != VertexCondition::Dirichlet) continue;
    throw ValidationError("lead '" + l.id +
                          "': lead requires Neumann attachment");
  }
  for (std::size_t v = 0; v < graph_.vertices().size(); ++v) {
    std::size_t n = lead_count_at(v);
    if (n > 0 && graph_.degree(v) + n < 2)
      warnings_.push_back("marked vertex '" + graph_.vertices()[v].id +
                          "' has total degree < 2");
  }
}

std::size_t ExtendedGraph::lead_count_at(std::size_t vertex_idx) const {
  const std::string& id = graph_.vertices().at(vertex_idx).id;
  std::size_t n = 0;
  for (const Lead& l : leads_)
    if (l.vertex == id) ++n;
  return n;
}

bool ExtendedGraph::operator==(const ExtendedGraph& other) const {
  if (!(graph_ == other.graph_) || leads_.size() != other.leads_.size())
    return false;
  for (std::size_t i = 0; i < leads_.size(); ++i) {
    if (leads_[i].id != other.leads_[i].id ||
        leads_[i].vertex != other.leads_[i].vertex)
      return false;
  }
  return true;
}

namespace {

void reject_unknown_keys(const json& obj,
                         std::initializer_list<const char*> allowed,
                         const std::string& where) {
  if (!obj.is_object())
    throw ParseError(where + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || it.key() == k;
    if (!ok)
      throw ParseError(where + ": unknown key '" + it.key() + "'");
  }
}

const json& require(const json& obj, const char* key,
                    const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw ParseError(where + ": missing key '" + std::string(key) + "'");
  return *it;
}

}  // namespace

ExtendedGraph parse_graph(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("graph file: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("graph file: top level must be an object");
  reject_unknown_keys(doc, {"vertices", "edges", "leads"}, "graph file");

  std::vector<Vertex> vertices;
  for (const auto& jv : require(doc, "vertices", "graph file")) {
    reject_unknown_keys(jv, {"id", "condition"}, "vertex");
    Vertex v;
    v.id = require(jv, "id", "vertex").get<std::string>();
    std::string cond = require(jv, "condition", "vertex '" + v.id + "'");
    if (cond == "neumann")
      v.condition = VertexCondition::Neumann;
    else if (cond == "dirichlet")
      v.condition = VertexCondition::Dirichlet;
    else
      throw ParseError("vertex '" + v.id + "': condition must be 'neumann' or 'dirichlet'");
    vertices.push_back(std::move(v));
  }

  std::vector<Edge> edges;
  for (const auto& je : require(doc, "edges", "graph file")) {
    reject_unknown_keys(je, {"id", "from", "to", "length"}, "edge");
    Edge e;
    e.id = require(je, "id", "edge").get<std::string>();
    e.from = require(je, "from", "edge '" + e.id + "'").get<std::string>();
    e.to = require(je, "to", "edge '" + e.id + "'").get<std::string>();
    const json& jl = require(je, "length", "edge '" + e.id + "'");
    if (!jl.is_number())
      throw ParseError("edge '" + e.id + "': length must be a number");
    e.length = jl.get<double>();
    edges.push_back(std::move(e));
  }

  std::vector<Lead> leads;
  if (doc.contains("leads")) {
    for (const auto& jl : doc["leads"]) {
      reject_unknown_keys(jl, {"id", "vertex"}, "lead");
      Lead l;
      l.id = require(jl, "id", "lead").get<std::string>();
      l.vertex = require(jl, "vertex", "lead '" + l.id + "'").get<std::string>();
      leads.push_back(std::move(l));
    }
  }

  return ExtendedGraph(MetricGraph(std::move(vertices), std::move(edges)),
                       std::move(leads));
}

ExtendedGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_graph(ss.str());
}

std::string graph_to_json(const ExtendedGraph& g) {
  json doc;
  doc["vertices"] = json::array();
  for (const Vertex& v : g.graph().vertices()) {
    doc["vertices"].push_back(
        {{"id", v.id},
         {"condition",
          v.condition == VertexCondition::Neumann ? "neumann" : "dirichlet"}});
  }
  doc["edges"] = json::array();
  for (const Edge& e : g.graph().edges()) {
    doc["edges"].push_back({{"id", e.id},
                            {"from", e.from},
                            {"to", e.to},
                            {"length", e.length}});
  }
  doc["leads"] = json::array();
  for (const Lead& l : g.leads())
    doc["leads"].push_back({{"id", l.id}, {"vertex", l.vertex}});
  return doc.dump(2) + "\n";
}

void serialize_graph(const ExtendedGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  out << graph_to_json(g);
  if (!out) throw ParseError("I/O failure writing '" + path + "'");
}

ExtendedGraph attach_leads(const MetricGraph& g,
                           const std::vector<std::string>& vertices) {
  std::vector<Lead> leads;
  std::unordered_map<std::string, std::size_t> count;
  for (const std::string& vid : vertices) ++count[vid];
  std::size_t n = 0;
  for (const std::string& vid : vertices) {
    std::size_t vi = g.vertex_index(vid);
    if (g.vertices()[vi].condition == VertexCondition::Dirichlet)
      throw ValidationError("attach_leads: lead requires Neumann attachment ('" +
                            vid + "')");
    if (g.degree(vi) + count[vid] < 2)
      throw ValidationError("attach_leads: vertex '" + vid +
                            "' would have total degree < 2");
    leads.push_back({"lead" + std::to_string(n++), vid});
  }
  return ExtendedGraph(g, std::move(leads));
}

}  // namespace qg
