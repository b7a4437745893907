#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "qg/util.hpp"

namespace qg {

enum class VertexCondition { Neumann, Dirichlet };

struct Vertex {
  std::string id;
  VertexCondition condition = VertexCondition::Neumann;
};

/// One-dimensional segment of finite positive length between two vertices.
/// The coordinate runs from 0 at `from` to `length` at `to`.
struct Edge {
  std::string id;
  std::string from;
  std::string to;
  double length = 0.0;
};

/// Finite metric graph. Immutable after construction; validate() checks the
/// structural invariants and builds the id -> index maps used everywhere else.
class MetricGraph {
 public:
  MetricGraph() = default;
  MetricGraph(std::vector<Vertex> vertices, std::vector<Edge> edges);

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }

  std::size_t vertex_index(const std::string& id) const;
  std::size_t edge_index(const std::string& id) const;
  bool has_vertex(const std::string& id) const {
    return vindex_.count(id) != 0;
  }

  /// Number of edge endpoints at v; a self-loop counts twice.
  std::size_t degree(std::size_t vertex_idx) const;

  double total_length() const;
  bool connected() const;
  bool all_neumann() const;

  bool operator==(const MetricGraph& other) const;

 private:
  void validate() const;
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, std::size_t> vindex_;
  std::unordered_map<std::string, std::size_t> eindex_;
};

/// Semi-infinite lead attached at a Neumann vertex; lead coordinate
/// x in [0, inf) with x = 0 at the attachment vertex.
struct Lead {
  std::string id;
  std::string vertex;
};

/// Compact graph plus leads. With no leads this degenerates to the compact
/// case. Attachment at a vertex of total degree < 2 is permitted but flagged
/// in `warnings` (the simplifying assumption of the scattering formalism).
class ExtendedGraph {
 public:
  ExtendedGraph() = default;
  explicit ExtendedGraph(MetricGraph g, std::vector<Lead> leads = {});

  const MetricGraph& graph() const { return graph_; }
  const std::vector<Lead>& leads() const { return leads_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  std::size_t lead_count_at(std::size_t vertex_idx) const;

  bool operator==(const ExtendedGraph& other) const;

 private:
  void validate();
  MetricGraph graph_;
  std::vector<Lead> leads_;
  std::vector<std::string> warnings_;
};

/// Parses the JSON graph description (strict: unknown keys are rejected).
ExtendedGraph load_graph(const std::string& path);
ExtendedGraph parse_graph(const std::string& json_text);

std::string graph_to_json(const ExtendedGraph& g);
void serialize_graph(const ExtendedGraph& g, const std::string& path);

/// Returns g extended by one lead per listed vertex (a vertex may be listed
/// more than once). Rejects Dirichlet or unknown vertices and attachments
/// that leave the marked vertex with total degree < 2.
ExtendedGraph attach_leads(const MetricGraph& g,
                           const std::vector<std::string>& vertices);

}  // namespace qg
