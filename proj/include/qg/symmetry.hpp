#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qg/graph.hpp"

namespace qg {

/// Finite group given by its multiplication table.
class FiniteGroup {
 public:
  FiniteGroup() = default;
  FiniteGroup(std::vector<std::string> elements,
              std::vector<std::vector<int>> table);

  std::size_t order() const { return elements_.size(); }
  const std::vector<std::string>& elements() const { return elements_; }
  int identity() const { return identity_; }
  int mul(int a, int b) const { return table_[a][b]; }
  int inv(int a) const { return inverse_[a]; }
  int index_of(const std::string& id) const;

 private:
  void verify();
  std::vector<std::string> elements_;
  std::vector<std::vector<int>> table_;
  std::vector<int> inverse_;
  int identity_ = -1;
};

/// Image of a directed edge: target edge plus orientation flip.
struct EdgeImage {
  std::size_t edge = 0;
  bool reversed = false;
};

/// Group acting on a metric graph by vertex and edge permutations.
struct GraphAction {
  FiniteGroup group;
  /// vertex_perm[element][vertex index] -> vertex index
  std::vector<std::vector<std::size_t>> vertex_perm;
  /// edge_perm[element][edge index] -> image
  std::vector<std::vector<EdgeImage>> edge_perm;
};

struct ActionReport {
  bool ok = true;
  std::vector<std::string> problems;
};

/// Checks all GraphAction invariants: incidence, lengths, conditions,
/// composition compatibility, and (for extended graphs) lead orbits.
ActionReport verify_action(const ExtendedGraph& g, const GraphAction& a);

struct FixedPointSet {
  std::vector<std::size_t> vertices;
  /// Edges mapped to themselves with reversal; the fixed point is x = L/2.
  std::vector<std::size_t> reversed_edges;
  /// Edges mapped to themselves preserving orientation (fixed pointwise).
  std::vector<std::size_t> pointwise_edges;
};

FixedPointSet fixed_points(const MetricGraph& g, const GraphAction& a,
                           int element);

/// One-dimensional (+1/-1)-valued representation of a subgroup.
struct Rep1D {
  std::vector<int> subgroup;       // element indices, must be closed
  std::map<int, int> values;       // element index -> +1 / -1

  int value(int element) const;
  void validate(const FiniteGroup& g) const;
};

struct QuotientResult {
  ExtendedGraph quotient;
  /// quotient edge id -> (parent edge id, "whole" | "half")
  std::map<std::string, std::pair<std::string, std::string>> edge_provenance;
  /// quotient boundary (midpoint) vertex id -> description of the fixed
  /// point and the imposed condition
  std::map<std::string, std::string> boundary_provenance;
  /// parent vertex id -> quotient vertex id (orbit representative image)
  std::map<std::string, std::string> vertex_map;
  /// parent edges on which the representation forces f == 0
  std::vector<std::string> dropped_edges;
};

/// Quotient of g by the representation's subgroup: fundamental domain of
/// lexicographically-smallest orbit representatives, reversal-fixed edges
/// cut at their midpoints, boundary conditions from the fixed-point rule
/// (-1 -> Dirichlet, +1 -> Neumann).
QuotientResult quotient(const ExtendedGraph& g, const GraphAction& a,
                        const Rep1D& rep);

/// Character of the induced representation Ind_H^G rep, one integer per
/// group element.
std::vector<int> induced_character(const FiniteGroup& g, const Rep1D& rep);

/// Character equality of the two induced representations (equivalent to
/// representation equivalence for finite groups).
bool induction_equivalent(const FiniteGroup& g, const Rep1D& rep1,
                          const Rep1D& rep2);

/// The built-in dihedral example: a D4-symmetric parent graph with three
/// edge lengths (a, b, c), its 8-element action, the two subgroup
/// representations whose induced characters agree, and the 2x2
/// transplantation matrix between the quotient pair.
struct D4Example {
  ExtendedGraph parent;  // with 8 symmetric leads
  GraphAction action;
  Rep1D rep1;  // subgroup {e, r_u, r_v, s^2}
  Rep1D rep2;  // subgroup {e, r_x, r_y, s^2}
  Eigen::Matrix2cd transplantation;
  std::vector<std::string> lead_vertices;  // parent lead attachment order
};

D4Example builtin_d4_example(double a = 1.0, double b = std::sqrt(2.0),
                             double c = std::sqrt(3.0));

/// Symmetry description file (JSON): group, action, and named reps.
struct SymmetryFile {
  GraphAction action;
  std::map<std::string, Rep1D> reps;
};

SymmetryFile load_symmetry(const std::string& path, const ExtendedGraph& g);
SymmetryFile parse_symmetry(const std::string& json_text,
                            const ExtendedGraph& g);

}  // namespace qg
