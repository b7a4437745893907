#include "qg/secular.hpp"

namespace qg {

namespace {

// One endpoint slot of the unknown vector: either an edge end or a lead.
// Provides (value, outgoing-derivative) coefficient pairs for the two
// unknowns attached to the slot.
struct Slot {
  bool is_lead = false;
  std::size_t index = 0;  // edge index or lead index
  bool at_to = false;     // edge end: false -> x=0 ('from'), true -> x=L
};

struct Assembler {
  const MetricGraph& g;
  Complex k;
  std::size_t n_leads;
  Eigen::MatrixXcd A;
  Eigen::MatrixXcd B;
  std::size_t row = 0;

  Assembler(const MetricGraph& graph, Complex kk, std::size_t leads)
      : g(graph), k(kk), n_leads(leads) {
    const std::size_t n = 2 * g.edges().size() + n_leads;
    A = Eigen::MatrixXcd::Zero(n, n);
    B = Eigen::MatrixXcd::Zero(n, n_leads);
  }

  // Adds c * value(slot) to the current row.
  void add_value(const Slot& s, Complex c) {
    const Complex I(0.0, 1.0);
    if (s.is_lead) {
      // f_l(0) = a_in + a_out
      A(row, 2 * g.edges().size() + s.index) += c;
      B(row, s.index) -= c;
    } else {
      const Edge& e = g.edges()[s.index];
      Complex E = std::exp(I * k * e.length);
      if (!s.at_to) {
        A(row, 2 * s.index) += c;          // alpha
        A(row, 2 * s.index + 1) += c * E;  // beta
      } else {
        A(row, 2 * s.index) += c * E;
        A(row, 2 * s.index + 1) += c;
      }
    }
  }

  // Adds c * (derivative directed into the edge/lead) to the current row.
  void add_derivative(const Slot& s, Complex c) {
    const Complex I(0.0, 1.0);
    const Complex ik = I * k;
    if (s.is_lead) {
      // f_l'(0) = ik (a_out - a_in)
      A(row, 2 * g.edges().size() + s.index) += c * ik;
      B(row, s.index) += c * ik;
    } else {
      const Edge& e = g.edges()[s.index];
      Complex E = std::exp(I * k * e.length);
      if (!s.at_to) {
        A(row, 2 * s.index) += c * ik;
        A(row, 2 * s.index + 1) -= c * ik * E;
      } else {
        A(row, 2 * s.index) -= c * ik * E;
        A(row, 2 * s.index + 1) += c * ik;
      }
    }
  }
};

void assemble_rows(Assembler& as, const ExtendedGraph* eg) {
  const MetricGraph& g = as.g;
  for (std::size_t vi = 0; vi < g.vertices().size(); ++vi) {
    const Vertex& v = g.vertices()[vi];
    std::vector<Slot> slots;
    for (std::size_t ei = 0; ei < g.edges().size(); ++ei) {
      if (g.edges()[ei].from == v.id) slots.push_back({false, ei, false});
      if (g.edges()[ei].to == v.id) slots.push_back({false, ei, true});
    }
    if (eg) {
      for (std::size_t li = 0; li < eg->leads().size(); ++li)
        if (eg->leads()[li].vertex == v.id) slots.push_back({true, li, false});
    }
    if (slots.empty()) continue;
    if (v.condition == VertexCondition::Dirichlet) {
      for (const Slot& s : slots) {
        as.add_value(s, 1.0);
        ++as.row;
      }
    } else {
      for (std::size_t i = 0; i + 1 < slots.size(); ++i) {
        as.add_value(slots[i], 1.0);
        as.add_value(slots[i + 1], -1.0);
        ++as.row;
      }
      for (const Slot& s : slots) as.add_derivative(s, 1.0);
      ++as.row;
    }
  }
}

}  // namespace

SecularSystem assemble_secular(const MetricGraph& g, Complex k) {
  if (k == Complex(0.0, 0.0))
    throw NumericalError("assemble_secular: k = 0 is excluded");
  Assembler as(g, k, 0);
  assemble_rows(as, nullptr);
  return SecularSystem{k, std::move(as.A)};
}

ExtendedSystem assemble_extended(const ExtendedGraph& eg, Complex k) {
  if (k == Complex(0.0, 0.0))
    throw NumericalError("assemble_extended: k = 0 is excluded");
  Assembler as(eg.graph(), k, eg.leads().size());
  assemble_rows(as, &eg);
  return ExtendedSystem{k, std::move(as.A), std::move(as.B)};
}

}  // namespace qg
