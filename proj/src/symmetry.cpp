#include "qg/symmetry.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace qg {

using nlohmann::json;

FiniteGroup::FiniteGroup(std::vector<std::string> elements,
                         std::vector<std::vector<int>> table)
    : elements_(std::move(elements)), table_(std::move(table)) {
  verify();
}

void FiniteGroup::verify() {
  const int n = static_cast<int>(elements_.size());
  if (n == 0) throw ValidationError("group: empty element list");
  {
    std::set<std::string> ids(elements_.begin(), elements_.end());
    if (static_cast<int>(ids.size()) != n)
      throw ValidationError("group: duplicate element ids");
  }
  if (static_cast<int>(table_.size()) != n)
    throw ValidationError("group: table must be |G| x |G|");
  for (const auto& row : table_) {
    if (static_cast<int>(row.size()) != n)
      throw ValidationError("group: table must be |G| x |G|");
    for (int x : row)
      if (x < 0 || x >= n)
        throw ValidationError("group: table entry out of range");
  }
  identity_ = -1;
  for (int e = 0; e < n; ++e) {
    bool is_id = true;
    for (int x = 0; x < n; ++x)
      is_id = is_id && table_[e][x] == x && table_[x][e] == x;
    if (is_id) {
      identity_ = e;
      break;
    }
  }
  if (identity_ < 0) throw ValidationError("group: no identity element");
  inverse_.assign(n, -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b)
      if (table_[a][b] == identity_ && table_[b][a] == identity_) {
        if (inverse_[a] >= 0)
          throw ValidationError("group: non-unique inverse for '" +
                                elements_[a] + "'");
        inverse_[a] = b;
      }
    if (inverse_[a] < 0)
      throw ValidationError("group: no inverse for '" + elements_[a] + "'");
  }
  if (n <= 16) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
            throw ValidationError("group: table is not associative");
  }
}

int FiniteGroup::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < elements_.size(); ++i)
    if (elements_[i] == id) return static_cast<int>(i);
  throw ValidationError("group: unknown element '" + id + "'");
}

namespace {

// Image of a half-edge (edge, end) under an element; 'end' false = 'from'.
std::pair<std::size_t, bool> map_half_edge(const GraphAction& a, int element,
                                           std::size_t edge, bool end) {
  const EdgeImage& im = a.edge_perm[element][edge];
  return {im.edge, end != im.reversed};
}

}  // namespace

ActionReport verify_action(const ExtendedGraph& g, const GraphAction& a) {
  ActionReport rep;
  auto fail = [&](const std::string& msg) {
    rep.ok = false;
    rep.problems.push_back(msg);
  };
  const MetricGraph& mg = g.graph();
  const std::size_t nv = mg.vertices().size();
  const std::size_t ne = mg.edges().size();
  const std::size_t ng = a.group.order();
  if (a.vertex_perm.size() != ng || a.edge_perm.size() != ng) {
    fail("action: permutation count does not match group order");
    return rep;
  }

  for (std::size_t el = 0; el < ng; ++el) {
    const std::string& name = a.group.elements()[el];
    if (a.vertex_perm[el].size() != nv || a.edge_perm[el].size() != ne) {
      fail("element '" + name + "': permutation size mismatch");
      continue;
    }
    std::vector<char> vseen(nv, 0), eseen(ne, 0);
    for (std::size_t v = 0; v < nv; ++v) {
      std::size_t iv = a.vertex_perm[el][v];
      if (iv >= nv || vseen[iv]++)
        fail("element '" + name + "': vertex map is not a permutation");
    }
    for (std::size_t e = 0; e < ne; ++e) {
      const EdgeImage& im = a.edge_perm[el][e];
      if (im.edge >= ne || eseen[im.edge]++) {
        fail("element '" + name + "': edge map is not a permutation");
        continue;
      }
      const Edge& src = mg.edges()[e];
      const Edge& dst = mg.edges()[im.edge];
      std::size_t u = a.vertex_perm[el][mg.vertex_index(src.from)];
      std::size_t v = a.vertex_perm[el][mg.vertex_index(src.to)];
      std::size_t du = mg.vertex_index(im.reversed ? dst.to : dst.from);
      std::size_t dv = mg.vertex_index(im.reversed ? dst.from : dst.to);
      if (u != du || v != dv)
        fail("element '" + name + "': image of edge '" + src.id +
             "' does not respect incidence");
      if (src.length != dst.length)
        fail("element '" + name + "': length not preserved on edge '" +
             src.id + "'");
    }
    for (std::size_t v = 0; v < nv; ++v) {
      if (mg.vertices()[v].condition !=
          mg.vertices()[a.vertex_perm[el][v]].condition)
        fail("element '" + name + "': vertex condition not preserved at '" +
             mg.vertices()[v].id + "'");
    }
    // leads must form orbits: lead multiplicity is constant along vertex
    // images
    for (std::size_t v = 0; v < nv; ++v) {
      if (g.lead_count_at(v) != g.lead_count_at(a.vertex_perm[el][v]))
        fail("element '" + name + "': lead count not preserved at '" +
             mg.vertices()[v].id + "'");
    }
  }
  if (!rep.ok) return rep;

  // composition compatibility: action(g*h) = action(g) o action(h)
  for (std::size_t ga = 0; ga < ng; ++ga) {
    for (std::size_t gb = 0; gb < ng; ++gb) {
      int gc = a.group.mul(static_cast<int>(ga), static_cast<int>(gb));
      for (std::size_t v = 0; v < nv; ++v)
        if (a.vertex_perm[gc][v] != a.vertex_perm[ga][a.vertex_perm[gb][v]]) {
          fail("composition mismatch on vertices for '" +
               a.group.elements()[ga] + "'*'" + a.group.elements()[gb] + "'");
          break;
        }
      for (std::size_t e = 0; e < ne; ++e) {
        const EdgeImage& bi = a.edge_perm[gb][e];
        const EdgeImage& abi = a.edge_perm[ga][bi.edge];
        const EdgeImage& ci = a.edge_perm[gc][e];
        if (ci.edge != abi.edge ||
            ci.reversed != (bi.reversed != abi.reversed)) {
          fail("composition mismatch on edges for '" +
               a.group.elements()[ga] + "'*'" + a.group.elements()[gb] + "'");
          break;
        }
      }
    }
  }
  return rep;
}

FixedPointSet fixed_points(const MetricGraph& g, const GraphAction& a,
                           int element) {
  if (element < 0 || element >= static_cast<int>(a.group.order()))
    throw ValidationError("fixed_points: element out of range");
  FixedPointSet fp;
  for (std::size_t v = 0; v < g.vertices().size(); ++v)
    if (a.vertex_perm[element][v] == v) fp.vertices.push_back(v);
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    const EdgeImage& im = a.edge_perm[element][e];
    if (im.edge != e) continue;
    if (im.reversed)
      fp.reversed_edges.push_back(e);
    else if (element != a.group.identity())
      fp.pointwise_edges.push_back(e);
  }
  return fp;
}

int Rep1D::value(int element) const {
  auto it = values.find(element);
  if (it == values.end())
    throw ValidationError("rep: element not in subgroup");
  return it->second;
}

void Rep1D::validate(const FiniteGroup& g) const {
  if (subgroup.empty()) throw ValidationError("rep: empty subgroup");
  std::set<int> h(subgroup.begin(), subgroup.end());
  for (int x : subgroup) {
    if (x < 0 || x >= static_cast<int>(g.order()))
      throw ValidationError("rep: subgroup element out of range");
    if (!values.count(x))
      throw ValidationError("rep: missing value for subgroup element '" +
                            g.elements()[x] + "'");
  }
  for (const auto& [el, v] : values) {
    if (v != 1 && v != -1)
      throw ValidationError("rep: values must be +1 or -1");
    if (!h.count(el))
      throw ValidationError("rep: value given for element outside subgroup");
  }
  if (!h.count(g.identity()))
    throw ValidationError("rep: subgroup must contain the identity");
  if (values.at(g.identity()) != 1)
    throw ValidationError("rep: identity must map to +1");
  for (int x : subgroup)
    for (int y : subgroup) {
      int xy = g.mul(x, y);
      if (!h.count(xy))
        throw ValidationError("rep: subgroup is not closed");
      if (values.at(xy) != values.at(x) * values.at(y))
        throw ValidationError("rep: values are not multiplicative");
    }
}

namespace {

// Orbits of {0..n-1} under the subgroup images; returns orbit id per item
// and the representative (smallest id by `id_of`) per orbit.
struct Orbits {
  std::vector<int> orbit_of;
  std::vector<std::vector<std::size_t>> members;
  std::vector<std::size_t> rep;
};

template <typename Image, typename IdOf>
Orbits compute_orbits(std::size_t n, const std::vector<int>& subgroup,
                      Image image, IdOf id_of) {
  Orbits o;
  o.orbit_of.assign(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (o.orbit_of[i] >= 0) continue;
    int oid = static_cast<int>(o.members.size());
    std::vector<std::size_t> mem;
    std::vector<std::size_t> stack = {i};
    o.orbit_of[i] = oid;
    while (!stack.empty()) {
      std::size_t x = stack.back();
      stack.pop_back();
      mem.push_back(x);
      for (int h : subgroup) {
        std::size_t y = image(h, x);
        if (o.orbit_of[y] < 0) {
          o.orbit_of[y] = oid;
          stack.push_back(y);
        }
      }
    }
    std::size_t best = mem[0];
    for (std::size_t m : mem)
      if (id_of(m) < id_of(best)) best = m;
    o.members.push_back(std::move(mem));
    o.rep.push_back(best);
  }
  return o;
}

}  // namespace

QuotientResult quotient(const ExtendedGraph& g, const GraphAction& a,
                        const Rep1D& rep) {
  rep.validate(a.group);
  const MetricGraph& mg = g.graph();
  const std::size_t nv = mg.vertices().size();
  const std::size_t ne = mg.edges().size();

  {
    ActionReport ar = verify_action(g, a);
    if (!ar.ok)
      throw ValidationError("quotient: action invalid: " + ar.problems[0]);
  }
  // leads must be a union of orbits of the *subgroup*
  for (int h : rep.subgroup)
    for (std::size_t v = 0; v < nv; ++v)
      if (g.lead_count_at(v) != g.lead_count_at(a.vertex_perm[h][v]))
        throw ValidationError("quotient: symmetry-breaking lead set");

  Orbits vorb = compute_orbits(
      nv, rep.subgroup,
      [&](int h, std::size_t v) { return a.vertex_perm[h][v]; },
      [&](std::size_t v) { return mg.vertices()[v].id; });
  Orbits eorb = compute_orbits(
      ne, rep.subgroup,
      [&](int h, std::size_t e) { return a.edge_perm[h][e].edge; },
      [&](std::size_t e) { return mg.edges()[e].id; });

  QuotientResult out;

  // Vertex conditions on orbit representatives.
  std::vector<VertexCondition> qcond(vorb.rep.size());
  std::vector<std::vector<int>> vstab(vorb.rep.size());
  for (std::size_t o = 0; o < vorb.rep.size(); ++o) {
    std::size_t v = vorb.rep[o];
    bool dirichlet =
        mg.vertices()[v].condition == VertexCondition::Dirichlet;
    for (int h : rep.subgroup) {
      if (a.vertex_perm[h][v] != v) continue;
      vstab[o].push_back(h);
      if (rep.value(h) == -1) dirichlet = true;
    }
    qcond[o] = dirichlet ? VertexCondition::Dirichlet
                         : VertexCondition::Neumann;
    // A Neumann representative with a symmetric stabilizer must have
    // incident slots in equal-size stabilizer orbits, otherwise the folded
    // Kirchhoff condition acquires weights we cannot represent.
    if (qcond[o] == VertexCondition::Neumann && vstab[o].size() > 1) {
      std::vector<std::pair<std::size_t, bool>> slots;
      for (std::size_t e = 0; e < ne; ++e) {
        if (mg.edges()[e].from == mg.vertices()[v].id)
          slots.emplace_back(e, false);
        if (mg.edges()[e].to == mg.vertices()[v].id)
          slots.emplace_back(e, true);
      }
      std::set<std::size_t> sizes;
      std::set<std::pair<std::size_t, bool>> seen;
      for (const auto& s : slots) {
        if (seen.count(s)) continue;
        std::set<std::pair<std::size_t, bool>> orb;
        for (int h : vstab[o]) orb.insert(map_half_edge(a, h, s.first, s.second));
        for (const auto& x : orb) seen.insert(x);
        sizes.insert(orb.size());
      }
      if (g.lead_count_at(v) > 0) sizes.insert(1);  // leads are fixed slots
      if (sizes.size() > 1)
        throw ValidationError(
            "quotient: vertex '" + mg.vertices()[v].id +
            "' would need a weighted vertex condition; unsupported");
    }
  }

  for (std::size_t v = 0; v < nv; ++v)
    out.vertex_map[mg.vertices()[v].id] =
        mg.vertices()[vorb.rep[vorb.orbit_of[v]]].id;

  // Emit quotient vertices in parent file order of the representatives.
  std::vector<std::size_t> orbit_order(vorb.rep.size());
  for (std::size_t o = 0; o < orbit_order.size(); ++o) orbit_order[o] = o;
  std::sort(orbit_order.begin(), orbit_order.end(),
            [&](std::size_t x, std::size_t y) {
              return vorb.rep[x] < vorb.rep[y];
            });
  std::vector<Vertex> qvertices;
  for (std::size_t o : orbit_order)
    qvertices.push_back({mg.vertices()[vorb.rep[o]].id, qcond[o]});

  // Edges: representative per orbit; reversal-fixed edges become half
  // edges ending at a new boundary vertex.
  std::vector<Edge> qedges;
  std::vector<std::size_t> edge_order(eorb.rep.size());
  for (std::size_t o = 0; o < edge_order.size(); ++o) edge_order[o] = o;
  std::sort(edge_order.begin(), edge_order.end(),
            [&](std::size_t x, std::size_t y) {
              return eorb.rep[x] < eorb.rep[y];
            });
  for (std::size_t o : edge_order) {
    std::size_t e = eorb.rep[o];
    const Edge& pe = mg.edges()[e];
    int reversal = -1, pointwise = -1;
    int stab_size = 0;
    for (int h : rep.subgroup) {
      if (a.edge_perm[h][e].edge != e) continue;
      ++stab_size;
      if (h == a.group.identity()) continue;
      if (a.edge_perm[h][e].reversed)
        reversal = h;
      else
        pointwise = h;
    }
    if (stab_size > 2)
      throw ValidationError("quotient: edge '" + pe.id +
                            "' has a stabilizer of order > 2; unsupported");
    if (pointwise >= 0) {
      if (rep.value(pointwise) == -1) {
        // the representation forces f == 0 on this edge
        out.dropped_edges.push_back(pe.id);
        continue;
      }
      // kept at full length; endpoint checks above guarantee the folded
      // condition stays a plain one (typically via Dirichlet endpoints)
    }
    if (reversal >= 0) {
      std::string mid_id = pe.id + ":mid";
      bool dir = rep.value(reversal) == -1;
      qvertices.push_back({mid_id, dir ? VertexCondition::Dirichlet
                                       : VertexCondition::Neumann});
      out.boundary_provenance[mid_id] =
          "midpoint of parent edge '" + pe.id + "' fixed by reflection '" +
          a.group.elements()[reversal] + "' (rep value " +
          (dir ? std::string("-1 -> dirichlet") : std::string("+1 -> neumann")) +
          ")";
      qedges.push_back({pe.id + ":half", out.vertex_map[pe.from], mid_id,
                        pe.length / 2.0});
      out.edge_provenance[pe.id + ":half"] = {pe.id, "half"};
    } else {
      qedges.push_back({pe.id, out.vertex_map[pe.from],
                        out.vertex_map[pe.to], pe.length});
      out.edge_provenance[pe.id] = {pe.id, "whole"};
    }
  }

  // Leads: one quotient lead per lead orbit, ordered by parent file order;
  // leads at vertices forced to Dirichlet carry f == 0 and are dropped.
  std::vector<Lead> qleads;
  std::map<std::string, std::size_t> emitted_at_orbit;
  for (const Lead& l : g.leads()) {
    std::size_t v = mg.vertex_index(l.vertex);
    std::size_t o = vorb.orbit_of[v];
    if (qcond[o] == VertexCondition::Dirichlet) continue;
    std::string rep_id = mg.vertices()[vorb.rep[o]].id;
    std::size_t n_per_vertex = g.lead_count_at(v);
    if (emitted_at_orbit[rep_id] >= n_per_vertex) continue;
    ++emitted_at_orbit[rep_id];
    qleads.push_back({l.id, rep_id});
  }

  out.quotient = ExtendedGraph(MetricGraph(std::move(qvertices), std::move(qedges)),
                               std::move(qleads));
  return out;
}

std::vector<int> induced_character(const FiniteGroup& g, const Rep1D& rep) {
  rep.validate(g);
  const int n = static_cast<int>(g.order());
  std::set<int> h(rep.subgroup.begin(), rep.subgroup.end());
  // left coset representatives of G/H
  std::vector<int> reps;
  std::vector<char> covered(n, 0);
  for (int x = 0; x < n; ++x) {
    if (covered[x]) continue;
    reps.push_back(x);
    for (int s : rep.subgroup) covered[g.mul(x, s)] = 1;
  }
  std::vector<int> chi(n, 0);
  for (int el = 0; el < n; ++el)
    for (int x : reps) {
      int conj = g.mul(g.inv(x), g.mul(el, x));
      if (h.count(conj)) chi[el] += rep.value(conj);
    }
  return chi;
}

bool induction_equivalent(const FiniteGroup& g, const Rep1D& rep1,
                          const Rep1D& rep2) {
  return induced_character(g, rep1) == induced_character(g, rep2);
}

namespace {

std::vector<EdgeImage> derive_edge_perm(const MetricGraph& g,
                                        const std::vector<std::size_t>& vperm) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> by_ends;
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    std::size_t u = g.vertex_index(g.edges()[e].from);
    std::size_t v = g.vertex_index(g.edges()[e].to);
    by_ends[{u, v}] = e;
  }
  std::vector<EdgeImage> out;
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    std::size_t u = vperm[g.vertex_index(g.edges()[e].from)];
    std::size_t v = vperm[g.vertex_index(g.edges()[e].to)];
    if (auto it = by_ends.find({u, v}); it != by_ends.end())
      out.push_back({it->second, false});
    else if (auto it2 = by_ends.find({v, u}); it2 != by_ends.end())
      out.push_back({it2->second, true});
    else
      throw ValidationError("derive_edge_perm: image edge missing");
  }
  return out;
}

}  // namespace

D4Example builtin_d4_example(double a, double b, double c) {
  // Parent: 8 outer vertices w0..w7 at generic angles around a centre O;
  // an octagon of alternating edge lengths b (crossing the diagonal axes)
  // and a (crossing the coordinate axes), plus 8 spokes of length c.
  std::vector<Vertex> vertices;
  vertices.push_back({"O", VertexCondition::Neumann});
  for (int i = 0; i < 8; ++i)
    vertices.push_back({"w" + std::to_string(i), VertexCondition::Neumann});
  std::vector<Edge> edges;
  for (int i = 0; i < 8; ++i)
    edges.push_back({"sp" + std::to_string(i), "O", "w" + std::to_string(i), c});
  for (int i = 0; i < 8; ++i)
    edges.push_back({"og" + std::to_string(i), "w" + std::to_string(i),
                     "w" + std::to_string((i + 1) % 8),
                     i % 2 == 0 ? b : a});

  // Lead file order fixes the lead order of the quotients, which in turn is
  // the basis in which the transplantation matrix takes the form below.
  std::vector<std::string> lead_vertices = {"w1", "w0", "w2", "w3",
                                            "w4", "w5", "w6", "w7"};
  std::vector<Lead> leads;
  for (const std::string& v : lead_vertices)
    leads.push_back({"ld" + v.substr(1), v});

  ExtendedGraph parent(MetricGraph(vertices, edges), leads);

  // Dihedral group of the square acting on the outer index ring.
  const std::vector<std::string> names = {"e",  "s",  "s2", "s3",
                                          "rx", "ry", "ru", "rv"};
  auto outer_map = [](int el, int i) -> int {
    switch (el) {
      case 0: return i;
      case 1: return (i + 2) % 8;        // rotation by pi/2
      case 2: return (i + 4) % 8;
      case 3: return (i + 6) % 8;
      case 4: return ((7 - i) % 8 + 8) % 8;  // reflection across x
      case 5: return ((3 - i) % 8 + 8) % 8;  // across y
      case 6: return ((1 - i) % 8 + 8) % 8;  // across u (45 degrees)
      default: return ((5 - i) % 8 + 8) % 8; // across v (135 degrees)
    }
  };

  std::vector<std::vector<std::size_t>> vperm(8);
  for (int el = 0; el < 8; ++el) {
    vperm[el].assign(9, 0);
    vperm[el][0] = 0;  // centre fixed
    for (int i = 0; i < 8; ++i)
      vperm[el][1 + i] = 1 + static_cast<std::size_t>(outer_map(el, i));
  }

  // Multiplication table from composition of the vertex permutations.
  std::vector<std::vector<int>> table(8, std::vector<int>(8, -1));
  for (int ga = 0; ga < 8; ++ga)
    for (int gb = 0; gb < 8; ++gb) {
      for (int gc = 0; gc < 8; ++gc) {
        bool match = true;
        for (int i = 0; i < 8 && match; ++i)
          match = outer_map(gc, i) == outer_map(ga, outer_map(gb, i));
        if (match) {
          table[ga][gb] = gc;
          break;
        }
      }
      if (table[ga][gb] < 0)
        throw ValidationError("builtin d4: composition not closed");
    }

  D4Example ex;
  ex.action.group = FiniteGroup(names, table);
  ex.action.vertex_perm = vperm;
  for (int el = 0; el < 8; ++el)
    ex.action.edge_perm.push_back(derive_edge_perm(parent.graph(), vperm[el]));
  ex.parent = std::move(parent);

  const FiniteGroup& G = ex.action.group;
  ex.rep1.subgroup = {G.index_of("e"), G.index_of("ru"), G.index_of("rv"),
                      G.index_of("s2")};
  ex.rep1.values = {{G.index_of("e"), 1},
                    {G.index_of("ru"), 1},
                    {G.index_of("rv"), -1},
                    {G.index_of("s2"), -1}};
  ex.rep2.subgroup = {G.index_of("e"), G.index_of("rx"), G.index_of("ry"),
                      G.index_of("s2")};
  ex.rep2.values = {{G.index_of("e"), 1},
                    {G.index_of("rx"), -1},
                    {G.index_of("ry"), 1},
                    {G.index_of("s2"), -1}};
  ex.transplantation << Complex(1, 0), Complex(1, 0), Complex(1, 0),
      Complex(-1, 0);
  ex.lead_vertices = lead_vertices;
  return ex;
}

SymmetryFile parse_symmetry(const std::string& json_text,
                            const ExtendedGraph& g) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("symmetry file: ") + e.what());
  }
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    std::string k = it.key();
    if (k != "elements" && k != "table" && k != "vertex_perm" &&
        k != "edge_perm" && k != "reps")
      throw ParseError("symmetry file: unknown key '" + k + "'");
  }
  if (!doc.contains("elements") || !doc.contains("table"))
    throw ParseError("symmetry file: missing 'elements' or 'table'");

  std::vector<std::string> names =
      doc["elements"].get<std::vector<std::string>>();
  std::map<std::string, int> name_index;
  for (std::size_t i = 0; i < names.size(); ++i)
    name_index[names[i]] = static_cast<int>(i);

  std::vector<std::vector<int>> table;
  for (const auto& row : doc["table"]) {
    std::vector<int> r;
    for (const auto& cell : row) {
      std::string id = cell.get<std::string>();
      if (!name_index.count(id))
        throw ParseError("symmetry file: unknown element '" + id +
                         "' in table");
      r.push_back(name_index[id]);
    }
    table.push_back(std::move(r));
  }

  SymmetryFile out;
  out.action.group = FiniteGroup(names, table);

  if (!doc.contains("vertex_perm") || !doc.contains("edge_perm"))
    throw ParseError("symmetry file: missing 'vertex_perm' or 'edge_perm'");
  const MetricGraph& mg = g.graph();
  for (const std::string& name : names) {
    if (!doc["vertex_perm"].contains(name))
      throw ParseError("symmetry file: vertex_perm missing element '" + name +
                       "'");
    std::vector<std::size_t> vp(mg.vertices().size());
    for (const Vertex& v : mg.vertices()) {
      const auto& jm = doc["vertex_perm"][name];
      if (!jm.contains(v.id))
        throw ParseError("symmetry file: vertex_perm['" + name +
                         "'] missing vertex '" + v.id + "'");
      vp[mg.vertex_index(v.id)] =
          mg.vertex_index(jm[v.id].get<std::string>());
    }
    out.action.vertex_perm.push_back(std::move(vp));

    if (!doc["edge_perm"].contains(name))
      throw ParseError("symmetry file: edge_perm missing element '" + name +
                       "'");
    std::vector<EdgeImage> ep(mg.edges().size());
    for (const Edge& e : mg.edges()) {
      const auto& jm = doc["edge_perm"][name];
      if (!jm.contains(e.id))
        throw ParseError("symmetry file: edge_perm['" + name +
                         "'] missing edge '" + e.id + "'");
      const auto& je = jm[e.id];
      EdgeImage im;
      im.edge = mg.edge_index(je.at("to").get<std::string>());
      im.reversed = je.value("reversed", false);
      ep[mg.edge_index(e.id)] = im;
    }
    out.action.edge_perm.push_back(std::move(ep));
  }

  if (doc.contains("reps")) {
    for (auto it = doc["reps"].begin(); it != doc["reps"].end(); ++it) {
      Rep1D r;
      for (const auto& s : it.value().at("subgroup"))
        r.subgroup.push_back(name_index.at(s.get<std::string>()));
      for (auto vi = it.value().at("values").begin();
           vi != it.value().at("values").end(); ++vi) {
        if (!vi.value().is_number_integer())
          throw ParseError("symmetry file: rep values must be +1/-1 integers");
        r.values[name_index.at(vi.key())] = vi.value().get<int>();
      }
      // validated at point of use, so one bad rep does not block the others
      out.reps[it.key()] = std::move(r);
    }
  }
  return out;
}

SymmetryFile load_symmetry(const std::string& path, const ExtendedGraph& g) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_symmetry(ss.str(), g);
}

}  // namespace qg
