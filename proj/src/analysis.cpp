#include "qg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace qg {

namespace {

std::string fmt_complex(Complex z) {
  return fmt_double(z.real()) + (z.imag() < 0 ? "-" : "+") +
         fmt_double(std::abs(z.imag())) + "i";
}

}  // namespace

std::string ComparisonReport::summary() const {
  std::ostringstream os;
  os << "comparison: " << kind << "\n";
  os << "result:     " << (pass ? "PASS" : "FAIL") << "\n";
  os << "tolerance:  " << fmt_double(tolerance) << "\n";
  os << "max gap:    " << fmt_double(max_distance) << "\n";
  os << "matched " << pairs.size() << ", unmatched left "
     << unmatched_left.size() << ", unmatched right " << unmatched_right.size()
     << "\n";
  for (const auto& n : notes) os << "note: " << n << "\n";
  if (!pairs.empty()) {
    os << "  " << std::left << std::setw(28) << "left" << std::setw(28)
       << "right" << "gap\n";
    for (const auto& p : pairs)
      os << "  " << std::left << std::setw(28) << fmt_complex(p.left)
         << std::setw(28) << fmt_complex(p.right) << fmt_double(p.distance)
         << "\n";
  }
  for (const auto& z : unmatched_left)
    os << "  only-left  " << fmt_complex(z) << "\n";
  for (const auto& z : unmatched_right)
    os << "  only-right " << fmt_complex(z) << "\n";
  return os.str();
}

std::string ComparisonReport::to_json() const {
  nlohmann::json j;
  j["kind"] = kind;
  j["pass"] = pass;
  j["tolerance"] = tolerance;
  j["max_distance"] = max_distance;
  j["pairs"] = nlohmann::json::array();
  for (const auto& p : pairs)
    j["pairs"].push_back({{"left", {p.left.real(), p.left.imag()}},
                          {"right", {p.right.real(), p.right.imag()}},
                          {"distance", p.distance}});
  auto dump = [](const std::vector<Complex>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (Complex z : v) a.push_back({z.real(), z.imag()});
    return a;
  };
  j["unmatched_left"] = dump(unmatched_left);
  j["unmatched_right"] = dump(unmatched_right);
  j["notes"] = notes;
  return j.dump(2) + "\n";
}

ComparisonReport compare_spectra(const Spectrum& left, const Spectrum& right,
                                 double tol) {
  if (left.k_min != right.k_min || left.k_max != right.k_max)
    throw ValidationError("compare_spectra: intervals differ");
  ComparisonReport rep;
  rep.kind = "spectra";
  rep.tolerance = tol;

  auto flat = [](const Spectrum& s) {
    std::vector<double> ks;
    if (s.has_zero_mode && s.k_min <= 0.0) ks.push_back(0.0);
    for (const auto& e : s.eigenvalues)
      for (int m = 0; m < e.multiplicity; ++m) ks.push_back(e.k);
    std::sort(ks.begin(), ks.end());
    return ks;
  };
  std::vector<double> a = flat(left), b = flat(right);
  if (left.has_zero_mode != right.has_zero_mode)
    rep.notes.push_back("zero-mode present on one side only");

  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    double d = std::abs(a[i] - b[i]);
    rep.pairs.push_back({Complex(a[i], 0), Complex(b[i], 0), d});
    rep.max_distance = std::max(rep.max_distance, d);
  }
  for (std::size_t i = n; i < a.size(); ++i)
    rep.unmatched_left.push_back(Complex(a[i], 0));
  for (std::size_t i = n; i < b.size(); ++i)
    rep.unmatched_right.push_back(Complex(b[i], 0));
  rep.pass = a.size() == b.size() && rep.max_distance <= tol &&
             left.has_zero_mode == right.has_zero_mode;
  return rep;
}

double conjugation_residual(const Eigen::MatrixXcd& s_left,
                            const Eigen::MatrixXcd& s_right,
                            const Eigen::MatrixXcd& t) {
  if (s_left.rows() != s_left.cols() || s_right.rows() != s_right.cols() ||
      s_left.rows() != s_right.rows() || t.rows() != t.cols() ||
      t.rows() != s_left.rows())
    throw ValidationError("conjugation_residual: dimension mismatch");
  Eigen::MatrixXcd conj =
      t.partialPivLu().solve(s_right * t);  // T^{-1} S_right T
  return (conj - s_left).cwiseAbs().maxCoeff();
}

ComparisonReport compare_poles(const ResonanceSet& left,
                               const ResonanceSet& right, double tol) {
  auto same = [](double x, double y) { return x == y; };
  if (!same(left.rect.re_min, right.rect.re_min) ||
      !same(left.rect.re_max, right.rect.re_max) ||
      !same(left.rect.im_min, right.rect.im_min) ||
      !same(left.rect.im_max, right.rect.im_max))
    throw ValidationError("compare_poles: rectangles differ");
  ComparisonReport rep;
  rep.kind = "poles";
  rep.tolerance = tol;

  std::vector<Complex> a, b;
  for (const auto& p : left.poles)
    for (int m = 0; m < p.multiplicity; ++m) a.push_back(p.k);
  for (const auto& p : right.poles)
    for (int m = 0; m < p.multiplicity; ++m) b.push_back(p.k);

  struct Cand {
    double d;
    std::size_t i, j;
  };
  std::vector<Cand> cands;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      cands.push_back({std::abs(a[i] - b[j]), i, j});
  std::sort(cands.begin(), cands.end(),
            [](const Cand& x, const Cand& y) { return x.d < y.d; });
  std::vector<char> ua(a.size(), 0), ub(b.size(), 0);
  for (const Cand& c : cands) {
    if (c.d > tol) break;
    if (ua[c.i] || ub[c.j]) continue;
    ua[c.i] = ub[c.j] = 1;
    rep.pairs.push_back({a[c.i], b[c.j], c.d});
    rep.max_distance = std::max(rep.max_distance, c.d);
  }
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!ua[i]) rep.unmatched_left.push_back(a[i]);
  for (std::size_t j = 0; j < b.size(); ++j)
    if (!ub[j]) rep.unmatched_right.push_back(b[j]);
  std::sort(rep.pairs.begin(), rep.pairs.end(),
            [](const MatchedPair& x, const MatchedPair& y) {
              return x.left.real() < y.left.real();
            });
  rep.pass = rep.unmatched_left.empty() && rep.unmatched_right.empty();
  if (a.empty() && b.empty())
    rep.notes.push_back("both pole lists are empty");
  return rep;
}

namespace {

// one endpoint of a segment laid onto the target graph
struct Station {
  double x = 0.0;       // coordinate on the target edge
  Complex value;        // candidate value there
  Complex ddx;          // candidate d/dx (target edge orientation)
};

}  // namespace

double transplantation_residual(const MetricGraph& source,
                                const Eigenfunction& f,
                                const MetricGraph& target, const BlockMap& bm,
                                const Eigen::MatrixXcd& t) {
  const std::size_t nb = bm.target_blocks.size();
  if (bm.source_blocks.size() != nb ||
      static_cast<std::size_t>(t.rows()) != nb ||
      static_cast<std::size_t>(t.cols()) != nb)
    throw ValidationError("transplantation: block/matrix size mismatch");
  for (std::size_t j = 0; j < nb; ++j) {
    if (bm.source_blocks[j].size() != bm.target_blocks[0].size() ||
        bm.target_blocks[j].size() != bm.target_blocks[0].size())
      throw ValidationError("transplantation: ragged block map");
    for (std::size_t s = 0; s < bm.target_blocks[j].size(); ++s) {
      double ls = std::abs(bm.source_blocks[j][s].x_end -
                           bm.source_blocks[j][s].x_start);
      double lt = std::abs(bm.target_blocks[j][s].x_end -
                           bm.target_blocks[j][s].x_start);
      if (std::abs(ls - lt) > 1e-12)
        throw ValidationError("transplantation: segment lengths differ");
    }
  }

  const double dscale = 1.0 + std::abs(f.k);
  // candidate value / d-dt on target block j, segment s, at parameter u
  auto candidate = [&](std::size_t j, std::size_t s, double u) {
    Complex val = 0.0, ddt = 0.0;
    for (std::size_t i = 0; i < nb; ++i) {
      const Segment& ss = bm.source_blocks[i][s];
      double dir = ss.x_end >= ss.x_start ? 1.0 : -1.0;
      double x = ss.x_start + dir * u;
      std::size_t e = source.edge_index(ss.edge);
      val += t(j, i) * f.value(source, e, x);
      ddt += t(j, i) * dir * f.derivative(source, e, x);
    }
    return std::pair<Complex, Complex>(val, ddt);
  };

  // stations on each target edge from the segment endpoints
  std::vector<std::vector<Station>> stations(target.edges().size());
  std::vector<std::pair<double, double>> covered(target.edges().size(),
                                                {0.0, 0.0});
  std::vector<bool> touched(target.edges().size(), false);
  for (std::size_t j = 0; j < nb; ++j)
    for (std::size_t s = 0; s < bm.target_blocks[j].size(); ++s) {
      const Segment& ts = bm.target_blocks[j][s];
      std::size_t e = target.edge_index(ts.edge);
      double dir = ts.x_end >= ts.x_start ? 1.0 : -1.0;
      double len = std::abs(ts.x_end - ts.x_start);
      for (double u : {0.0, len}) {
        auto [val, ddt] = candidate(j, s, u);
        stations[e].push_back({ts.x_start + dir * u, val, dir * ddt});
      }
      double lo = std::min(ts.x_start, ts.x_end);
      double hi = std::max(ts.x_start, ts.x_end);
      if (!touched[e]) {
        covered[e] = {lo, hi};
        touched[e] = true;
      } else {
        covered[e].first = std::min(covered[e].first, lo);
        covered[e].second = std::max(covered[e].second, hi);
      }
    }

  double resid = 0.0;
  const double pos_tol = 1e-9;
  for (std::size_t e = 0; e < target.edges().size(); ++e) {
    if (!touched[e] || covered[e].first > pos_tol ||
        covered[e].second < target.edges()[e].length - pos_tol)
      throw ValidationError("transplantation: target edge '" +
                            target.edges()[e].id + "' not fully covered");
    auto& st = stations[e];
    std::sort(st.begin(), st.end(),
              [](const Station& a, const Station& b) { return a.x < b.x; });
    // interior junctions appear as coincident stations from two segments
    for (std::size_t i = 0; i + 1 < st.size(); ++i) {
      if (std::abs(st[i].x - st[i + 1].x) > pos_tol) continue;
      if (st[i].x < pos_tol ||
          st[i].x > target.edges()[e].length - pos_tol)
        continue;  // edge-end stations are handled as vertex slots below
      resid = std::max(resid, std::abs(st[i].value - st[i + 1].value));
      resid = std::max(resid,
                       std::abs(st[i].ddx - st[i + 1].ddx) / dscale);
    }
  }

  // vertex conditions of the target graph
  for (std::size_t v = 0; v < target.vertices().size(); ++v) {
    const Vertex& vert = target.vertices()[v];
    std::vector<std::pair<Complex, Complex>> slots;  // (value, outward d/dx)
    for (std::size_t e = 0; e < target.edges().size(); ++e) {
      const Edge& ed = target.edges()[e];
      for (const Station& s : stations[e]) {
        if (ed.from == vert.id && std::abs(s.x) <= pos_tol)
          slots.emplace_back(s.value, s.ddx);
        if (ed.to == vert.id && std::abs(s.x - ed.length) <= pos_tol)
          slots.emplace_back(s.value, -s.ddx);
      }
    }
    if (slots.empty()) continue;
    if (vert.condition == VertexCondition::Dirichlet) {
      for (const auto& s : slots) resid = std::max(resid, std::abs(s.first));
    } else {
      Complex dsum = 0.0;
      for (const auto& s : slots) {
        resid = std::max(resid, std::abs(s.first - slots[0].first));
        dsum += s.second;
      }
      resid = std::max(resid, std::abs(dsum) / dscale);
    }
  }
  return resid;
}

BlockMap builtin_block_map() {
  const double a = 1.0;
  const double b = std::sqrt(2.0);
  const double c = std::sqrt(3.0);
  BlockMap bm;
  // rep1 quotient: blocks rooted at w0 and w2
  bm.source_blocks = {
      {{"sp0", c, 0.0}, {"og0:half", 0.0, b / 2}, {"og1", 0.0, a / 2}},
      {{"sp2", c, 0.0}, {"og2:half", 0.0, b / 2}, {"og1", a, a / 2}},
  };
  // rep2 quotient: blocks rooted at w1 and w0
  bm.target_blocks = {
      {{"sp1", c, 0.0}, {"og0", b, b / 2}, {"og1:half", 0.0, a / 2}},
      {{"sp0", c, 0.0}, {"og0", 0.0, b / 2}, {"og3:half", 0.0, a / 2}},
  };
  return bm;
}

BreakingResult symmetry_breaking_experiment(
    const ExtendedGraph& parent, const GraphAction& action, const Rep1D& rep1,
    const Rep1D& rep2, const std::vector<std::string>& broken_vertices,
    const Rectangle& rect, const ResonanceOptions& opts, double tol) {
  BreakingResult out;

  QuotientResult q1 = quotient(parent, action, rep1);
  QuotientResult q2 = quotient(parent, action, rep2);
  out.symmetric = compare_poles(resonances(q1.quotient, rect, opts),
                                resonances(q2.quotient, rect, opts), tol);

  ExtendedGraph bare(parent.graph());
  QuotientResult c1 = quotient(bare, action, rep1);
  QuotientResult c2 = quotient(bare, action, rep2);
  auto attach_mapped = [&](const QuotientResult& q) {
    std::vector<std::string> at;
    for (const std::string& v : broken_vertices) at.push_back(q.vertex_map.at(v));
    return attach_leads(q.quotient.graph(), at);
  };
  out.broken = compare_poles(resonances(attach_mapped(c1), rect, opts),
                             resonances(attach_mapped(c2), rect, opts), tol);

  out.divergence_detected = out.symmetric.pass && !out.broken.pass;
  return out;
}

std::string pole_pairs_to_csv(const ComparisonReport& rep,
                              const std::string& left_hash,
                              const std::string& right_hash) {
  std::ostringstream os;
  os << "# pole pair comparison (" << (rep.pass ? "PASS" : "FAIL") << ")\n";
  os << "# left_hash=" << left_hash << " right_hash=" << right_hash << "\n";
  os << "# tolerance=" << fmt_double(rep.tolerance)
     << " max_distance=" << fmt_double(rep.max_distance) << "\n";
  os << "re_left,im_left,re_right,im_right,distance\n";
  for (const auto& p : rep.pairs)
    os << fmt_double(p.left.real()) << ',' << fmt_double(p.left.imag()) << ','
       << fmt_double(p.right.real()) << ',' << fmt_double(p.right.imag())
       << ',' << fmt_double(p.distance) << "\n";
  for (const auto& z : rep.unmatched_left)
    os << fmt_double(z.real()) << ',' << fmt_double(z.imag()) << ",,,\n";
  for (const auto& z : rep.unmatched_right)
    os << ",," << fmt_double(z.real()) << ',' << fmt_double(z.imag()) << ",\n";
  return os.str();
}

}  // namespace qg
