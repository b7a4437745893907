#include "qg/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace qg {

namespace {

std::pair<double, double> sigma_extremes(const Eigen::MatrixXcd& A) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  const auto& s = svd.singularValues();
  return {s(s.size() - 1), s(0)};
}

}  // namespace

ScatteringMatrix smatrix(const ExtendedGraph& eg, Complex k) {
  if (eg.leads().empty())
    throw ValidationError("smatrix: graph has no leads");
  ExtendedSystem sys = assemble_extended(eg, k);
  auto [smin, smax] = sigma_extremes(sys.A);
  bool perturbed = false;
  if (smin < 1e-12 * smax) {
    if (k.imag() != 0.0)
      throw NumericalError("smatrix: pole proximity at complex k");
    // Embedded eigenvalue: the interior eigenfunction is invisible to the
    // leads. Nudge k off the singular point and flag it.
    k = k * (1.0 + 1e-9);
    sys = assemble_extended(eg, k);
    perturbed = true;
  }
  const std::size_t n_edges = eg.graph().edges().size();
  const std::size_t n_leads = eg.leads().size();
  Eigen::MatrixXcd X = sys.A.partialPivLu().solve(sys.B);
  ScatteringMatrix out;
  out.k = k;
  out.S = X.block(2 * n_edges, 0, n_leads, n_leads);
  out.perturbed = perturbed;
  return out;
}

double unitarity_defect(const ExtendedGraph& eg, double k) {
  if (!(k > 0.0)) throw ValidationError("unitarity_defect: require k > 0");
  ScatteringMatrix sm = smatrix(eg, Complex(k, 0.0));
  Eigen::MatrixXcd D =
      sm.S * sm.S.adjoint() -
      Eigen::MatrixXcd::Identity(sm.S.rows(), sm.S.cols());
  return D.cwiseAbs().maxCoeff();
}

Complex extended_logdet(const ExtendedGraph& eg, Complex k) {
  ExtendedSystem sys = assemble_extended(eg, k);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(sys.A);
  // log-magnitude and phase accumulated separately to avoid overflow
  double logmag = 0.0;
  Complex phase(1.0, 0.0);
  const auto& U = lu.matrixLU();
  for (Eigen::Index i = 0; i < U.rows(); ++i) {
    Complex d = U(i, i);
    double a = std::abs(d);
    logmag += std::log(a);
    phase *= d / a;
  }
  if (lu.permutationP().determinant() < 0) phase = -phase;
  return Complex(logmag, std::arg(phase));
}

namespace {

// det A(k) up to a fixed positive scale exp(ref): used where only ratios
// of nearby determinant values matter.
Complex scaled_det(const ExtendedGraph& eg, Complex k, double ref) {
  Complex ld = extended_logdet(eg, k);
  return std::polar(std::exp(ld.real() - ref), ld.imag());
}

struct PhaseTracker {
  const ExtendedGraph& eg;
  double total = 0.0;

  // Accumulates the phase change of det A from ka to kb, subdividing until
  // each increment is below pi/2.
  void advance(Complex ka, double pa, Complex kb, int depth = 0) {
    double pb = extended_logdet(eg, kb).imag();
    double d = pb - pa;
    while (d > M_PI) d -= 2.0 * M_PI;
    while (d < -M_PI) d += 2.0 * M_PI;
    if (std::abs(d) <= M_PI / 2.0 || depth >= 28) {
      total += d;
      return;
    }
    Complex km = 0.5 * (ka + kb);
    double pm = extended_logdet(eg, km).imag();
    advance(ka, pa, km, depth + 1);
    advance(km, pm, kb, depth + 1);
  }
};

// Phase winding along the rectangle boundary with n samples per side.
// Returns total phase / 2pi (not yet rounded).
double winding_raw(const ExtendedGraph& eg, const Rectangle& r, int n) {
  std::vector<Complex> corners = {
      {r.re_min, r.im_min}, {r.re_max, r.im_min},
      {r.re_max, r.im_max}, {r.re_min, r.im_max}};
  PhaseTracker tr{eg};
  for (int side = 0; side < 4; ++side) {
    Complex a = corners[side], b = corners[(side + 1) % 4];
    Complex prev = a;
    double pprev = extended_logdet(eg, prev).imag();
    for (int i = 1; i <= n; ++i) {
      Complex next = a + (b - a) * (static_cast<double>(i) / n);
      tr.advance(prev, pprev, next);
      prev = next;
      pprev = extended_logdet(eg, prev).imag();
    }
  }
  return tr.total / (2.0 * M_PI);
}

int winding_checked(const ExtendedGraph& eg, const Rectangle& rect) {
  Rectangle r = rect;
  double pad_re = 0.0, pad_im = 0.0;
  for (int attempt = 0; attempt < 5; ++attempt) {
    int n = 64;
    double w = winding_raw(eg, r, n);
    // double the boundary sampling until the winding stabilizes
    for (; n <= 1024; n *= 2) {
      double w2 = winding_raw(eg, r, 2 * n);
      if (std::abs(w2 - w) < 0.05) {
        w = w2;
        break;
      }
      w = w2;
    }
    int wi = static_cast<int>(std::lround(w));
    if (std::abs(w - wi) <= 0.1) return wi;
    // contour likely passes near a pole: perturb the boundary slightly
    pad_re = (attempt + 1) * 1e-4 * (r.re_max - r.re_min);
    pad_im = (attempt + 1) * 1e-4 * (r.im_max - r.im_min);
    r = rect;
    r.re_min -= pad_re;
    r.re_max += pad_re;
    r.im_min -= pad_im;
    r.im_max += pad_im;
  }
  throw NumericalError(
      "resonances: winding number failed to stabilize after 5 contour "
      "perturbations");
}

// Newton iteration on det A with central-difference derivative.
// Returns the refined zero, or nullopt if it left the trust region.
std::optional<Complex> newton_refine(const ExtendedGraph& eg, Complex k0,
                                     const Rectangle& cell, double k_tol) {
  Complex k = k0;
  double span = std::hypot(cell.re_max - cell.re_min,
                           cell.im_max - cell.im_min);
  for (int it = 0; it < 60; ++it) {
    double h = 1e-6 * (1.0 + std::abs(k));
    double ref = extended_logdet(eg, k).real();
    Complex d0 = scaled_det(eg, k, ref);
    Complex dp = scaled_det(eg, k + h, ref);
    Complex dm = scaled_det(eg, k - h, ref);
    Complex deriv = (dp - dm) / (2.0 * h);
    if (std::abs(deriv) == 0.0) return std::nullopt;
    Complex step = -d0 / deriv;
    if (std::abs(step) > span) step *= span / std::abs(step);
    k += step;
    if (std::abs(k - k0) > 2.0 * span) return std::nullopt;
    if (std::abs(step) < k_tol) return k;
  }
  return std::nullopt;
}

void find_in_cell(const ExtendedGraph& eg, const Rectangle& cell,
                  const ResonanceOptions& opts, std::vector<Complex>& out,
                  int depth) {
  int w = winding_checked(eg, cell);
  if (w == 0) return;
  double dre = cell.re_max - cell.re_min;
  double dim = cell.im_max - cell.im_min;
  if (w == 1) {
    Complex center(0.5 * (cell.re_min + cell.re_max),
                   0.5 * (cell.im_min + cell.im_max));
    auto refined = newton_refine(eg, center, cell, opts.k_tol);
    if (refined && refined->real() > cell.re_min - 1e-9 &&
        refined->real() < cell.re_max + 1e-9 &&
        refined->imag() > cell.im_min - 1e-9 &&
        refined->imag() < cell.im_max + 1e-9) {
      out.push_back(*refined);
      return;
    }
    if (std::max(dre, dim) < 64.0 * opts.k_tol) {
      if (refined) {
        out.push_back(*refined);
        return;
      }
      throw NumericalError("resonances: Newton failed to converge in a cell");
    }
    // fall through: shrink the cell and retry
  }
  if (depth > 40)
    throw NumericalError("resonances: bisection depth exceeded");
  Rectangle a = cell, b = cell;
  if (dre >= dim) {
    double mid = 0.5 * (cell.re_min + cell.re_max);
    a.re_max = mid;
    b.re_min = mid;
  } else {
    double mid = 0.5 * (cell.im_min + cell.im_max);
    a.im_max = mid;
    b.im_min = mid;
  }
  find_in_cell(eg, a, opts, out, depth + 1);
  find_in_cell(eg, b, opts, out, depth + 1);
}

}  // namespace

int boundary_winding(const ExtendedGraph& eg, const Rectangle& rect) {
  return winding_checked(eg, rect);
}

ResonanceSet resonances(const ExtendedGraph& eg, const Rectangle& rect,
                        const ResonanceOptions& opts) {
  if (!(rect.re_min < rect.re_max && rect.im_min < rect.im_max))
    throw ValidationError("resonances: empty rectangle");
  if (rect.im_max >= 0.0)
    throw ValidationError(
        "resonances: rectangle must lie in Im k < 0 (outgoing convention)");

  ResonanceSet result;
  result.rect = rect;
  result.winding = winding_checked(eg, rect);

  std::vector<Complex> zeros;
  if (result.winding > 0) find_in_cell(eg, rect, opts, zeros, 0);

  std::sort(zeros.begin(), zeros.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  for (Complex z : zeros) {
    if (!result.poles.empty() &&
        std::abs(z - result.poles.back().k) < opts.merge_tol) {
      result.poles.back().multiplicity += 1;
      continue;
    }
    ExtendedSystem sys = assemble_extended(eg, z);
    auto [smin, smax] = sigma_extremes(sys.A);
    result.poles.push_back({z, 1, smin});
  }
  return result;
}

std::string smatrix_to_csv(const ScatteringMatrix& s,
                           const std::string& graph_hash) {
  std::ostringstream out;
  out << "# graph_hash: " << graph_hash << "\n";
  out << "# k: " << fmt_double(s.k.real()) << "," << fmt_double(s.k.imag())
      << "\n";
  out << "# convention: exp(ikx) outgoing; poles in Im k < 0\n";
  if (s.perturbed) out << "# note: evaluated at k(1+1e-9), embedded eigenvalue\n";
  out << "i,j,re,im\n";
  for (Eigen::Index i = 0; i < s.S.rows(); ++i)
    for (Eigen::Index j = 0; j < s.S.cols(); ++j)
      out << i << "," << j << "," << fmt_double(s.S(i, j).real()) << ","
          << fmt_double(s.S(i, j).imag()) << "\n";
  return out.str();
}

std::string poles_to_csv(const ResonanceSet& r, const std::string& graph_hash) {
  std::ostringstream out;
  out << "# graph_hash: " << graph_hash << "\n";
  out << "# rectangle: " << fmt_double(r.rect.re_min) << ","
      << fmt_double(r.rect.re_max) << "," << fmt_double(r.rect.im_min) << ","
      << fmt_double(r.rect.im_max) << "\n";
  out << "# convention: exp(ikx) outgoing; poles in Im k < 0\n";
  out << "# winding: " << r.winding << "\n";
  out << "re_k,im_k,multiplicity,sigma_min\n";
  for (const Pole& p : r.poles)
    out << fmt_double(p.k.real()) << "," << fmt_double(p.k.imag()) << ","
        << p.multiplicity << "," << fmt_double(p.sigma_min) << "\n";
  return out.str();
}

}  // namespace qg
