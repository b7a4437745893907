#include "qg/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qg {

namespace {

Eigen::JacobiSVD<Eigen::MatrixXcd> secular_svd(const MetricGraph& g,
                                               Complex k, unsigned options) {
  SecularSystem sys = assemble_secular(g, k);
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(sys.matrix, options);
}

double sigma_min_at(const MetricGraph& g, double k) {
  auto svd = secular_svd(g, Complex(k, 0.0), 0);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

// Golden-section minimization of f on [a, b].
template <typename F>
double golden_min(F f, double a, double b, double tol) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

double secular_sigma_min(const MetricGraph& g, Complex k) {
  auto svd = secular_svd(g, k, 0);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

Spectrum spectrum(const MetricGraph& g, double k_min, double k_max,
                  const SpectrumOptions& opts_in) {
  if (!(0.0 < k_min && k_min < k_max))
    throw ValidationError("spectrum: require 0 < k_min < k_max");
  if (g.edges().empty()) throw ValidationError("spectrum: graph has no edges");

  SpectrumOptions opts = opts_in;
  if (opts.scan_step <= 0.0)
    opts.scan_step = 0.5 * M_PI / g.total_length();

  Spectrum result;
  result.k_min = k_min;
  result.k_max = k_max;
  result.opts = opts;
  result.has_zero_mode = g.connected() && g.all_neumann();

  // Uniform fine grid at scan_step/16: a coarse local-minimum test can walk
  // straight past a root that sits on a monotone stretch between two nearby
  // dips, so every cell gets the fine sampling.
  const std::size_t n_coarse =
      static_cast<std::size_t>(std::ceil((k_max - k_min) / opts.scan_step)) + 1;
  const std::size_t n_grid = (n_coarse - 1) * 16 + 1;
  const double step = (k_max - k_min) / static_cast<double>(n_grid - 1);
  std::vector<double> sig(n_grid);
  parallel_for(n_grid, opts.jobs, [&](std::size_t i) {
    sig[i] = sigma_min_at(g, k_min + static_cast<double>(i) * step);
  });

  std::vector<double> roots;
  auto f = [&](double k) { return sigma_min_at(g, k); };
  for (std::size_t i = 0; i < n_grid; ++i) {
    bool left_ok = (i == 0) || sig[i] <= sig[i - 1];
    bool right_ok = (i + 1 == n_grid) || sig[i] < sig[i + 1];
    if (!(left_ok && right_ok)) continue;
    double a = (i == 0) ? k_min : k_min + (i - 1) * step;
    double b = (i + 1 == n_grid) ? k_max : k_min + (i + 1) * step;
    double k_star = golden_min(f, a, b, opts.k_tol);
    if (k_star <= k_min || k_star >= k_max) continue;
    auto svd = secular_svd(g, Complex(k_star, 0.0), 0);
    const auto& s = svd.singularValues();
    double smax = s(0);
    if (s(s.size() - 1) >= opts.rank_tol * smax) continue;
    roots.push_back(k_star);
  }

  std::sort(roots.begin(), roots.end());
  for (double k : roots) {
    if (!result.eigenvalues.empty() &&
        k - result.eigenvalues.back().k < 100.0 * opts.k_tol)
      continue;  // same root found from two brackets
    auto svd = secular_svd(g, Complex(k, 0.0), 0);
    const auto& s = svd.singularValues();
    int mult = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) < opts.rank_tol * s(0)) ++mult;
    result.eigenvalues.push_back({k, std::max(1, mult)});
  }

  for (std::size_t i = 1; i < result.eigenvalues.size(); ++i) {
    double gap = result.eigenvalues[i].k - result.eigenvalues[i - 1].k;
    if (gap < 2.0 * opts.scan_step) {
      std::ostringstream w;
      w << "eigenvalues " << result.eigenvalues[i - 1].k << " and "
        << result.eigenvalues[i].k
        << " are closer than 2*scan_step; consider a finer grid";
      result.warnings.push_back(w.str());
    }
  }
  return result;
}

Complex Eigenfunction::value(const MetricGraph& g, std::size_t edge,
                             double x) const {
  const Edge& e = g.edges().at(edge);
  return edge_value(Complex(k, 0.0), e.length, coefficients[edge].first,
                    coefficients[edge].second, x);
}

Complex Eigenfunction::derivative(const MetricGraph& g, std::size_t edge,
                                  double x) const {
  const Edge& e = g.edges().at(edge);
  return edge_derivative(Complex(k, 0.0), e.length, coefficients[edge].first,
                         coefficients[edge].second, x);
}

namespace {

// L2 norm squared of alpha e^{ikx} + beta e^{ik(L-x)} over [0, L], real k.
double edge_l2sq(double k, double L, Complex a, Complex b) {
  const Complex I(0.0, 1.0);
  double s = (std::norm(a) + std::norm(b)) * L;
  // cross term: 2 Re[ a conj(b) e^{-ikL} (e^{2ikL}-1)/(2ik) ]
  Complex cross = a * std::conj(b) * std::exp(-I * k * L) *
                  (std::exp(2.0 * I * k * L) - 1.0) / (2.0 * I * k);
  return s + 2.0 * cross.real();
}

}  // namespace

std::vector<Eigenfunction> eigenfunction(const MetricGraph& g, double k,
                                         double rank_tol) {
  auto svd = secular_svd(g, Complex(k, 0.0), Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int mult = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) < rank_tol * s(0)) ++mult;
  if (mult == 0)
    throw NumericalError("eigenfunction: k not in spectrum at tolerance");

  std::vector<Eigenfunction> basis;
  for (int m = 0; m < mult; ++m) {
    Eigen::VectorXcd v = svd.matrixV().col(s.size() - 1 - m);
    Eigenfunction ef;
    ef.k = k;
    double norm_sq = 0.0;
    for (std::size_t ei = 0; ei < g.edges().size(); ++ei) {
      Complex a = v(2 * ei), b = v(2 * ei + 1);
      ef.coefficients.emplace_back(a, b);
      norm_sq += edge_l2sq(k, g.edges()[ei].length, a, b);
    }
    double scale = 1.0 / std::sqrt(norm_sq);
    for (auto& [a, b] : ef.coefficients) {
      a *= scale;
      b *= scale;
    }
    basis.push_back(std::move(ef));
  }
  return basis;
}

std::string spectrum_to_csv(const Spectrum& s, const std::string& graph_hash) {
  std::ostringstream out;
  out << "# graph_hash: " << graph_hash << "\n";
  out << "# interval: " << fmt_double(s.k_min) << "," << fmt_double(s.k_max)
      << "\n";
  out << "# scan_step: " << fmt_double(s.opts.scan_step)
      << " k_tol: " << fmt_double(s.opts.k_tol)
      << " rank_tol: " << fmt_double(s.opts.rank_tol) << "\n";
  if (s.has_zero_mode) out << "# zero_mode: present (k = 0 not listed)\n";
  for (const auto& w : s.warnings) out << "# warning: " << w << "\n";
  out << "k,multiplicity\n";
  for (const auto& ev : s.eigenvalues)
    out << fmt_double(ev.k) << "," << ev.multiplicity << "\n";
  return out.str();
}

}  // namespace qg
