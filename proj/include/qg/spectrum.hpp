#pragma once

#include <string>
#include <vector>

#include "qg/secular.hpp"

namespace qg {

struct SpectrumOptions {
  /// Grid step of the sigma_min scan; <= 0 selects 0.5*pi/total_length.
  double scan_step = 0.0;
  double k_tol = 1e-11;
  /// Relative rank tolerance: singular values below rank_tol * sigma_max
  /// count towards the nullspace.
  double rank_tol = 1e-8;
  unsigned jobs = 1;
};

struct EigenvalueEntry {
  double k = 0.0;
  int multiplicity = 1;
};

struct Spectrum {
  std::vector<EigenvalueEntry> eigenvalues;
  double k_min = 0.0;
  double k_max = 0.0;
  SpectrumOptions opts;
  /// Set when the graph carries the constant zero mode (connected, all
  /// Neumann); k = 0 itself is outside the secular machinery.
  bool has_zero_mode = false;
  std::vector<std::string> warnings;
};

/// All k in (k_min, k_max) where the secular matrix is rank deficient.
Spectrum spectrum(const MetricGraph& g, double k_min, double k_max,
                  const SpectrumOptions& opts = {});

/// Eigenfunction in per-edge coefficients, L2-normalized over the graph.
struct Eigenfunction {
  double k = 0.0;
  std::vector<std::pair<Complex, Complex>> coefficients;  // (alpha, beta)

  Complex value(const MetricGraph& g, std::size_t edge, double x) const;
  Complex derivative(const MetricGraph& g, std::size_t edge, double x) const;
};

/// Orthonormal basis of the secular nullspace at eigenvalue k.
/// Throws NumericalError if k is not in the spectrum at the rank tolerance.
std::vector<Eigenfunction> eigenfunction(const MetricGraph& g, double k,
                                         double rank_tol = 1e-8);

/// Smallest singular value of the secular matrix, and the relative gap
/// sigma_min / sigma_max; shared by spectrum search and tests.
double secular_sigma_min(const MetricGraph& g, Complex k);

/// CSV export (columns k, multiplicity) with a manifest comment header.
std::string spectrum_to_csv(const Spectrum& s, const std::string& graph_hash);

}  // namespace qg
