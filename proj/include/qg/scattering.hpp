#pragma once

#include <string>
#include <vector>

#include "qg/secular.hpp"

namespace qg {

/// Scattering matrix at complex wavenumber k, lead order = file order.
/// Outgoing waves are exp(ikx), so poles of the continuation lie in Im k < 0.
struct ScatteringMatrix {
  Complex k;
  Eigen::MatrixXcd S;
  /// Set when the system was near-singular at real k (embedded eigenvalue)
  /// and the evaluation point was nudged to k(1 + 1e-9).
  bool perturbed = false;
};

ScatteringMatrix smatrix(const ExtendedGraph& eg, Complex k);

/// max |S S^dagger - I| at real k; vanishes up to roundoff (unitarity).
double unitarity_defect(const ExtendedGraph& eg, double k);

/// Search rectangle in the open lower half plane.
struct Rectangle {
  double re_min = 0.0, re_max = 0.0;
  double im_min = 0.0, im_max = 0.0;
};

struct ResonanceOptions {
  double k_tol = 1e-11;
  /// Poles closer than this are merged and reported with multiplicity.
  double merge_tol = 1e-6;
  unsigned jobs = 1;
};

struct Pole {
  Complex k;
  int multiplicity = 1;
  double sigma_min = 0.0;  // of A(k) at the refined pole
};

struct ResonanceSet {
  std::vector<Pole> poles;
  Rectangle rect;
  /// Winding number of det A along the initial rectangle boundary; equals
  /// the total pole count (with multiplicity).
  int winding = 0;
};

/// Zeros of det A(k) inside the rectangle: argument-principle counting on
/// the boundary, recursive bisection down to single-zero cells, Newton
/// refinement with a central-difference derivative.
ResonanceSet resonances(const ExtendedGraph& eg, const Rectangle& rect,
                        const ResonanceOptions& opts = {});

/// log |det A(k)| + i arg det A(k); exposed for the argument-principle
/// oracle in tests.
Complex extended_logdet(const ExtendedGraph& eg, Complex k);

/// Winding number of det A along the rectangle boundary (adaptive phase
/// tracking, boundary perturbation on near-pole contours).
int boundary_winding(const ExtendedGraph& eg, const Rectangle& rect);

std::string smatrix_to_csv(const ScatteringMatrix& s,
                           const std::string& graph_hash);
std::string poles_to_csv(const ResonanceSet& r, const std::string& graph_hash);

}  // namespace qg
