#pragma once

#include <Eigen/Dense>

#include "qg/graph.hpp"

namespace qg {

/// Homogeneous vertex-condition system of a compact graph at wavenumber k.
/// Unknowns are the per-edge coefficients (alpha_e, beta_e) of the scaled
/// basis {exp(ikx), exp(ik(L_e - x))}; the matrix is 2|E| x 2|E| and the
/// spectrum is its rank-deficiency set on the real axis.
struct SecularSystem {
  Complex k;
  Eigen::MatrixXcd matrix;
};

SecularSystem assemble_secular(const MetricGraph& g, Complex k);

/// Vertex-condition system of an extended graph. Unknowns are the 2|E| edge
/// coefficients plus the |L| outgoing amplitudes; incoming amplitudes enter
/// through the right-hand side B (one column per lead, lead file order).
struct ExtendedSystem {
  Complex k;
  Eigen::MatrixXcd A;  // (2|E|+|L|) x (2|E|+|L|)
  Eigen::MatrixXcd B;  // (2|E|+|L|) x |L|
};

ExtendedSystem assemble_extended(const ExtendedGraph& eg, Complex k);

/// Value and outgoing-derivative coefficients of one solution on the edge
/// basis, used by eigenfunction evaluation.
///   f_e(x) = alpha exp(ikx) + beta exp(ik(L-x))
inline Complex edge_value(Complex k, double length, Complex alpha,
                          Complex beta, double x) {
  const Complex I(0.0, 1.0);
  return alpha * std::exp(I * k * x) + beta * std::exp(I * k * (length - x));
}

inline Complex edge_derivative(Complex k, double length, Complex alpha,
                               Complex beta, double x) {
  const Complex I(0.0, 1.0);
  return I * k *
         (alpha * std::exp(I * k * x) - beta * std::exp(I * k * (length - x)));
}

}  // namespace qg
