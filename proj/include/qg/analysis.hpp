#pragma once

#include <string>
#include <vector>

#include "qg/scattering.hpp"
#include "qg/spectrum.hpp"
#include "qg/symmetry.hpp"

namespace qg {

struct MatchedPair {
  Complex left;
  Complex right;
  double distance = 0.0;
};

struct ComparisonReport {
  std::string kind;  // "spectra" or "poles"
  bool pass = false;
  double tolerance = 0.0;
  double max_distance = 0.0;
  std::vector<MatchedPair> pairs;
  std::vector<Complex> unmatched_left;
  std::vector<Complex> unmatched_right;
  std::vector<std::string> notes;

  std::string summary() const;  // aligned plain-text table
  std::string to_json() const;
};

/// Pair the two eigenvalue lists in increasing order and report the largest
/// gap. Throws ValidationError when the intervals differ.
ComparisonReport compare_spectra(const Spectrum& left, const Spectrum& right,
                                 double tol = 1e-6);

/// max-norm of T^{-1} S_right T - S_left.
double conjugation_residual(const Eigen::MatrixXcd& s_left,
                            const Eigen::MatrixXcd& s_right,
                            const Eigen::MatrixXcd& t);

/// Injective nearest-first matching of the two pole lists. Throws
/// ValidationError when the rectangles differ.
ComparisonReport compare_poles(const ResonanceSet& left,
                               const ResonanceSet& right, double tol = 1e-6);

/// Oriented piece of an edge: parameter runs from x_start to x_end.
struct Segment {
  std::string edge;
  double x_start = 0.0;
  double x_end = 0.0;
};

/// Correspondence of both graphs, block by block: source_blocks[j][s] and
/// target_blocks[j][s] are isometric pieces, and the candidate function on
/// target block j is sum_i T(j,i) * (source function on block i).
struct BlockMap {
  std::vector<std::vector<Segment>> source_blocks;
  std::vector<std::vector<Segment>> target_blocks;
};

/// Largest violation of the target graph's vertex conditions (and of
/// continuity at interior seams) by the transplanted candidate function.
double transplantation_residual(const MetricGraph& source,
                                const Eigenfunction& f,
                                const MetricGraph& target, const BlockMap& bm,
                                const Eigen::MatrixXcd& t);

/// Block correspondence for the built-in quotient pair (source = rep1
/// quotient, target = rep2 quotient of the lead-free parent).
BlockMap builtin_block_map();

struct BreakingResult {
  ComparisonReport symmetric;
  ComparisonReport broken;
  /// symmetric placement agrees while the broken one does not
  bool divergence_detected = false;
};

/// Pole comparison of the two quotients, once with the symmetric lead set
/// carried by `parent` and once with leads attached only at
/// `broken_vertices` (mapped through the quotient).
BreakingResult symmetry_breaking_experiment(
    const ExtendedGraph& parent, const GraphAction& action, const Rep1D& rep1,
    const Rep1D& rep2, const std::vector<std::string>& broken_vertices,
    const Rectangle& rect, const ResonanceOptions& opts = {},
    double tol = 1e-6);

/// CSV export of matched pole pairs with a manifest comment header.
std::string pole_pairs_to_csv(const ComparisonReport& rep,
                              const std::string& left_hash,
                              const std::string& right_hash);

}  // namespace qg
