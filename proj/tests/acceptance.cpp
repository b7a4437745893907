// End-to-end acceptance checks; prints one PASS/FAIL line per criterion and
// exits nonzero if any fail.
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "qg/analysis.hpp"

using namespace qg;

namespace {

int failures = 0;

void report(int id, const char* what, bool ok, const std::string& detail) {
  std::printf("[%s] %2d %s%s%s\n", ok ? "PASS" : "FAIL", id, what,
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!ok) ++failures;
}

const Complex I(0.0, 1.0);

}  // namespace

int main() {
  D4Example ex = builtin_d4_example();
  ExtendedGraph q1 = quotient(ex.parent, ex.action, ex.rep1).quotient;
  ExtendedGraph q2 = quotient(ex.parent, ex.action, ex.rep2).quotient;
  ExtendedGraph bare(ex.parent.graph());
  MetricGraph c1 = quotient(bare, ex.action, ex.rep1).quotient.graph();
  MetricGraph c2 = quotient(bare, ex.action, ex.rep2).quotient.graph();

  // 1. closed-form interval spectra
  {
    double err = 0.0;
    MetricGraph dd({{"a", VertexCondition::Dirichlet},
                    {"b", VertexCondition::Dirichlet}},
                   {{"e", "a", "b", 1.0}});
    Spectrum sdd = spectrum(dd, 0.1, 10.5 * M_PI);
    MetricGraph nd({{"a", VertexCondition::Neumann},
                    {"b", VertexCondition::Dirichlet}},
                   {{"e", "a", "b", 1.0}});
    Spectrum snd = spectrum(nd, 0.1, 10.0 * M_PI);
    bool ok = sdd.eigenvalues.size() == 10 && snd.eigenvalues.size() == 10;
    for (int n = 0; ok && n < 10; ++n) {
      err = std::max(err, std::abs(sdd.eigenvalues[n].k - (n + 1) * M_PI));
      err = std::max(err, std::abs(snd.eigenvalues[n].k - (n + 0.5) * M_PI));
    }
    report(1, "interval spectra n*pi and (n-1/2)*pi", ok && err < 1e-10,
           "max error " + fmt_double(err));
  }

  // 2. closed-form scattering
  {
    MetricGraph gd({{"v", {}}, {"t", VertexCondition::Dirichlet}},
                   {{"e", "v", "t", 1.0}});
    ExtendedGraph dirich(gd, {{"l", "v"}});
    MetricGraph gn({{"v", {}}, {"t", VertexCondition::Neumann}},
                   {{"e", "v", "t", 1.0}});
    ExtendedGraph neum(gn, {{"l", "v"}});
    MetricGraph gt({{"a", {}}, {"b", {}}}, {{"e", "a", "b", 1.0}});
    ExtendedGraph two(gt, {{"l0", "a"}, {"l1", "b"}});
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> re(0.3, 6.0), im(-0.8, 0.8);
    double err = 0.0;
    for (int i = 0; i < 20; ++i) {
      Complex k(re(rng), i < 10 ? 0.0 : im(rng));
      Complex e1 = std::exp(2.0 * I * k), eh = std::exp(I * k);
      err = std::max(err, std::abs(smatrix(dirich, k).S(0, 0) + e1));
      err = std::max(err, std::abs(smatrix(neum, k).S(0, 0) - e1));
      Eigen::MatrixXcd S = smatrix(two, k).S;
      err = std::max({err, std::abs(S(0, 0)), std::abs(S(1, 1)),
                      std::abs(S(0, 1) - eh), std::abs(S(1, 0) - eh)});
    }
    report(2, "closed-form S for dangler and through edge", err < 1e-10,
           "max error " + fmt_double(err));
  }

  // 3. unitarity on every builtin graph
  {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> dist(0.1, 20.0);
    double worst = 0.0;
    for (const ExtendedGraph* g : {&ex.parent, &q1, &q2})
      for (int i = 0; i < 100; ++i)
        worst = std::max(worst, unitarity_defect(*g, dist(rng)));
    report(3, "unitarity defect at 100 random real k", worst < 1e-9,
           "max defect " + fmt_double(worst));
  }

  // 4. induced characters agree; trivial rep differs
  {
    const FiniteGroup& G = ex.action.group;
    std::vector<int> chi1 = induced_character(G, ex.rep1);
    std::vector<int> chi2 = induced_character(G, ex.rep2);
    Rep1D trivial;
    trivial.subgroup = ex.rep1.subgroup;
    for (int x : trivial.subgroup) trivial.values[x] = 1;
    bool ok = chi1 == chi2 && chi1[G.identity()] == 2 &&
              chi1[G.index_of("s2")] == -2 &&
              !induction_equivalent(G, ex.rep1, trivial);
    report(4, "induction condition with negative control", ok, "");
  }

  // 5. isospectrality on (0.1, 15)
  {
    SpectrumOptions opts;
    opts.jobs = 0;
    Spectrum s1 = spectrum(c1, 0.1, 15.0, opts);
    Spectrum s2 = spectrum(c2, 0.1, 15.0, opts);
    ComparisonReport rep = compare_spectra(s1, s2, 1e-8);
    double expected = 15.0 * c1.total_length() / M_PI;
    report(5, "isospectral quotients on (0.1, 15)",
           rep.pass && std::abs(double(rep.pairs.size()) - expected) < 5.0,
           std::to_string(rep.pairs.size()) + " eigenvalues (Weyl ~" +
               std::to_string(int(expected)) + "), max gap " +
               fmt_double(rep.max_distance));
  }

  // 6. conjugation identity on real grid and complex samples
  {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      double k = 0.1 + (10.0 - 0.1) * i / 99.0;
      worst = std::max(worst,
                       conjugation_residual(smatrix(q1, Complex(k, 0)).S,
                                            smatrix(q2, Complex(k, 0)).S,
                                            ex.transplantation));
    }
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> re(0.3, 8.0), im(-0.9, 0.9);
    int done = 0;
    while (done < 20) {
      Complex k(re(rng), im(rng));
      if (std::abs(k.imag()) < 0.05) continue;  // stay clear of the axis
      try {
        worst = std::max(worst,
                         conjugation_residual(smatrix(q1, k).S,
                                              smatrix(q2, k).S,
                                              ex.transplantation));
        ++done;
      } catch (const NumericalError&) {
        // pole neighborhood: excluded by the criterion
      }
    }
    report(6, "S conjugation by T on 100 real + 20 complex k", worst < 1e-9,
           "max residual " + fmt_double(worst));
  }

  // 7. isopolarity in (0.5, 10) x (-2, -0.01)
  {
    Rectangle rect{0.5, 10.0, -2.0, -0.01};
    ResonanceOptions opts;
    opts.jobs = 0;
    ResonanceSet r1 = resonances(q1, rect, opts);
    ResonanceSet r2 = resonances(q2, rect, opts);
    ComparisonReport rep = compare_poles(r1, r2, 1e-6);
    report(7, "isopolar quotients", rep.pass && !rep.pairs.empty(),
           std::to_string(rep.pairs.size()) + " pole pairs, max gap " +
               fmt_double(rep.max_distance));
  }

  // 8. symmetry breaking
  {
    Rectangle rect{0.3, 2.5, -1.0, -0.01};
    ResonanceOptions opts;
    opts.jobs = 0;
    BreakingResult br = symmetry_breaking_experiment(
        ex.parent, ex.action, ex.rep1, ex.rep2, {"w0"}, rect, opts, 1e-6);
    double sep = br.broken.max_distance;
    for (const auto& z : br.broken.unmatched_left) (void)z;
    report(8, "asymmetric lead breaks isopolarity", br.divergence_detected,
           "unmatched " +
               std::to_string(br.broken.unmatched_left.size() +
                              br.broken.unmatched_right.size()) +
               ", max matched separation " + fmt_double(sep));
  }

  // 9. pole finder against the closed form and the winding count
  {
    MetricGraph g({{"v", {}},
                   {"t1", VertexCondition::Dirichlet},
                   {"t2", VertexCondition::Dirichlet}},
                  {{"e1", "v", "t1", 1.0}, {"e2", "v", "t2", 1.0}});
    ExtendedGraph eg(g, {{"l", "v"}});
    Rectangle rect{0.5, 7.0, -2.0, -0.01};
    ResonanceSet r = resonances(eg, rect);
    const double im = -0.5 * std::log(3.0);
    bool ok = r.poles.size() == 2 && r.winding == 2 &&
              std::abs(r.poles[0].k - Complex(0.5 * M_PI, im)) < 1e-8 &&
              std::abs(r.poles[1].k - Complex(1.5 * M_PI, im)) < 1e-8;
    // winding equals refined count on the builtin quotient as well
    Rectangle rect2{0.3, 4.0, -1.2, -0.01};
    ResonanceSet rq = resonances(q1, rect2);
    int total = 0;
    for (const auto& p : rq.poles) total += p.multiplicity;
    ok = ok && total == rq.winding;
    report(9, "pole finder matches exp(2ik) = -3 and winding counts", ok, "");
  }

  // 10. eigenfunction transplantation
  {
    BlockMap bm = builtin_block_map();
    Spectrum s = spectrum(c1, 0.05, 4.0);
    double worst = 0.0;
    bool ok = s.eigenvalues.size() >= 5;
    for (std::size_t i = 0; ok && i < 5; ++i)
      for (const auto& f : eigenfunction(c1, s.eigenvalues[i].k))
        worst = std::max(
            worst, transplantation_residual(c1, f, c2, bm,
                                            ex.transplantation));
    BlockMap swapped = bm;
    std::swap(swapped.source_blocks[0], swapped.source_blocks[1]);
    double control = transplantation_residual(
        c1, eigenfunction(c1, s.eigenvalues[0].k).at(0), c2, swapped,
        ex.transplantation);
    report(10, "transplanted eigenfunctions fit the partner graph",
           ok && worst < 1e-8 && control > 1e-2,
           "max residual " + fmt_double(worst) + ", swapped control " +
               fmt_double(control));
  }

  if (failures) std::printf("%d acceptance criteria FAILED\n", failures);
  return failures ? 1 : 0;
}
