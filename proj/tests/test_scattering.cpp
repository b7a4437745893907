#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qg/scattering.hpp"
#include "qg/symmetry.hpp"

using namespace qg;

namespace {

const Complex I(0.0, 1.0);

// lead -- [neumann vertex] -- edge of length L -- terminal vertex
ExtendedGraph dangler(VertexCondition terminal, double L = 1.0) {
  MetricGraph g({{"v", VertexCondition::Neumann}, {"t", terminal}},
                {{"e", "v", "t", L}});
  return ExtendedGraph(g, {{"l", "v"}});
}

// two leads joined by an edge of length L
ExtendedGraph through_edge(double L = 1.0) {
  MetricGraph g({{"a", {}}, {"b", {}}}, {{"e", "a", "b", L}});
  return ExtendedGraph(g, {{"l0", "a"}, {"l1", "b"}});
}

std::vector<Complex> sample_k() {
  std::vector<Complex> ks;
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> re(0.3, 6.0), im(-0.8, 0.8);
  for (int i = 0; i < 10; ++i) ks.emplace_back(re(rng), 0.0);
  for (int i = 0; i < 10; ++i) ks.emplace_back(re(rng), im(rng));
  return ks;
}

}  // namespace

TEST_CASE("dirichlet dangler: S = -exp(2ikL)") {
  ExtendedGraph g = dangler(VertexCondition::Dirichlet, 1.3);
  for (Complex k : sample_k()) {
    ScatteringMatrix s = smatrix(g, k);
    REQUIRE(s.S.rows() == 1);
    CHECK(std::abs(s.S(0, 0) - (-std::exp(2.0 * I * k * 1.3))) < 1e-10);
  }
}

TEST_CASE("neumann dangler: S = +exp(2ikL)") {
  ExtendedGraph g = dangler(VertexCondition::Neumann, 0.7);
  for (Complex k : sample_k())
    CHECK(std::abs(smatrix(g, k).S(0, 0) - std::exp(2.0 * I * k * 0.7)) <
          1e-10);
}

TEST_CASE("two leads through an edge: pure transmission with phase exp(ikL)") {
  ExtendedGraph g = through_edge(1.9);
  for (Complex k : sample_k()) {
    Eigen::MatrixXcd S = smatrix(g, k).S;
    Complex phase = std::exp(I * k * 1.9);
    CHECK(std::abs(S(0, 0)) < 1e-10);
    CHECK(std::abs(S(1, 1)) < 1e-10);
    CHECK(std::abs(S(0, 1) - phase) < 1e-10);
    CHECK(std::abs(S(1, 0) - phase) < 1e-10);
  }
}

TEST_CASE("unitarity at random real k") {
  D4Example ex = builtin_d4_example();
  ExtendedGraph q1 = quotient(ex.parent, ex.action, ex.rep1).quotient;
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(0.1, 20.0);
  for (int i = 0; i < 100; ++i) {
    double k = dist(rng);
    CHECK(unitarity_defect(q1, k) < 1e-9);
  }
}

TEST_CASE("reciprocity: S is symmetric") {
  D4Example ex = builtin_d4_example();
  ExtendedGraph q2 = quotient(ex.parent, ex.action, ex.rep2).quotient;
  for (Complex k : sample_k()) {
    Eigen::MatrixXcd S = smatrix(q2, k).S;
    CHECK((S - S.transpose()).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("analyticity: Cauchy integral reproduces an interior sample") {
  // S is analytic away from poles, so the mean over a small circle around
  // k0 equals S(k0).
  ExtendedGraph g = dangler(VertexCondition::Dirichlet);
  Complex k0(2.0, 0.3);
  const int n = 64;
  Complex avg = 0.0;
  for (int j = 0; j < n; ++j) {
    Complex k = k0 + 0.1 * std::exp(2.0 * M_PI * I * (double(j) / double(n)));
    avg += smatrix(g, k).S(0, 0);
  }
  avg /= double(n);
  CHECK(std::abs(avg - smatrix(g, k0).S(0, 0)) < 1e-10);
}

TEST_CASE("embedded eigenvalue: evaluation point is nudged") {
  // Two dirichlet edges of length 1 support sin(n pi x) with zero value
  // and cancelling currents at the junction: an eigenvalue embedded in the
  // continuous spectrum at k = n pi.
  MetricGraph g({{"v", {}},
                 {"t1", VertexCondition::Dirichlet},
                 {"t2", VertexCondition::Dirichlet}},
                {{"e1", "v", "t1", 1.0}, {"e2", "v", "t2", 1.0}});
  ExtendedGraph eg(g, {{"l", "v"}});
  ScatteringMatrix s = smatrix(eg, Complex(M_PI, 0.0));
  CHECK(s.perturbed);
  CHECK(std::abs(std::abs(s.S(0, 0)) - 1.0) < 1e-6);
  CHECK_FALSE(smatrix(eg, Complex(1.0, 0.0)).perturbed);
}

TEST_CASE("poles of the two-dirichlet-edge dangler match the closed form") {
  // Reflection coefficient has exp(2ik) = -3, i.e. poles at
  // k = (n + 1/2) pi - (ln 3 / 2) i.
  MetricGraph g({{"v", {}},
                 {"t1", VertexCondition::Dirichlet},
                 {"t2", VertexCondition::Dirichlet}},
                {{"e1", "v", "t1", 1.0}, {"e2", "v", "t2", 1.0}});
  ExtendedGraph eg(g, {{"l", "v"}});
  Rectangle rect{0.5, 7.0, -2.0, -0.01};
  ResonanceSet r = resonances(eg, rect);
  REQUIRE(r.poles.size() == 2);
  const double im = -0.5 * std::log(3.0);
  CHECK(std::abs(r.poles[0].k - Complex(0.5 * M_PI, im)) < 1e-8);
  CHECK(std::abs(r.poles[1].k - Complex(1.5 * M_PI, im)) < 1e-8);
  CHECK(r.winding == 2);
  for (const auto& p : r.poles) CHECK(p.sigma_min < 1e-8);
}

TEST_CASE("argument-principle oracle: dense boundary winding per pole cell") {
  // Independent of the bisecting pole finder: wind around each closed-form
  // pole on a dense contour using only extended_logdet.
  MetricGraph g({{"v", {}},
                 {"t1", VertexCondition::Dirichlet},
                 {"t2", VertexCondition::Dirichlet}},
                {{"e1", "v", "t1", 1.0}, {"e2", "v", "t2", 1.0}});
  ExtendedGraph eg(g, {{"l", "v"}});
  auto winding_around = [&](Complex c, double radius) {
    const int n = 720;
    double total = 0.0, prev = 0.0;
    for (int j = 0; j <= n; ++j) {
      Complex k = c + radius * std::exp(2.0 * M_PI * I * (double(j) / n));
      double ph = extended_logdet(eg, k).imag();
      if (j > 0) {
        double d = ph - prev;
        while (d > M_PI) d -= 2.0 * M_PI;
        while (d < -M_PI) d += 2.0 * M_PI;
        total += d;
      }
      prev = ph;
    }
    return static_cast<int>(std::lround(total / (2.0 * M_PI)));
  };
  const double im = -0.5 * std::log(3.0);
  CHECK(winding_around(Complex(0.5 * M_PI, im), 0.2) == 1);
  CHECK(winding_around(Complex(1.5 * M_PI, im), 0.2) == 1);
  CHECK(winding_around(Complex(1.0, -1.2), 0.2) == 0);
}

TEST_CASE("pole-free rectangle comes back empty with zero winding") {
  MetricGraph mg({{"v", {}},
                  {"t1", VertexCondition::Dirichlet},
                  {"t2", VertexCondition::Dirichlet}},
                 {{"e1", "v", "t1", 1.0}, {"e2", "v", "t2", 1.0}});
  ExtendedGraph eg(mg, {{"l", "v"}});
  Rectangle rect{0.5, 7.0, -0.4, -0.01};  // poles sit at Im k = -0.549...
  ResonanceSet r = resonances(eg, rect);
  CHECK(r.poles.empty());
  CHECK(r.winding == 0);
}

TEST_CASE("winding equals the refined pole count on the builtin quotient") {
  D4Example ex = builtin_d4_example();
  ExtendedGraph q1 = quotient(ex.parent, ex.action, ex.rep1).quotient;
  Rectangle rect{0.3, 4.0, -1.2, -0.01};
  ResonanceSet r = resonances(q1, rect);
  int total = 0;
  for (const auto& p : r.poles) total += p.multiplicity;
  CHECK(total == r.winding);
  CHECK(r.winding > 0);
}

TEST_CASE("k = 0 is rejected") {
  ExtendedGraph g = dangler(VertexCondition::Dirichlet);
  CHECK_THROWS_AS(smatrix(g, Complex(0.0, 0.0)), NumericalError);
}

TEST_CASE("smatrix on a graph without leads is rejected") {
  MetricGraph g({{"a", VertexCondition::Dirichlet}, {"b", {}}},
                {{"e", "a", "b", 1.0}});
  CHECK_THROWS_AS(smatrix(ExtendedGraph(g), Complex(1.0, 0.0)),
                  ValidationError);
}
