#include <doctest.h>

#include <random>

#include "../support/oracles.hpp"
#include "curvegraph/curvature.hpp"
#include "curvegraph/error.hpp"
#include "curvegraph/generators.hpp"

using namespace curvegraph;

namespace {

std::vector<WeightedGraph> sample_graphs() {
  std::vector<WeightedGraph> gs;
  gs.push_back(generate({family::Cycle{7}, MeasureMode::unit()}));
  gs.push_back(generate({family::Complete{5}, MeasureMode::degree()}));
  gs.push_back(generate({family::Dumbbell{4}, MeasureMode::degree()}));
  gs.push_back(generate({family::Dumbbell{3}, MeasureMode::unit()}));
  gs.push_back(generate({family::Path{5}, MeasureMode::constant(1.5)}));
  gs.push_back(generate({family::Triangle{1, 2, 3, 1, 1, 1}, MeasureMode::unit()}));
  gs.push_back(generate({family::Tetrahedron{1, 2, 0.5, 3}, MeasureMode::explicit_values({})}));
  gs.push_back(generate({family::Hypercube{3}, MeasureMode::unit()}));
  const std::vector<Edge> w{{0, 1, 2.0}, {1, 2, 0.5}, {2, 3, 1.5}, {3, 0, 1.0}, {0, 2, 3.0},
                            {3, 4, 0.7}, {4, 5, 1.1}, {5, 1, 0.4}};
  gs.push_back(build_graph(6, w, MeasureMode::explicit_values({1.0, 2.0, 0.5, 1.5, 3.0, 0.8})));
  return gs;
}

/// Largest K with oracle Gamma2(x) - K Gamma(x) - (1/n) drow drow^T PSD, by bisection.
double oracle_curvature(const WeightedGraph& g, std::size_t x, double inv_n) {
  const Eigen::MatrixXd L = oracle::laplacian(g);
  const auto xi = static_cast<Eigen::Index>(x);
  const Eigen::MatrixXd G2 = oracle::gamma2_matrix(g, x);
  const Eigen::MatrixXd G1 = oracle::gamma_matrix(L, xi);
  const Eigen::VectorXd d = L.row(xi).transpose();
  auto psd = [&](double K) {
    Eigen::MatrixXd Q = G2 - K * G1 - inv_n * d * d.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -1e-11 * std::max(1.0, Q.norm());
  };
  double lo = -50.0, hi = 50.0;
  REQUIRE(psd(lo));
  for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
    const double mid = 0.5 * (lo + hi);
    (psd(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

TEST_CASE("three evaluation paths of Gamma_2 agree") {
  std::mt19937_64 rng(11);
  for (const auto& g : sample_graphs()) {
    for (std::size_t x = 0; x < g.size(); ++x) {
      const LocalForms lf = local_forms(g, x);
      for (int t = 0; t < 5; ++t) {
        const VertexFunction f = oracle::random_vector(g.size(), rng);
        const Eigen::VectorXd loc = lf.restrict(f);
        const double a = loc.dot(lf.G2 * loc);
        const double b = gamma2_value(g, f, x);
        const double c = gamma2_explicit(g, f, x);
        const double scale = std::max({1.0, std::abs(a), std::abs(b), std::abs(c)});
        CHECK(std::abs(a - b) <= 1e-10 * scale);
        CHECK(std::abs(a - c) <= 1e-10 * scale);
        CHECK(loc.dot(lf.G1 * loc) == doctest::Approx(gamma(g, f, f, x)).epsilon(1e-12));
        CHECK(lf.drow.dot(loc) == doctest::Approx(laplacian_apply(g, f, x)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("local matrices match polarization and the dense oracle") {
  for (const auto& g : sample_graphs()) {
    for (std::size_t x = 0; x < g.size(); ++x) {
      const LocalForms lf = local_forms(g, x);
      const Eigen::MatrixXd dense = oracle::gamma2_matrix(g, x);
      const auto m = static_cast<Eigen::Index>(lf.support.size());
      const double scale = std::max(1.0, dense.cwiseAbs().maxCoeff());
      for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
          const auto u = lf.support[static_cast<std::size_t>(i)];
          const auto v = lf.support[static_cast<std::size_t>(j)];
          CHECK(std::abs(lf.G2(i, j) - dense(static_cast<Eigen::Index>(u),
                                             static_cast<Eigen::Index>(v))) <= 1e-12 * scale);
        }
      }
      // polarization on two basis functions
      if (m >= 2) {
        VertexFunction ey = VertexFunction::Zero(static_cast<Eigen::Index>(g.size()));
        VertexFunction ez = ey;
        ey[static_cast<Eigen::Index>(lf.support[0])] = 1.0;
        ez[static_cast<Eigen::Index>(lf.support[1])] = 1.0;
        CHECK(lf.G2(0, 1) == doctest::Approx(gamma2_bilinear(g, ey, ez, x)).epsilon(1e-12));
      }
      // entries outside B_2(x) vanish in the dense matrix
      for (std::size_t u = 0; u < g.size(); ++u) {
        if (std::find(lf.support.begin(), lf.support.end(), u) == lf.support.end()) {
          CHECK(dense.row(static_cast<Eigen::Index>(u)).cwiseAbs().maxCoeff() <= 1e-12 * scale);
        }
      }
      // Gamma_2(x) + Id is row-stochastic
      CHECK(lf.G2.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-12 * scale);
      CHECK((lf.G2 - lf.G2.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("curvature_value matches a bisection oracle") {
  for (const auto& g : sample_graphs()) {
    for (std::size_t x = 0; x < g.size(); ++x) {
      for (Dimension n : {Dimension::infinite(), Dimension::finite(2.0), Dimension::finite(7.5)}) {
        const auto cert = curvature_value(g, x, n);
        const double ref = oracle_curvature(g, x, n.inverse());
        CHECK(cert.value == doctest::Approx(ref).epsilon(1e-7).scale(1.0));
        // the certificate is consistent with cd_check on both sides
        const double eps = 1e-6 * std::max(1.0, std::abs(cert.value));
        CHECK(cd_check(g, x, cert.value - eps, n).holds);
        CHECK_FALSE(cd_check(g, x, cert.value + eps, n).holds);
        CHECK(cert.psd_at_zero == cd_check(g, x, 0.0, n).holds);
        // witness attains the bound
        const LocalForms lf = local_forms(g, x);
        const Eigen::VectorXd w = lf.restrict(cert.witness);
        const double g1 = w.dot(lf.G1 * w);
        REQUIRE(g1 > 0.0);
        const double dw = lf.drow.dot(w);
        const double q = w.dot(lf.G2 * w) - n.inverse() * dw * dw;
        CHECK(q / g1 == doctest::Approx(cert.value).epsilon(1e-7).scale(1.0));
      }
    }
  }
}

TEST_CASE("cd_check is monotone in K and n") {
  auto g = generate({family::Dumbbell{4}, MeasureMode::unit()});
  for (std::size_t x = 0; x < g.size(); ++x) {
    for (double K : {-2.0, -0.5, 0.0, 0.5, 1.0, 2.0}) {
      for (double n : {1.0, 2.0, 5.0}) {
        if (cd_check(g, x, K, Dimension::finite(n)).holds) {
          CHECK(cd_check(g, x, K - 0.25, Dimension::finite(n)).holds);
          CHECK(cd_check(g, x, K, Dimension::finite(n * 2)).holds);
          CHECK(cd_check(g, x, K, Dimension::infinite()).holds);
        }
      }
    }
  }
}

TEST_CASE("graph certificates") {
  auto c = generate({family::Cycle{6}, MeasureMode::unit()});
  auto check = cd_check_graph(c, 0.0, Dimension::infinite());
  REQUIRE(check.holds);
  REQUIRE(check.certificate.has_value());
  CHECK(check.certificate->implies(c, -1.0, Dimension::infinite()));
  CHECK(check.certificate->implies(c, 0.0, Dimension::infinite()));
  CHECK_FALSE(check.certificate->implies(c, 0.1, Dimension::infinite()));
  CHECK_FALSE(check.certificate->implies(c, 0.0, Dimension::finite(3.0)));
  auto other = generate({family::Cycle{7}, MeasureMode::unit()});
  CHECK_FALSE(check.certificate->implies(other, 0.0, Dimension::infinite()));

  auto db = generate({family::Dumbbell{4}, MeasureMode::degree()});
  auto bad = cd_check_graph(db, 0.0, Dimension::infinite());
  CHECK_FALSE(bad.holds);
  CHECK_FALSE(bad.certificate.has_value());
  CHECK(bad.failing_vertices() == std::vector<std::size_t>{3, 4});
  CHECK(bad.per_vertex[3].min_eigenvalue < 0.0);
  // witness violates the inequality
  const auto& r = bad.per_vertex[3];
  CHECK(gamma2_value(db, r.witness, 3) < 0.0);
}

TEST_CASE("summaries") {
  auto s = summarize_curvature(generate({family::Complete{4}, MeasureMode::unit()}));
  CHECK(s.min_curvature > 0.0);
  CHECK(s.nonnegative.has_value());
  REQUIRE(s.lower.has_value());
  CHECK(s.lower->K() <= s.min_curvature);
  auto d = summarize_curvature(generate({family::Dumbbell{5}, MeasureMode::degree()}));
  CHECK(d.min_curvature < 0.0);
  CHECK_FALSE(d.nonnegative.has_value());
  CHECK(d.lower.has_value());
}

TEST_CASE("triangle and tetrahedron closed forms") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.2, 4.0);
  for (int t = 0; t < 10; ++t) {
    const double a = u(rng), b = u(rng), c = u(rng), A = u(rng), B = u(rng), C = u(rng);
    auto g = generate({family::Triangle{a, b, c, A, B, C}, MeasureMode::explicit_values({})});
    const LocalForms lf = local_forms(g, 0);
    CHECK(oracle::max_rel_diff(lf.G2, oracle::triangle_closed_form(a, b, c, A, B, C)) < 1e-10);

    auto tet = generate({family::Tetrahedron{a, b, c, A}, MeasureMode::explicit_values({})});
    const LocalForms lt = local_forms(tet, 0);
    CHECK(oracle::max_rel_diff(4 * A * A * lt.G2, oracle::tetrahedron_closed_form_scaled(a, b, c)) <
          1e-10);
    CHECK(cd_check_graph(tet, 0.0, Dimension::infinite()).holds);
  }
  // special case a = c, unit measure, at y (center first: y, x, z)
  const double a = 1.3, b = 0.4;
  auto g = generate({family::Triangle{a, b, a, 1, 1, 1}, MeasureMode::unit()});
  Eigen::MatrixXd Gy(3, 3);
  Gy << 10 * a * a, -5 * a * a, -5 * a * a, -5 * a * a, 3 * a * a + 4 * a * b, 2 * a * a - 4 * a * b,
      -5 * a * a, 2 * a * a - 4 * a * b, 3 * a * a + 4 * a * b;
  CHECK(oracle::max_rel_diff(4 * local_forms(g, 1).G2, Gy) < 1e-12);
}

TEST_CASE("degenerate input") {
  CHECK_THROWS_AS(Dimension::finite(0.0), Error);
  CHECK_THROWS_AS(Dimension::finite(-1.0), Error);
  CHECK(Dimension::infinite().inverse() == 0.0);
}

TEST_CASE("product superadditivity") {
  std::mt19937_64 rng(5);
  auto c4 = generate({family::Cycle{4}, MeasureMode::unit()});
  auto k3 = generate({family::Complete{3}, MeasureMode::unit()});
  auto prod = cartesian_product(c4, k3);
  for (int t = 0; t < 40; ++t) {
    const VertexFunction F = oracle::random_vector(prod.size(), rng, -3.0, 3.0);
    for (std::size_t x = 0; x < 4; ++x) {
      for (std::size_t y = 0; y < 3; ++y) {
        CHECK(product_superadditivity_residual(c4, k3, prod, F, x, y) >= -1e-10);
      }
    }
  }
  auto c5 = generate({family::Cycle{5}, MeasureMode::degree()});
  const VertexFunction any = VertexFunction::Zero(25);
  CHECK_THROWS_AS(product_superadditivity_residual(c5, c5, any, 0, 0), Error);
}

TEST_CASE("tightness lift attains equality on the product") {
  for (const auto& spec : {FamilySpec{family::Cycle{6}, MeasureMode::unit()},
                           FamilySpec{family::Complete{4}, MeasureMode::unit()},
                           FamilySpec{family::Dumbbell{3}, MeasureMode::unit()}}) {
    auto g = generate(spec);
    auto gg = cartesian_product(g, g);
    const std::size_t x = g.size() - 1;
    const std::size_t xx = x * g.size() + x;
    for (Dimension n : {Dimension::finite(2.0), Dimension::finite(5.0)}) {
      const auto cert = curvature_value(g, x, n);
      const VertexFunction f = cert.witness;
      const VertexFunction F = product_tightness_function(g, f, x);
      CHECK(std::abs(product_superadditivity_residual(g, g, gg, F, x, x)) < 1e-9);
      const double lhs = gamma2_value(gg, F, xx);
      const double dF = laplacian_apply(gg, F, xx);
      const double rhs = dF * dF / (2.0 * n.value()) + cert.value * gamma(gg, F, F, xx);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8).scale(1.0));
      CHECK(laplacian_apply(gg, F, xx) == doctest::Approx(2.0 * laplacian_apply(g, f, x)));
    }
  }
}

TEST_CASE("product curvature prediction") {
  auto p = product_cd_bound(1.0, Dimension::finite(2.0), 0.5, Dimension::finite(3.0));
  CHECK(p.K == 0.5);
  CHECK(p.n.value() == 5.0);
  auto q = product_cd_bound(1.0, Dimension::finite(2.0), 1.0, Dimension::finite(2.0), 2.0, 2.0, 2.0);
  CHECK(q.K == doctest::Approx(1.0));
  CHECK(q.n.value() == doctest::Approx(4.0 * (4.0 * 2.0 + 4.0 * 2.0) / 16.0));
  auto inf = product_cd_bound(0.0, Dimension::infinite(), 1.0, Dimension::finite(2.0));
  CHECK(inf.n.is_infinite());

  // certified product of certified factors
  auto k3 = generate({family::Complete{3}, MeasureMode::unit()});
  auto c4 = generate({family::Cycle{4}, MeasureMode::unit()});
  const double K1 = summarize_curvature(k3).min_curvature;
  const double K2 = summarize_curvature(c4).min_curvature;
  const Dimension n1 = Dimension::finite(4.0), n2 = Dimension::finite(4.0);
  double K1n = 1e9, K2n = 1e9;
  for (std::size_t x = 0; x < 3; ++x) K1n = std::min(K1n, curvature_value(k3, x, n1).value);
  for (std::size_t x = 0; x < 4; ++x) K2n = std::min(K2n, curvature_value(c4, x, n2).value);
  auto pred = product_cd_bound(K1n, n1, K2n, n2);
  auto prod = cartesian_product(k3, c4);
  CHECK(cd_check_graph(prod, pred.K - 1e-9, pred.n).holds);
  CHECK(K1 >= K1n);
  CHECK(K2 >= K2n);
}
