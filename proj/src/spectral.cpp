#include "curvegraph/spectral.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "curvegraph/error.hpp"

namespace curvegraph {

namespace {

using Eigen::Index;

void check_time(double t) {
  if (!(t >= 0.0)) throw Error(ErrorCode::NegativeTime, "time must be nonnegative");
}

void check_function(const SpectralDecomposition& dec, const VertexFunction& f) {
  if (f.size() != dec.eigenvalues.size()) {
    throw Error(ErrorCode::InvalidParameter, "function size does not match the decomposition");
  }
}

void require_nonnegative(const WeightedGraph& g, const GraphCertificate& certificate) {
  if (!certificate.implies(g, 0.0, Dimension::infinite())) {
    throw Error(ErrorCode::PreconditionNotCertified,
                "this inequality needs a CD(0, infinity) certificate for the graph");
  }
}

PointwiseCheck pointwise(const VertexFunction& lhs, const VertexFunction& rhs) {
  PointwiseCheck c;
  const double scale = std::max({1.0, lhs.cwiseAbs().maxCoeff(), rhs.cwiseAbs().maxCoeff()});
  c.tolerance = 1e-9 * scale;
  Index worst = 0;
  c.slack = (rhs - lhs).minCoeff(&worst);
  c.worst_vertex = static_cast<std::size_t>(worst);
  c.lhs = lhs[worst];
  c.rhs = rhs[worst];
  c.holds = c.slack >= -c.tolerance;
  return c;
}

ScalarCheck scalar(double lhs, double rhs) {
  ScalarCheck c;
  c.lhs = lhs;
  c.rhs = rhs;
  c.slack = rhs - lhs;
  c.holds = c.slack >= -relative_tolerance(lhs, rhs);
  return c;
}

}  // namespace

double SpectralDecomposition::lambda(std::size_t k) const {
  if (k < 1 || k > size()) {
    throw Error(ErrorCode::KOutOfRange, "eigenvalue index " + std::to_string(k) + " out of range");
  }
  return eigenvalues[static_cast<Index>(k - 1)];
}

SpectralDecomposition decompose(const WeightedGraph& g) {
  if (g.size() > kMaxSpectralVertices) {
    throw Error(ErrorCode::TooLarge, "dense eigensolver is limited to " +
                                         std::to_string(kMaxSpectralVertices) + " vertices");
  }
  const auto n = static_cast<Index>(g.size());
  const Eigen::VectorXd inv_sqrt = g.measures().array().rsqrt();
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) {
    const auto u = static_cast<Index>(e.u);
    const auto v = static_cast<Index>(e.v);
    S(u, v) -= e.w * inv_sqrt[u] * inv_sqrt[v];
    S(v, u) = S(u, v);
  }
  for (Index x = 0; x < n; ++x) {
    S(x, x) = g.weighted_degree(static_cast<std::size_t>(x)) * inv_sqrt[x] * inv_sqrt[x];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::InvalidParameter, "eigensolver failed");

  SpectralDecomposition dec;
  dec.eigenvalues = es.eigenvalues();
  dec.measure = g.measures();
  dec.eigenfunctions = inv_sqrt.asDiagonal() * es.eigenvectors();
  // Orthonormal in l^2(mu) by construction; normalize once more to wash out rounding.
  for (Index i = 0; i < n; ++i) {
    Eigen::VectorXd psi = dec.eigenfunctions.col(i);
    const double norm = std::sqrt((dec.measure.array() * psi.array().square()).sum());
    dec.eigenfunctions.col(i) = psi / norm;
  }
  // The constant mode is fixed up to sign; make it positive.
  if (dec.eigenfunctions.col(0).sum() < 0) dec.eigenfunctions.col(0) *= -1.0;
  return dec;
}

VertexFunction heat_apply(const SpectralDecomposition& dec, const VertexFunction& f, double t) {
  check_time(t);
  check_function(dec, f);
  if (t == 0.0) return f;
  const Eigen::VectorXd coeff = dec.eigenfunctions.transpose() * dec.measure.cwiseProduct(f);
  const Eigen::VectorXd decay = (-t * dec.eigenvalues.array()).exp();
  return dec.eigenfunctions * decay.cwiseProduct(coeff);
}

Eigen::MatrixXd heat_kernel(const SpectralDecomposition& dec, double t) {
  check_time(t);
  const Eigen::VectorXd decay = (-t * dec.eigenvalues.array()).exp();
  return dec.eigenfunctions * decay.asDiagonal() * dec.eigenfunctions.transpose();
}

double SemigroupResiduals::worst() const {
  return std::max({self_adjoint, commutation, semigroup, std::max(0.0, -kernel_min), mass,
                   conservation});
}

SemigroupResiduals semigroup_residuals(const WeightedGraph& g, const SpectralDecomposition& dec,
                                       const VertexFunction& f, const VertexFunction& h, double s,
                                       double t) {
  check_time(s);
  check_time(t);
  check_function(dec, f);
  check_function(dec, h);
  SemigroupResiduals r;
  r.scale = std::max({1.0, f.cwiseAbs().maxCoeff(), h.cwiseAbs().maxCoeff()});
  const VertexFunction ptf = heat_apply(dec, f, t);
  r.self_adjoint = std::abs(inner(g, ptf, h) - inner(g, f, heat_apply(dec, h, t)));
  r.commutation =
      (heat_apply(dec, laplacian_apply(g, f), t) - laplacian_apply(g, ptf)).cwiseAbs().maxCoeff();
  r.semigroup = (heat_apply(dec, heat_apply(dec, f, s), t) - heat_apply(dec, f, t + s))
                    .cwiseAbs()
                    .maxCoeff();
  const Eigen::MatrixXd p = heat_kernel(dec, t);
  r.kernel_min = p.minCoeff();
  r.mass = ((p * dec.measure).array() - 1.0).abs().maxCoeff();
  r.conservation = std::abs(g.measures().dot(ptf) - g.measures().dot(f));
  return r;
}

PointwiseCheck gradient_estimate_check(const WeightedGraph& g, const SpectralDecomposition& dec,
                                       const VertexFunction& f, double t,
                                       const GraphCertificate& certificate) {
  if (certificate.fingerprint() != g.fingerprint()) {
    throw Error(ErrorCode::PreconditionNotCertified, "certificate belongs to a different graph");
  }
  const double K = std::max(0.0, -certificate.K());
  const VertexFunction lhs = gamma(g, heat_apply(dec, f, t));
  const VertexFunction rhs = std::exp(2.0 * K * t) * heat_apply(dec, gamma(g, f), t);
  return pointwise(lhs, rhs);
}

PointwiseCheck reverse_poincare_check(const WeightedGraph& g, const SpectralDecomposition& dec,
                                      const VertexFunction& f, double t,
                                      const GraphCertificate& certificate) {
  require_nonnegative(g, certificate);
  const VertexFunction ptf = heat_apply(dec, f, t);
  const VertexFunction lhs = 2.0 * t * gamma(g, ptf);
  const VertexFunction rhs = heat_apply(dec, f.cwiseProduct(f), t) - ptf.cwiseProduct(ptf);
  return pointwise(lhs, rhs);
}

ScalarCheck l1_contraction_check(const WeightedGraph& g, const SpectralDecomposition& dec,
                                 const VertexFunction& f, double t,
                                 const GraphCertificate& certificate) {
  require_nonnegative(g, certificate);
  const double lhs = l1_norm(g, f - heat_apply(dec, f, t));
  const double rhs = std::sqrt(2.0 * t) * l1_norm(g, gamma(g, f).cwiseMax(0.0).cwiseSqrt());
  return scalar(lhs, rhs);
}

ScalarCheck boundary_measure_check(const WeightedGraph& g, const VertexSet& S) {
  const VertexFunction chi = S.indicator(g.size());
  const double lhs = l1_norm(g, gamma(g, chi).cwiseMax(0.0).cwiseSqrt());
  double boundary = 0.0;
  for (const Edge& e : g.edges()) {
    if (S.contains(e.u) != S.contains(e.v)) boundary += e.w;
  }
  return scalar(lhs, std::sqrt(2.0 * d_nor(g)) * boundary);
}

}  // namespace curvegraph
