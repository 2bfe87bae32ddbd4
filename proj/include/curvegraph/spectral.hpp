#pragma once

#include <cmath>
#include <cstddef>

#include "curvegraph/curvature.hpp"
#include "curvegraph/graph.hpp"

namespace curvegraph {

inline constexpr std::size_t kMaxSpectralVertices = 3000;

/// Eigenpairs of the mu-Laplacian with Delta psi_i = -lambda_i psi_i,
/// eigenvalues ascending and eigenfunctions orthonormal in l^2(V, mu).
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  /// Column i is psi_{i+1}.
  Eigen::MatrixXd eigenfunctions;
  Eigen::VectorXd measure;

  std::size_t size() const noexcept { return static_cast<std::size_t>(eigenvalues.size()); }
  /// 1-based accessor: lambda(1) = 0, lambda(2) is the spectral gap.
  double lambda(std::size_t k) const;
};

/// Dense eigensolve of M^{-1/2} (D - W) M^{-1/2}; eigenvectors are mapped
/// back through M^{-1/2}. Throws Error{TooLarge} beyond kMaxSpectralVertices.
SpectralDecomposition decompose(const WeightedGraph& g);

/// P_t f = sum_i e^{-lambda_i t} <psi_i, f>_mu psi_i. Throws Error{NegativeTime}.
VertexFunction heat_apply(const SpectralDecomposition& dec, const VertexFunction& f, double t);
/// Kernel p_t(x,y) = sum_i e^{-lambda_i t} psi_i(x) psi_i(y), so that
/// P_t f(x) = sum_y p_t(x,y) f(y) mu(y).
Eigen::MatrixXd heat_kernel(const SpectralDecomposition& dec, double t);

struct SemigroupResiduals {
  /// |<P_t f, h>_mu - <f, P_t h>_mu|
  double self_adjoint = 0.0;
  /// max |P_t Delta f - Delta P_t f|
  double commutation = 0.0;
  /// max |P_t P_s f - P_{t+s} f|
  double semigroup = 0.0;
  /// Most negative kernel entry, raw (negative means a violation).
  double kernel_min = 0.0;
  /// max_x |sum_y p_t(x,y) mu(y) - 1|
  double mass = 0.0;
  /// |sum_x P_t f(x) mu(x) - sum_x f(x) mu(x)|
  double conservation = 0.0;
  /// Scale used for relative comparison: max(1, ||f||_inf, ||h||_inf).
  double scale = 1.0;

  /// Worst of the residuals, with the kernel entry clamped at zero.
  double worst() const;
};

SemigroupResiduals semigroup_residuals(const WeightedGraph& g, const SpectralDecomposition& dec,
                                       const VertexFunction& f, const VertexFunction& h, double s,
                                       double t);

/// Result of a pointwise inequality lhs(x) <= rhs(x), summarized at the vertex
/// with the least slack.
struct PointwiseCheck {
  bool holds = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // min_x (rhs - lhs)
  std::size_t worst_vertex = 0;
  double tolerance = 0.0;
};

/// Gamma(P_t f) <= e^{2Kt} P_t(Gamma f) with K = max(0, -certificate.K()).
PointwiseCheck gradient_estimate_check(const WeightedGraph& g, const SpectralDecomposition& dec,
                                       const VertexFunction& f, double t,
                                       const GraphCertificate& certificate);

/// 2t Gamma(P_t f) <= P_t(f^2) - (P_t f)^2. Requires a CD(0, infinity)
/// certificate for g, otherwise Error{PreconditionNotCertified}.
PointwiseCheck reverse_poincare_check(const WeightedGraph& g, const SpectralDecomposition& dec,
                                      const VertexFunction& f, double t,
                                      const GraphCertificate& certificate);

/// Scalar inequality lhs <= rhs.
struct ScalarCheck {
  bool holds = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
};

/// ||f - P_t f||_1 <= sqrt(2t) ||sqrt(Gamma f)||_1 under CD(0, infinity).
ScalarCheck l1_contraction_check(const WeightedGraph& g, const SpectralDecomposition& dec,
                                 const VertexFunction& f, double t,
                                 const GraphCertificate& certificate);

/// ||sqrt(Gamma chi_S)||_1 <= sqrt(2 D^nor) |E(S, V \ S)|_w. Holds on every graph.
ScalarCheck boundary_measure_check(const WeightedGraph& g, const VertexSet& S);

/// Tolerance policy shared by the inequality checks.
inline double relative_tolerance(double lhs, double rhs, double tol = 1e-9) {
  double m = 1.0;
  if (std::abs(lhs) > m) m = std::abs(lhs);
  if (std::abs(rhs) > m) m = std::abs(rhs);
  return tol * m;
}

}  // namespace curvegraph
