#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "curvegraph/graph.hpp"

namespace curvegraph {

/// Dimension parameter n of CD(K,n); infinity is a distinguished value.
class Dimension {
 public:
  static Dimension infinite() { return Dimension(std::numeric_limits<double>::infinity()); }
  /// Throws Error{InvalidParameter} unless n > 0.
  static Dimension finite(double n);

  bool is_infinite() const noexcept { return value_ == std::numeric_limits<double>::infinity(); }
  double value() const noexcept { return value_; }
  /// 1/n, or 0 for n = infinity.
  double inverse() const noexcept { return is_infinite() ? 0.0 : 1.0 / value_; }

  friend bool operator==(Dimension a, Dimension b) { return a.value_ == b.value_; }

 private:
  explicit Dimension(double v) : value_(v) {}
  double value_;
};

/// The three local quadratic forms at a vertex, in the coordinates of B_2(x)
/// ordered as: center, neighbors (ascending), then the distance-2 sphere
/// (ascending). For f restricted to the support:
///   f^T G2 f = Gamma_2(f)(x),  f^T G1 f = Gamma(f)(x),  drow f = Delta f(x).
struct LocalForms {
  std::size_t center = 0;
  std::vector<std::size_t> support;
  std::size_t neighbor_count = 0;
  Eigen::MatrixXd G2;
  Eigen::MatrixXd G1;
  Eigen::RowVectorXd drow;

  /// Restriction of a full vertex function to the support coordinates.
  Eigen::VectorXd restrict(const VertexFunction& f) const;
  /// Full-length function equal to `local` on the support and zero elsewhere.
  VertexFunction embed(const Eigen::VectorXd& local, std::size_t vertex_count) const;
};

/// Gamma_2(f,h)(x) = 1/2 { Delta Gamma(f,h) - Gamma(f, Delta h) - Gamma(h, Delta f) }(x),
/// evaluated by composing the global Delta and Gamma operators.
double gamma2_bilinear(const WeightedGraph& g, const VertexFunction& f, const VertexFunction& h,
                       std::size_t x);
double gamma2_value(const WeightedGraph& g, const VertexFunction& f, std::size_t x);

/// Independent closed-form evaluation of Gamma_2(f)(x) through the
/// second-difference term H f(x) and degree corrections. Kept as a
/// cross-check for the assembled matrices.
double gamma2_explicit(const WeightedGraph& g, const VertexFunction& f, std::size_t x);

LocalForms local_forms(const WeightedGraph& g, std::size_t x);

inline constexpr double kPsdTolerance = 1e-9;

struct CdCheckResult {
  std::size_t vertex = 0;
  bool holds = false;
  double min_eigenvalue = 0.0;
  /// Absolute threshold used: tol * max(1, ||Q||_F).
  double threshold = 0.0;
  /// Eigenvector of the smallest eigenvalue, embedded as a full vertex function.
  VertexFunction witness;
};

/// PSD test of Q = G2 - K G1 - (1/n) drow^T drow.
CdCheckResult cd_check(const WeightedGraph& g, std::size_t x, double K, Dimension n,
                       double tol = kPsdTolerance);
CdCheckResult cd_check(const LocalForms& forms, std::size_t vertex_count, double K, Dimension n,
                       double tol = kPsdTolerance);

struct CurvatureCertificate {
  std::size_t vertex = 0;
  Dimension n = Dimension::infinite();
  /// Largest K with CD(K,n) at the vertex; -infinity when no K works.
  double value = 0.0;
  bool psd_at_zero = false;
  /// Minimizer of the Rayleigh quotient when value is finite, otherwise a
  /// function violating CD(K,n) for every K. Zero outside B_2(x).
  VertexFunction witness;
};

/// Exact local curvature K(x,n) = inf { f^T Q0 f / f^T G1 f : Gamma(f)(x) > 0 },
/// Q0 = G2 - (1/n) drow^T drow, via a Schur complement over the distance-2
/// sphere followed by a generalized symmetric eigenproblem on the neighbors.
/// Throws Error{DegenerateVertex} for an isolated vertex.
CurvatureCertificate curvature_value(const WeightedGraph& g, std::size_t x, Dimension n);
std::vector<CurvatureCertificate> curvature_profile(const WeightedGraph& g, Dimension n);

struct GraphCdCheck;

/// Machine-checked evidence that a specific graph satisfies CD(K,n) at every
/// vertex. Only cd_check_graph() issues these.
class GraphCertificate {
 public:
  double K() const noexcept { return K_; }
  Dimension n() const noexcept { return n_; }
  std::uint64_t fingerprint() const noexcept { return fingerprint_; }

  /// True when this certificate implies CD(K_required, n_required) for g.
  bool implies(const WeightedGraph& g, double K_required, Dimension n_required) const;

 private:
  friend GraphCdCheck cd_check_graph(const WeightedGraph&, double, Dimension, double);
  GraphCertificate(double K, Dimension n, std::uint64_t fp) : K_(K), n_(n), fingerprint_(fp) {}

  double K_;
  Dimension n_;
  std::uint64_t fingerprint_;
};

struct GraphCdCheck {
  bool holds = false;
  std::vector<CdCheckResult> per_vertex;
  std::optional<GraphCertificate> certificate;

  std::vector<std::size_t> failing_vertices() const;
};

GraphCdCheck cd_check_graph(const WeightedGraph& g, double K, Dimension n,
                            double tol = kPsdTolerance);

/// Curvature sweep at n = infinity plus the strongest certificates it supports.
struct CurvatureSummary {
  std::vector<CurvatureCertificate> profile;
  double min_curvature = 0.0;
  /// CD(0, infinity), when it holds.
  std::optional<GraphCertificate> nonnegative;
  /// CD(K, infinity) for K slightly below min_curvature, when finite.
  std::optional<GraphCertificate> lower;
};

CurvatureSummary summarize_curvature(const WeightedGraph& g);

/// Gamma_2(F)(x,y) - Gamma_2(F_y)(x) - Gamma_2(F^x)(y) on the product of two
/// unit-measure graphs, with F_y = F(., y) and F^x = F(x, .). Nonnegative.
double product_superadditivity_residual(const WeightedGraph& g1, const WeightedGraph& g2,
                                        const WeightedGraph& product, const VertexFunction& F,
                                        std::size_t x, std::size_t y);
double product_superadditivity_residual(const WeightedGraph& g1, const WeightedGraph& g2,
                                        const VertexFunction& F, std::size_t x, std::size_t y);

struct ProductCd {
  double K;
  Dimension n;
};

/// Predicted CD pair of G1 x G2 when the factors carry constant measures mu1,
/// mu2 and the product carries mu12:
///   K = min(mu1^2 K1, mu2^2 K2) / mu12^2,
///   n = mu12^2 (mu2^2 n1 + mu1^2 n2) / (mu1^2 mu2^2).
ProductCd product_cd_bound(double K1, Dimension n1, double K2, Dimension n2, double mu1 = 1.0,
                           double mu2 = 1.0, double mu12 = 1.0);

}  // namespace curvegraph
