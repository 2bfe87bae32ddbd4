#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "curvegraph/curvature.hpp"
#include "curvegraph/isoperimetry.hpp"
#include "curvegraph/spectral.hpp"

namespace curvegraph {

enum class Status { Pass, Fail, ReportOnly, Skipped };

std::string to_string(Status s);

/// One evaluated inequality, always normalized to lhs <= rhs.
struct Entry {
  std::string name;
  /// Short human-readable form of the inequality.
  std::string tag;
  std::size_t k = 0;         // 0 when the inequality has no k
  std::size_t instance = 0;  // distinguishes sampled set pairs or times
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
  Status status = Status::ReportOnly;
  std::string reason;  // skip reason or a note
  std::vector<std::pair<std::string, double>> inputs;
  std::vector<std::vector<std::size_t>> sets;
};

/// Pass iff rhs - lhs >= -tol * max(1, |lhs|, |rhs|).
Status judge(double lhs, double rhs, double tol);

/// h_2 as an interval. Exact when enumeration or the connected-set search
/// fits in budget, otherwise [lambda_2 / 2, best Fiedler sweep cut].
struct H2Estimate {
  double lower = 0.0;
  double upper = 0.0;
  std::string method;  // "enumeration", "connected-sets", "bracket"
  std::vector<VertexSet> witness;
  bool exact() const;
  static H2Estimate exact_value(double h2);
};

H2Estimate estimate_h2(const WeightedGraph& g, const SpectralDecomposition& dec,
                       double budget = kEnumerationBudget,
                       std::uint64_t max_connected_sets = 20'000'000);

namespace constants {
double buser();          // (e-1)/(2e)
double ratio();          // 20 sqrt(2) e / (e-1)
double higher_buser();   // (e-1)^2 / (40 sqrt(2) e^2)
double concentration();  // (e-1) / (20 sqrt(2) e)
double diameter();       // 40 e / (e-1)
}  // namespace constants

/// floor(x) after a 1e-12 relative upward nudge.
double nudged_floor(double x);

// Each check below returns an Entry with status Pass or Fail. Checks whose
// hypotheses are curvature conditions take a certificate and throw
// Error{PreconditionNotCertified} when it does not cover the graph.

/// h_2 >= ((e-1)/(2e)) sqrt(lambda_2 / D^nor); needs CD(0, infinity).
Entry buser_check(const WeightedGraph& g, const SpectralDecomposition& dec, const H2Estimate& h2,
                  const GraphCertificate& cert, double tol = 1e-9);
/// lambda_2 <= 8 max{ sqrt(D^nor K) h_2, (e/(e-1))^2 D^nor h_2^2 } with
/// K = max(0, -cert.K()).
Entry buser_negative_check(const WeightedGraph& g, const SpectralDecomposition& dec,
                           const H2Estimate& h2, const GraphCertificate& cert, double tol = 1e-9);
/// h_2 <= 10 sqrt(2 D^non) k lambda_2 / sqrt(lambda_k); holds on every graph.
Entry improved_cheeger_check(const WeightedGraph& g, const SpectralDecomposition& dec,
                             const H2Estimate& h2, std::size_t k, double tol = 1e-9);
/// lambda_k <= (20 sqrt(2) e/(e-1))^2 D^non D^nor k^2 lambda_2; needs CD(0, infinity).
Entry eigenvalue_ratio_check(const WeightedGraph& g, const SpectralDecomposition& dec,
                             std::size_t k, const GraphCertificate& cert, double tol = 1e-9);
/// h_2 >= ((e-1)^2/(40 sqrt(2) e^2)) sqrt(lambda_k) / (D^nor sqrt(D^non) k);
/// needs CD(0, infinity).
Entry higher_buser_check(const WeightedGraph& g, const SpectralDecomposition& dec,
                         const H2Estimate& h2, std::size_t k, const GraphCertificate& cert,
                         double tol = 1e-9);
/// lambda_2 mu(V) <= (1/dist^2)(1/s1 + 1/s2)(|E| - |E_S1| - |E_S2|).
Entry finer_cheeger_check(const WeightedGraph& g, const SpectralDecomposition& dec,
                          const VertexSet& S1, const VertexSet& S2, double tol = 1e-9);
/// s2 <= (1-s1) exp{-ln(1+2 s1) floor(lambda_2 rho / (2 D^non))}, dist(S1,S2) > rho >= 1.
Entry concentration_check(const WeightedGraph& g, const SpectralDecomposition& dec,
                          const VertexSet& S1, const VertexSet& S2, double rho, double tol = 1e-9);
/// The lambda_k form of the concentration inequality; needs CD(0, infinity).
Entry concentration_k_check(const WeightedGraph& g, const SpectralDecomposition& dec,
                            const VertexSet& S1, const VertexSet& S2, double rho, std::size_t k,
                            const GraphCertificate& cert, double tol = 1e-9);
/// diam <= 2 floor(sqrt(2 D^non / lambda_2) log2(mu(V) / min mu)).
Entry diameter_check(const WeightedGraph& g, const SpectralDecomposition& dec, double tol = 1e-9);
/// diam <= 2 floor((40e/(e-1)) D^non sqrt(D^nor) (k / sqrt(lambda_k)) log2(mu(V)/min mu));
/// needs CD(0, infinity).
Entry diameter_k_check(const WeightedGraph& g, const SpectralDecomposition& dec, std::size_t k,
                       const GraphCertificate& cert, double tol = 1e-9);

/// Implied constant h_k / (D^non D^nor k sqrt(ln k) h_2). Always ReportOnly.
Entry iso_ratio_report(const WeightedGraph& g, double h_k, double h_2, std::size_t k);
/// Implied constant h_k / (D^non D^nor ln(genus + 1) k h_2). Always ReportOnly.
Entry iso_ratio_genus_report(const WeightedGraph& g, double h_k, double h_2, std::size_t k,
                             double genus_bound);
/// Implied constant part_k / (d_G k^2 sqrt(ln k) part_2) for the partition
/// constants. Always ReportOnly.
Entry partition_ratio_report(const WeightedGraph& g, double part_k, double part_2,
                             std::size_t k);
/// h_3 / h_2 >= d_G / 2 on the K_N x K_2 family.
Entry mimura_check(const WeightedGraph& g, double h_3, double h_2, double tol = 1e-9);

struct ReportOptions {
  std::uint64_t seed = 42;
  double tol = 1e-9;
  /// Evaluate curvature-gated checks without a certificate, as ReportOnly.
  bool force = false;
  std::optional<double> genus_bound;
  std::size_t set_pairs = 3;
  double budget = kEnumerationBudget;
  std::uint64_t max_connected_sets = 20'000'000;
};

struct CurvatureSection {
  double min_curvature = 0.0;
  bool nonnegative = false;
  std::optional<double> certified_lower;
  /// Vertices where CD(0, infinity) fails.
  std::vector<std::size_t> failing_vertices;
  std::vector<double> per_vertex;
};

struct BoundsReport {
  std::string family;
  std::uint64_t fingerprint = 0;
  std::size_t k_max = 2;
  ReportOptions options;
  CurvatureSection curvature;
  H2Estimate h2;
  /// Sorted by (name, k, instance).
  std::vector<Entry> entries;

  std::size_t count(Status s) const;
  bool has_fail() const { return count(Status::Fail) > 0; }
};

/// Certifies curvature once, then runs every applicable check for k = 2..k_max.
/// Throws Error{KOutOfRange} unless 2 <= k_max <= N.
BoundsReport full_report(const WeightedGraph& g, std::size_t k_max,
                         const ReportOptions& options = {});

}  // namespace curvegraph
