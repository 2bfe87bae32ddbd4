#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace curvegraph {

/// A real-valued function on the vertices, indexed by dense vertex id.
using VertexFunction = Eigen::VectorXd;

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  double w = 1.0;
};

struct Neighbor {
  std::size_t vertex = 0;
  double weight = 0.0;
};

/// How vertex measures are assigned. Unit gives the non-normalized
/// Laplacian, Degree the normalized one.
class MeasureMode {
 public:
  enum class Kind { Unit, Degree, Constant, Explicit };

  static MeasureMode unit() { return MeasureMode(Kind::Unit); }
  static MeasureMode degree() { return MeasureMode(Kind::Degree); }
  static MeasureMode constant(double c);
  static MeasureMode explicit_values(std::vector<double> values);

  Kind kind() const noexcept { return kind_; }
  double constant_value() const noexcept { return constant_; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// True when every vertex receives the same measure regardless of the graph.
  bool is_constant() const noexcept { return kind_ == Kind::Unit || kind_ == Kind::Constant; }

  /// "unit", "degree", "constant:2", "explicit".
  std::string describe() const;

  /// Inverse of describe() for the non-explicit modes.
  static MeasureMode parse(const std::string& text);

 private:
  explicit MeasureMode(Kind kind) : kind_(kind) {}

  Kind kind_ = Kind::Unit;
  double constant_ = 1.0;
  std::vector<double> values_;
};

/// Undirected, connected, positively weighted graph with a positive vertex
/// measure. Immutable once built; construct through build_graph().
class WeightedGraph {
 public:
  std::size_t size() const noexcept { return measure_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  /// Edges with u < v, sorted lexicographically.
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::span<const Neighbor> neighbors(std::size_t x) const;
  std::size_t degree(std::size_t x) const { return neighbors(x).size(); }

  /// d_x = sum of incident edge weights.
  double weighted_degree(std::size_t x) const { return weighted_degree_[x]; }
  double measure(std::size_t x) const { return measure_[x]; }
  const Eigen::VectorXd& measures() const noexcept { return measure_; }
  double total_measure() const noexcept { return measure_.sum(); }
  const MeasureMode& measure_mode() const noexcept { return mode_; }

  /// Weight of edge {u,v}, or nullopt when not adjacent.
  std::optional<double> edge_weight(std::size_t u, std::size_t v) const;

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(std::size_t x) const { return labels_[x]; }
  std::optional<std::size_t> find(const std::string& label) const;

  /// Free-form provenance tag set by the generators ("cycle:12", "mimura:4").
  const std::string& family() const noexcept { return family_; }
  void set_family(std::string family) { family_ = std::move(family); }

  /// Stable hash of structure and measure, used to bind certificates to graphs.
  std::uint64_t fingerprint() const noexcept { return fingerprint_; }

 private:
  friend WeightedGraph build_graph(std::size_t, std::span<const Edge>, const MeasureMode&,
                                   std::vector<std::string>);
  WeightedGraph() = default;

  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adjacency_;
  Eigen::VectorXd weighted_degree_;
  Eigen::VectorXd measure_;
  MeasureMode mode_ = MeasureMode::unit();
  std::vector<std::string> labels_;
  std::string family_;
  std::uint64_t fingerprint_ = 0;
};

/// Validates and assembles a graph. Labels default to "0".."N-1".
/// Throws Error{SelfLoop, NonPositiveWeight, DuplicateEdge, Disconnected, ...}.
WeightedGraph build_graph(std::size_t vertex_count, std::span<const Edge> edges,
                          const MeasureMode& mode, std::vector<std::string> labels = {});

/// max_x d_x / mu(x)
double d_non(const WeightedGraph& g);
/// max over edges xy of mu(x) / w_xy
double d_nor(const WeightedGraph& g);
/// Maximal combinatorial degree.
std::size_t max_degree(const WeightedGraph& g);

/// Delta f(x) = (1/mu(x)) sum_{y~x} w_xy (f(y) - f(x))
double laplacian_apply(const WeightedGraph& g, const VertexFunction& f, std::size_t x);
VertexFunction laplacian_apply(const WeightedGraph& g, const VertexFunction& f);
/// Dense N x N matrix of Delta (rows sum to zero).
Eigen::MatrixXd laplacian_matrix(const WeightedGraph& g);

/// Gamma(f,h)(x) = (1/2mu(x)) sum_{y~x} w_xy (f(y)-f(x)) (h(y)-h(x))
double gamma(const WeightedGraph& g, const VertexFunction& f, const VertexFunction& h,
             std::size_t x);
VertexFunction gamma(const WeightedGraph& g, const VertexFunction& f, const VertexFunction& h);
inline VertexFunction gamma(const WeightedGraph& g, const VertexFunction& f) { return gamma(g, f, f); }

/// sum_x mu(x) Gamma(f,h)(x) + sum_x mu(x) f(x) Delta h(x); vanishes identically.
double summation_by_parts_residual(const WeightedGraph& g, const VertexFunction& f,
                                   const VertexFunction& h);
/// Pointwise Delta(f^2) - 2 Gamma(f) - 2 f Delta f; vanishes identically.
VertexFunction chain_rule_residual(const WeightedGraph& g, const VertexFunction& f);

/// mu-weighted inner product and l^1 norm.
double inner(const WeightedGraph& g, const VertexFunction& f, const VertexFunction& h);
double l1_norm(const WeightedGraph& g, const VertexFunction& f);

/// A set of vertices with its cached measure.
class VertexSet {
 public:
  VertexSet() = default;
  VertexSet(const WeightedGraph& g, std::vector<std::size_t> members);

  const std::vector<std::size_t>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  bool contains(std::size_t x) const;
  double measure() const noexcept { return measure_; }
  VertexFunction indicator(std::size_t vertex_count) const;

  friend bool operator==(const VertexSet& a, const VertexSet& b) { return a.members_ == b.members_; }

 private:
  std::vector<std::size_t> members_;  // sorted, unique
  double measure_ = 0.0;
};

/// Hop-count distances from x (edge weights are ignored).
std::vector<std::size_t> bfs_distances(const WeightedGraph& g, std::size_t x);
std::size_t hop_distance(const WeightedGraph& g, std::size_t x, std::size_t y);
VertexSet ball(const WeightedGraph& g, std::size_t x, std::size_t radius);
std::size_t set_distance(const WeightedGraph& g, const VertexSet& a, const VertexSet& b);
std::size_t diameter(const WeightedGraph& g);

/// Cartesian product; vertex (i, j) gets index i * |V2| + j and label "(li,lj)".
WeightedGraph cartesian_product(const WeightedGraph& g1, const WeightedGraph& g2,
                                const MeasureMode& result_measure = MeasureMode::unit());

}  // namespace curvegraph
