#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "curvegraph/graph.hpp"

namespace curvegraph {

enum class PartitionMode {
  Subpartition,  // h_k: vertices may stay unassigned
  Partition,     // the partition constant: every vertex is assigned
};

struct SubpartitionResult {
  std::size_t k = 2;
  double value = 0.0;
  std::vector<VertexSet> witness;
  PartitionMode mode = PartitionMode::Subpartition;
};

/// Total weight of edges leaving S.
double boundary_weight(const WeightedGraph& g, const VertexSet& S);
/// |E(S, V \ S)|_w / mu(S). Throws Error{EmptySet}.
double expansion(const WeightedGraph& g, const VertexSet& S);

inline constexpr double kEnumerationBudget = 1e9;

/// Estimated work of the canonical enumeration: N (k+1)^N / k! for
/// subpartitions, N k^N / k! for partitions.
double enumeration_cost(std::size_t n, std::size_t k, PartitionMode mode);

/// Exact min over k disjoint nonempty sets of the largest expansion, by
/// exhaustive enumeration of canonical assignment strings (vertex i gets a
/// digit in 0..k, 0 = unassigned; parts open in increasing vertex order).
/// Ties go to the lexicographically smallest assignment string.
/// Throws Error{KOutOfRange} unless 2 <= k <= N, Error{BudgetExceeded} when
/// enumeration_cost exceeds `budget`.
SubpartitionResult multiway_constant(const WeightedGraph& g, std::size_t k, PartitionMode mode,
                                     double budget = kEnumerationBudget);

/// h_2 computed as min { phi(S) : S connected, mu(S) <= mu(V)/2 } by
/// enumerating connected vertex sets. Returns nullopt once more than
/// `max_sets` sets would be visited.
std::optional<SubpartitionResult> cheeger_constant(const WeightedGraph& g,
                                                   std::uint64_t max_sets = 20'000'000);

/// Lower bound on h_2 from a multicommodity flow. Every ordered pair (u, v)
/// sends mu(u) mu(v) split evenly over shortest hop paths; if rho is the
/// largest load per unit edge weight, any S with mu(S) <= mu(V)/2 has
/// cut(S) >= 2 mu(S) mu(V \ S) / rho, hence h_2 >= 2 min mu(V \ S) / rho.
double flow_cheeger_lower_bound(const WeightedGraph& g);

struct SandwichResult {
  double h_k = 0.0;
  double partition_k = 0.0;
  std::optional<double> h_next;  // h_{k+1} when k < N and within budget
  bool lower_holds = false;      // h_k <= partition constant
  bool upper_holds = false;      // partition constant <= k h_k
  bool monotone = true;          // h_k <= h_{k+1}
  bool holds() const { return lower_holds && upper_holds && monotone; }
};

/// Checks h_k <= partition_k <= k h_k and h_k <= h_{k+1}, all exactly enumerated.
SandwichResult sandwich_check(const WeightedGraph& g, std::size_t k,
                              double budget = kEnumerationBudget);

}  // namespace curvegraph
