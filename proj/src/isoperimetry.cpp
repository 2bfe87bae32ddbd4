#include "curvegraph/isoperimetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <unordered_map>

#include "curvegraph/error.hpp"

namespace curvegraph {

namespace {

bool strictly_better(double value, double best) {
  if (std::isinf(best)) return value < best;
  return value < best - 1e-12 * std::max(1.0, std::abs(best));
}

class MultiwaySearch {
 public:
  MultiwaySearch(const WeightedGraph& g, std::size_t k, PartitionMode mode)
      : g_(g), n_(g.size()), k_(k), allow_unassigned_(mode == PartitionMode::Subpartition),
        assign_(n_, 0), best_assign_(n_, 0), part_mu_(k + 1, 0.0), part_cut_(k + 1, 0.0) {}

  void run() { place(0, 0); }

  double best_value() const { return best_; }
  const std::vector<std::size_t>& best_assignment() const { return best_assign_; }

 private:
  void place(std::size_t v, std::size_t opened) {
    if (v == n_) {
      if (opened != k_) return;
      double worst = 0.0;
      for (std::size_t p = 1; p <= k_; ++p) worst = std::max(worst, part_cut_[p] / part_mu_[p]);
      if (strictly_better(worst, best_)) {
        best_ = worst;
        best_assign_ = assign_;
      }
      return;
    }
    const std::size_t remaining = n_ - v - 1;
    // Digit 0 first keeps the search in lexicographic order.
    if (allow_unassigned_ && remaining >= k_ - opened) {
      assign_[v] = 0;
      place(v + 1, opened);
    }
    const std::size_t top = std::min(opened + 1, k_);
    for (std::size_t p = 1; p <= top; ++p) {
      const std::size_t next_opened = std::max(opened, p);
      if (remaining < k_ - next_opened) continue;
      double inside = 0.0;
      for (const Neighbor& nb : g_.neighbors(v)) {
        if (nb.vertex < v && assign_[nb.vertex] == p) inside += nb.weight;
      }
      const double cut_delta = g_.weighted_degree(v) - 2.0 * inside;
      assign_[v] = p;
      part_mu_[p] += g_.measure(v);
      part_cut_[p] += cut_delta;
      place(v + 1, next_opened);
      part_mu_[p] -= g_.measure(v);
      part_cut_[p] -= cut_delta;
    }
    assign_[v] = 0;
  }

  const WeightedGraph& g_;
  std::size_t n_;
  std::size_t k_;
  bool allow_unassigned_;
  std::vector<std::size_t> assign_;
  std::vector<std::size_t> best_assign_;
  std::vector<double> part_mu_;
  std::vector<double> part_cut_;
  double best_ = std::numeric_limits<double>::infinity();
};

class ConnectedSetSearch {
 public:
  ConnectedSetSearch(const WeightedGraph& g, std::uint64_t max_sets)
      : g_(g), max_sets_(max_sets), half_(0.5 * g.total_measure()), in_set_(g.size(), 0),
        adjacent_count_(g.size(), 0) {}

  bool run() {
    for (std::size_t v = 0; v < g_.size(); ++v) {
      if (g_.measure(v) > half_) continue;
      root_ = v;
      add(v);
      std::vector<std::size_t> ext;
      for (const Neighbor& nb : g_.neighbors(v)) {
        if (nb.vertex > v) ext.push_back(nb.vertex);
      }
      const bool ok = extend(ext, g_.weighted_degree(v), g_.measure(v));
      remove(v);
      if (!ok) return false;
    }
    return true;
  }

  double best_value() const { return best_; }
  const std::vector<std::size_t>& best_set() const { return best_set_; }

 private:
  void add(std::size_t v) {
    in_set_[v] = 1;
    members_.push_back(v);
    for (const Neighbor& nb : g_.neighbors(v)) ++adjacent_count_[nb.vertex];
  }
  void remove(std::size_t v) {
    in_set_[v] = 0;
    members_.pop_back();
    for (const Neighbor& nb : g_.neighbors(v)) --adjacent_count_[nb.vertex];
  }

  bool extend(std::vector<std::size_t> ext, double cut, double mu) {
    if (++visited_ > max_sets_) return false;
    const double phi = cut / mu;
    if (strictly_better(phi, best_)) {
      best_ = phi;
      best_set_ = members_;
    }
    while (!ext.empty()) {
      const std::size_t w = ext.back();
      ext.pop_back();
      const double mu_next = mu + g_.measure(w);
      if (mu_next > half_ * (1.0 + 1e-12)) continue;
      double inside = 0.0;
      for (const Neighbor& nb : g_.neighbors(w)) {
        if (in_set_[nb.vertex]) inside += nb.weight;
      }
      // Exclusive neighbors of w: not in S and not adjacent to S.
      std::vector<std::size_t> next = ext;
      for (const Neighbor& nb : g_.neighbors(w)) {
        const std::size_t u = nb.vertex;
        if (u > root_ && !in_set_[u] && adjacent_count_[u] == 0 &&
            std::find(next.begin(), next.end(), u) == next.end()) {
          next.push_back(u);
        }
      }
      add(w);
      const bool ok = extend(std::move(next), cut + g_.weighted_degree(w) - 2.0 * inside, mu_next);
      remove(w);
      if (!ok) return false;
    }
    return true;
  }

  const WeightedGraph& g_;
  std::uint64_t max_sets_;
  std::uint64_t visited_ = 0;
  double half_;
  std::size_t root_ = 0;
  std::vector<char> in_set_;
  std::vector<std::size_t> adjacent_count_;
  std::vector<std::size_t> members_;
  std::vector<std::size_t> best_set_;
  double best_ = std::numeric_limits<double>::infinity();
};

}  // namespace

double boundary_weight(const WeightedGraph& g, const VertexSet& S) {
  double cut = 0.0;
  for (const Edge& e : g.edges()) {
    if (S.contains(e.u) != S.contains(e.v)) cut += e.w;
  }
  return cut;
}

double expansion(const WeightedGraph& g, const VertexSet& S) {
  if (S.empty()) throw Error(ErrorCode::EmptySet, "expansion of the empty set");
  return boundary_weight(g, S) / S.measure();
}

double enumeration_cost(std::size_t n, std::size_t k, PartitionMode mode) {
  const double base = mode == PartitionMode::Subpartition ? static_cast<double>(k + 1)
                                                          : static_cast<double>(k);
  return static_cast<double>(n) * std::pow(base, static_cast<double>(n)) /
         std::tgamma(static_cast<double>(k) + 1.0);
}

SubpartitionResult multiway_constant(const WeightedGraph& g, std::size_t k, PartitionMode mode,
                                     double budget) {
  if (k < 2 || k > g.size()) {
    throw Error(ErrorCode::KOutOfRange, "k = " + std::to_string(k) + " outside [2, " +
                                            std::to_string(g.size()) + "]");
  }
  const double cost = enumeration_cost(g.size(), k, mode);
  if (cost > budget) {
    throw Error(ErrorCode::BudgetExceeded, "enumeration cost " + std::to_string(cost) +
                                               " exceeds budget " + std::to_string(budget));
  }
  MultiwaySearch search(g, k, mode);
  search.run();

  SubpartitionResult r;
  r.k = k;
  r.mode = mode;
  std::vector<std::vector<std::size_t>> parts(k);
  const auto& assign = search.best_assignment();
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (assign[v] > 0) parts[assign[v] - 1].push_back(v);
  }
  r.value = 0.0;
  for (auto& p : parts) {
    r.witness.emplace_back(g, std::move(p));
    r.value = std::max(r.value, expansion(g, r.witness.back()));
  }
  return r;
}

std::optional<SubpartitionResult> cheeger_constant(const WeightedGraph& g, std::uint64_t max_sets) {
  if (g.size() < 2) throw Error(ErrorCode::KOutOfRange, "Cheeger constant needs two vertices");
  ConnectedSetSearch search(g, max_sets);
  if (!search.run()) return std::nullopt;
  SubpartitionResult r;
  r.k = 2;
  r.mode = PartitionMode::Subpartition;
  VertexSet S(g, search.best_set());
  std::vector<std::size_t> rest;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (!S.contains(v)) rest.push_back(v);
  }
  VertexSet T(g, std::move(rest));
  r.value = std::max(expansion(g, S), expansion(g, T));
  r.witness = {std::move(S), std::move(T)};
  return r;
}

SandwichResult sandwich_check(const WeightedGraph& g, std::size_t k, double budget) {
  SandwichResult s;
  s.h_k = multiway_constant(g, k, PartitionMode::Subpartition, budget).value;
  s.partition_k = multiway_constant(g, k, PartitionMode::Partition, budget).value;
  const double tol = 1e-12 * std::max(1.0, s.partition_k);
  s.lower_holds = s.h_k <= s.partition_k + tol;
  s.upper_holds = s.partition_k <= static_cast<double>(k) * s.h_k + tol;
  if (k + 1 <= g.size() &&
      enumeration_cost(g.size(), k + 1, PartitionMode::Subpartition) <= budget) {
    s.h_next = multiway_constant(g, k + 1, PartitionMode::Subpartition, budget).value;
    s.monotone = s.h_k <= *s.h_next + tol;
  }
  return s;
}

double flow_cheeger_lower_bound(const WeightedGraph& g) {
  const std::size_t n = g.size();
  if (n < 2) return 0.0;
  // Brandes-style accumulation of the pair demands along shortest paths.
  std::unordered_map<std::size_t, std::size_t> edge_of;
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    const Edge& ed = g.edges()[e];
    edge_of[std::min(ed.u, ed.v) * n + std::max(ed.u, ed.v)] = e;
  }
  std::vector<double> load(g.edges().size(), 0.0);
  std::vector<std::size_t> order;
  std::vector<long> dist(n);
  std::vector<double> sigma(n), delta(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    order.clear();
    std::queue<std::size_t> q;
    dist[s] = 0;
    sigma[s] = 1.0;
    q.push(s);
    while (!q.empty()) {
      const std::size_t v = q.front();
      q.pop();
      order.push_back(v);
      for (const Neighbor& nb : g.neighbors(v)) {
        if (dist[nb.vertex] < 0) {
          dist[nb.vertex] = dist[v] + 1;
          q.push(nb.vertex);
        }
        if (dist[nb.vertex] == dist[v] + 1) sigma[nb.vertex] += sigma[v];
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const std::size_t w = *it;
      const double through = (w == s ? 0.0 : g.measure(s) * g.measure(w)) + delta[w];
      for (const Neighbor& nb : g.neighbors(w)) {
        if (dist[nb.vertex] != dist[w] - 1) continue;
        const double share = sigma[nb.vertex] / sigma[w] * through;
        load[edge_of.at(std::min(w, nb.vertex) * n + std::max(w, nb.vertex))] += share;
        delta[nb.vertex] += share;
      }
    }
  }
  double rho = 0.0;
  for (std::size_t e = 0; e < load.size(); ++e) rho = std::max(rho, load[e] / g.edges()[e].w);
  // Smallest complement measure among admissible S. With equal measures the
  // half-volume cap forces |S| <= floor(N/2).
  const Eigen::VectorXd& mu = g.measures();
  double complement = 0.5 * g.total_measure();
  if (mu.maxCoeff() == mu.minCoeff()) {
    complement = static_cast<double>(n - n / 2) * mu[0];
  }
  return 2.0 * complement / rho;
}

}  // namespace curvegraph
