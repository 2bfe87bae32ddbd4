#include "curvegraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <limits>
#include <sstream>

#include "curvegraph/error.hpp"

namespace curvegraph {

namespace {

constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  // FNV-1a over 64-bit words
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xffu;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t bits(double d) {
  std::uint64_t u = 0;
  std::memcpy(&u, &d, sizeof u);
  return u;
}

}  // namespace

MeasureMode MeasureMode::constant(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw Error(ErrorCode::NonPositiveMeasure, "constant measure must be positive");
  }
  MeasureMode m(Kind::Constant);
  m.constant_ = c;
  return m;
}

MeasureMode MeasureMode::explicit_values(std::vector<double> values) {
  MeasureMode m(Kind::Explicit);
  m.values_ = std::move(values);
  return m;
}

std::string MeasureMode::describe() const {
  switch (kind_) {
    case Kind::Unit: return "unit";
    case Kind::Degree: return "degree";
    case Kind::Constant: {
      std::ostringstream os;
      os.precision(17);
      os << "constant:" << constant_;
      return os.str();
    }
    case Kind::Explicit: return "explicit";
  }
  return "unit";
}

MeasureMode MeasureMode::parse(const std::string& text) {
  if (text == "unit") return unit();
  if (text == "degree") return degree();
  if (text.rfind("constant", 0) == 0) {
    auto colon = text.find(':');
    if (colon == std::string::npos) {
      throw Error(ErrorCode::Parse, "constant measure needs a value, e.g. constant:2");
    }
    try {
      std::size_t used = 0;
      const std::string tail = text.substr(colon + 1);
      double c = std::stod(tail, &used);
      if (used != tail.size()) throw std::invalid_argument(tail);
      return constant(c);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::Parse, "bad constant measure '" + text + "'");
    }
  }
  throw Error(ErrorCode::Parse, "unknown measure mode '" + text + "'");
}

WeightedGraph build_graph(std::size_t vertex_count, std::span<const Edge> edges,
                          const MeasureMode& mode, std::vector<std::string> labels) {
  if (vertex_count == 0) throw Error(ErrorCode::InvalidParameter, "graph needs at least one vertex");
  if (!labels.empty() && labels.size() != vertex_count) {
    throw Error(ErrorCode::InvalidParameter, "label count does not match vertex count");
  }
  if (labels.empty()) {
    labels.reserve(vertex_count);
    for (std::size_t i = 0; i < vertex_count; ++i) labels.push_back(std::to_string(i));
  }

  WeightedGraph g;
  g.edges_.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.u >= vertex_count || e.v >= vertex_count) {
      throw Error(ErrorCode::InvalidVertex, "edge endpoint out of range");
    }
    if (e.u == e.v) throw Error(ErrorCode::SelfLoop, "self-loop at vertex " + labels[e.u]);
    if (!(e.w > 0.0) || !std::isfinite(e.w)) {
      throw Error(ErrorCode::NonPositiveWeight,
                  "edge {" + labels[e.u] + "," + labels[e.v] + "} has non-positive weight");
    }
    g.edges_.push_back({std::min(e.u, e.v), std::max(e.u, e.v), e.w});
  }
  std::sort(g.edges_.begin(), g.edges_.end(),
            [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
  for (std::size_t i = 1; i < g.edges_.size(); ++i) {
    if (g.edges_[i].u == g.edges_[i - 1].u && g.edges_[i].v == g.edges_[i - 1].v) {
      throw Error(ErrorCode::DuplicateEdge, "edge {" + labels[g.edges_[i].u] + "," +
                                                labels[g.edges_[i].v] + "} given twice");
    }
  }

  std::vector<std::size_t> deg(vertex_count, 0);
  for (const Edge& e : g.edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  g.offsets_.assign(vertex_count + 1, 0);
  for (std::size_t x = 0; x < vertex_count; ++x) g.offsets_[x + 1] = g.offsets_[x] + deg[x];
  g.adjacency_.resize(g.offsets_.back());
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  g.weighted_degree_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(vertex_count));
  for (const Edge& e : g.edges_) {
    g.adjacency_[fill[e.u]++] = {e.v, e.w};
    g.adjacency_[fill[e.v]++] = {e.u, e.w};
    g.weighted_degree_[static_cast<Eigen::Index>(e.u)] += e.w;
    g.weighted_degree_[static_cast<Eigen::Index>(e.v)] += e.w;
  }
  for (std::size_t x = 0; x < vertex_count; ++x) {
    std::sort(g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[x]),
              g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[x + 1]),
              [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
  }

  // Connectivity.
  {
    std::vector<char> seen(vertex_count, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
      std::size_t x = stack.back();
      stack.pop_back();
      for (const Neighbor& n : g.neighbors(x)) {
        if (!seen[n.vertex]) {
          seen[n.vertex] = 1;
          ++reached;
          stack.push_back(n.vertex);
        }
      }
    }
    if (reached != vertex_count) {
      throw Error(ErrorCode::Disconnected, "graph has " + std::to_string(vertex_count - reached) +
                                               " vertices unreachable from " + labels[0]);
    }
  }

  const auto n = static_cast<Eigen::Index>(vertex_count);
  switch (mode.kind()) {
    case MeasureMode::Kind::Unit: g.measure_ = Eigen::VectorXd::Ones(n); break;
    case MeasureMode::Kind::Degree: g.measure_ = g.weighted_degree_; break;
    case MeasureMode::Kind::Constant: g.measure_ = Eigen::VectorXd::Constant(n, mode.constant_value()); break;
    case MeasureMode::Kind::Explicit: {
      if (mode.values().size() != vertex_count) {
        throw Error(ErrorCode::InvalidParameter, "explicit measure has " +
                                                     std::to_string(mode.values().size()) +
                                                     " values for " + std::to_string(vertex_count) +
                                                     " vertices");
      }
      g.measure_ = Eigen::Map<const Eigen::VectorXd>(mode.values().data(), n);
      break;
    }
  }
  for (Eigen::Index x = 0; x < n; ++x) {
    if (!(g.measure_[x] > 0.0) || !std::isfinite(g.measure_[x])) {
      throw Error(ErrorCode::NonPositiveMeasure,
                  "vertex " + labels[static_cast<std::size_t>(x)] + " has non-positive measure");
    }
  }
  g.mode_ = mode;
  g.labels_ = std::move(labels);

  std::uint64_t h = 0xcbf29ce484222325ull;
  h = mix(h, vertex_count);
  for (const Edge& e : g.edges_) {
    h = mix(h, e.u);
    h = mix(h, e.v);
    h = mix(h, bits(e.w));
  }
  for (Eigen::Index x = 0; x < n; ++x) h = mix(h, bits(g.measure_[x]));
  g.fingerprint_ = h;
  return g;
}

std::span<const Neighbor> WeightedGraph::neighbors(std::size_t x) const {
  return {adjacency_.data() + offsets_[x], offsets_[x + 1] - offsets_[x]};
}

std::optional<double> WeightedGraph::edge_weight(std::size_t u, std::size_t v) const {
  auto nb = neighbors(u);
  auto it = std::lower_bound(nb.begin(), nb.end(), v,
                             [](const Neighbor& n, std::size_t t) { return n.vertex < t; });
  if (it != nb.end() && it->vertex == v) return it->weight;
  return std::nullopt;
}

std::optional<std::size_t> WeightedGraph::find(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

double d_non(const WeightedGraph& g) {
  double best = 0.0;
  for (std::size_t x = 0; x < g.size(); ++x) best = std::max(best, g.weighted_degree(x) / g.measure(x));
  return best;
}

double d_nor(const WeightedGraph& g) {
  double best = 0.0;
  for (std::size_t x = 0; x < g.size(); ++x) {
    for (const Neighbor& n : g.neighbors(x)) best = std::max(best, g.measure(x) / n.weight);
  }
  return best;
}

std::size_t max_degree(const WeightedGraph& g) {
  std::size_t best = 0;
  for (std::size_t x = 0; x < g.size(); ++x) best = std::max(best, g.degree(x));
  return best;
}

double laplacian_apply(const WeightedGraph& g, const VertexFunction& f, std::size_t x) {
  const double fx = f[static_cast<Eigen::Index>(x)];
  double acc = 0.0;
  for (const Neighbor& n : g.neighbors(x)) acc += n.weight * (f[static_cast<Eigen::Index>(n.vertex)] - fx);
  return acc / g.measure(x);
}

VertexFunction laplacian_apply(const WeightedGraph& g, const VertexFunction& f) {
  VertexFunction out(static_cast<Eigen::Index>(g.size()));
  for (std::size_t x = 0; x < g.size(); ++x) out[static_cast<Eigen::Index>(x)] = laplacian_apply(g, f, x);
  return out;
}

Eigen::MatrixXd laplacian_matrix(const WeightedGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t x = 0; x < g.size(); ++x) {
    const auto i = static_cast<Eigen::Index>(x);
    for (const Neighbor& nb : g.neighbors(x)) {
      L(i, static_cast<Eigen::Index>(nb.vertex)) += nb.weight / g.measure(x);
      L(i, i) -= nb.weight / g.measure(x);
    }
  }
  return L;
}

double gamma(const WeightedGraph& g, const VertexFunction& f, const VertexFunction& h,
             std::size_t x) {
  const auto i = static_cast<Eigen::Index>(x);
  double acc = 0.0;
  for (const Neighbor& n : g.neighbors(x)) {
    const auto j = static_cast<Eigen::Index>(n.vertex);
    acc += n.weight * (f[j] - f[i]) * (h[j] - h[i]);
  }
  return acc / (2.0 * g.measure(x));
}

VertexFunction gamma(const WeightedGraph& g, const VertexFunction& f, const VertexFunction& h) {
  VertexFunction out(static_cast<Eigen::Index>(g.size()));
  for (std::size_t x = 0; x < g.size(); ++x) out[static_cast<Eigen::Index>(x)] = gamma(g, f, h, x);
  return out;
}

double summation_by_parts_residual(const WeightedGraph& g, const VertexFunction& f,
                                   const VertexFunction& h) {
  const VertexFunction gfh = gamma(g, f, h);
  const VertexFunction lh = laplacian_apply(g, h);
  return g.measures().dot(gfh) + g.measures().dot(f.cwiseProduct(lh));
}

VertexFunction chain_rule_residual(const WeightedGraph& g, const VertexFunction& f) {
  const VertexFunction f2 = f.cwiseProduct(f);
  return laplacian_apply(g, f2) - 2.0 * gamma(g, f) - 2.0 * f.cwiseProduct(laplacian_apply(g, f));
}

double inner(const WeightedGraph& g, const VertexFunction& f, const VertexFunction& h) {
  return (g.measures().array() * f.array() * h.array()).sum();
}

double l1_norm(const WeightedGraph& g, const VertexFunction& f) {
  return (g.measures().array() * f.array().abs()).sum();
}

VertexSet::VertexSet(const WeightedGraph& g, std::vector<std::size_t> members)
    : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  for (std::size_t x : members_) {
    if (x >= g.size()) throw Error(ErrorCode::InvalidVertex, "vertex index out of range");
    measure_ += g.measure(x);
  }
}

bool VertexSet::contains(std::size_t x) const {
  return std::binary_search(members_.begin(), members_.end(), x);
}

VertexFunction VertexSet::indicator(std::size_t vertex_count) const {
  VertexFunction chi = VertexFunction::Zero(static_cast<Eigen::Index>(vertex_count));
  for (std::size_t x : members_) chi[static_cast<Eigen::Index>(x)] = 1.0;
  return chi;
}

namespace {

std::vector<std::size_t> multi_source_bfs(const WeightedGraph& g, const std::vector<std::size_t>& sources) {
  std::vector<std::size_t> dist(g.size(), kUnreached);
  std::deque<std::size_t> queue;
  for (std::size_t s : sources) {
    if (dist[s] == kUnreached) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    std::size_t x = queue.front();
    queue.pop_front();
    for (const Neighbor& n : g.neighbors(x)) {
      if (dist[n.vertex] == kUnreached) {
        dist[n.vertex] = dist[x] + 1;
        queue.push_back(n.vertex);
      }
    }
  }
  return dist;
}

void check_vertex(const WeightedGraph& g, std::size_t x) {
  if (x >= g.size()) throw Error(ErrorCode::InvalidVertex, "vertex " + std::to_string(x) + " out of range");
}

}  // namespace

std::vector<std::size_t> bfs_distances(const WeightedGraph& g, std::size_t x) {
  check_vertex(g, x);
  return multi_source_bfs(g, {x});
}

std::size_t hop_distance(const WeightedGraph& g, std::size_t x, std::size_t y) {
  check_vertex(g, y);
  return bfs_distances(g, x)[y];
}

VertexSet ball(const WeightedGraph& g, std::size_t x, std::size_t radius) {
  const auto dist = bfs_distances(g, x);
  std::vector<std::size_t> members;
  for (std::size_t y = 0; y < g.size(); ++y) {
    if (dist[y] <= radius) members.push_back(y);
  }
  return VertexSet(g, std::move(members));
}

std::size_t set_distance(const WeightedGraph& g, const VertexSet& a, const VertexSet& b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::EmptySet, "distance to an empty set");
  const auto dist = multi_source_bfs(g, a.members());
  std::size_t best = kUnreached;
  for (std::size_t y : b.members()) best = std::min(best, dist[y]);
  return best;
}

std::size_t diameter(const WeightedGraph& g) {
  std::size_t best = 0;
  for (std::size_t x = 0; x < g.size(); ++x) {
    for (std::size_t d : bfs_distances(g, x)) best = std::max(best, d);
  }
  return best;
}

WeightedGraph cartesian_product(const WeightedGraph& g1, const WeightedGraph& g2,
                                const MeasureMode& result_measure) {
  const std::size_t n1 = g1.size();
  const std::size_t n2 = g2.size();
  std::vector<Edge> edges;
  edges.reserve(n1 * g2.edge_count() + n2 * g1.edge_count());
  // (x, y1) ~ (x, y2) carries the second factor's weight.
  for (std::size_t i = 0; i < n1; ++i) {
    for (const Edge& e : g2.edges()) edges.push_back({i * n2 + e.u, i * n2 + e.v, e.w});
  }
  // (x1, y) ~ (x2, y) carries the first factor's weight.
  for (const Edge& e : g1.edges()) {
    for (std::size_t j = 0; j < n2; ++j) edges.push_back({e.u * n2 + j, e.v * n2 + j, e.w});
  }
  std::vector<std::string> labels;
  labels.reserve(n1 * n2);
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) labels.push_back("(" + g1.label(i) + "," + g2.label(j) + ")");
  }
  return build_graph(n1 * n2, edges, result_measure, std::move(labels));
}

}  // namespace curvegraph
