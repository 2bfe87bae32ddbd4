#include "curvegraph/generators.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

#include "curvegraph/error.hpp"

namespace curvegraph {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::vector<Edge> clique_edges(std::size_t n, std::size_t offset = 0) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) edges.push_back({offset + i, offset + j, 1.0});
  }
  return edges;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidParameter, what);
}

WeightedGraph tagged(WeightedGraph g, std::string tag) {
  g.set_family(std::move(tag));
  return g;
}

WeightedGraph make_cayley(const family::AbelianCayley& c, const MeasureMode& measure) {
  require(!c.orders.empty(), "cayley graph needs at least one cyclic factor");
  for (std::size_t m : c.orders) require(m >= 1, "cyclic orders must be positive");
  require(!c.generators.empty(), "cayley graph needs generators");
  const std::size_t rank = c.orders.size();
  std::size_t n = 1;
  for (std::size_t m : c.orders) n *= m;
  require(n >= 2, "cayley graph needs at least two elements");

  auto reduce = [&](const std::vector<long>& s) {
    std::vector<std::size_t> r(rank);
    for (std::size_t i = 0; i < rank; ++i) {
      const long m = static_cast<long>(c.orders[i]);
      r[i] = static_cast<std::size_t>(((s[i] % m) + m) % m);
    }
    return r;
  };
  std::set<std::vector<std::size_t>> gens;
  for (const auto& s : c.generators) {
    require(s.size() == rank, "generator arity does not match the number of cyclic factors");
    auto r = reduce(s);
    require(std::any_of(r.begin(), r.end(), [](std::size_t v) { return v != 0; }),
            "the identity cannot be a generator");
    gens.insert(r);
  }
  for (const auto& s : gens) {
    std::vector<std::size_t> neg(rank);
    for (std::size_t i = 0; i < rank; ++i) neg[i] = (c.orders[i] - s[i]) % c.orders[i];
    require(gens.count(neg) == 1, "generating set is not closed under inversion");
  }

  auto encode = [&](const std::vector<std::size_t>& t) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < rank; ++i) idx = idx * c.orders[i] + t[i];
    return idx;
  };
  std::vector<std::vector<std::size_t>> elems(n, std::vector<std::size_t>(rank));
  for (std::size_t idx = 0; idx < n; ++idx) {
    std::size_t rest = idx;
    for (std::size_t i = rank; i-- > 0;) {
      elems[idx][i] = rest % c.orders[i];
      rest /= c.orders[i];
    }
  }
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u) {
    for (const auto& s : gens) {
      std::vector<std::size_t> t(rank);
      for (std::size_t i = 0; i < rank; ++i) t[i] = (elems[u][i] + s[i]) % c.orders[i];
      const std::size_t v = encode(t);
      auto key = std::minmax(u, v);
      if (seen.insert(key).second) edges.push_back({key.first, key.second, 1.0});
    }
  }
  std::vector<std::string> labels;
  for (const auto& e : elems) {
    std::string s = "(";
    for (std::size_t i = 0; i < rank; ++i) s += (i ? "," : "") + std::to_string(e[i]);
    labels.push_back(s + ")");
  }
  try {
    std::string tag = "cayley:";
    for (std::size_t i = 0; i < rank; ++i) tag += (i ? "x" : "") + std::to_string(c.orders[i]);
    return tagged(build_graph(n, edges, measure, std::move(labels)), tag);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Disconnected) {
      throw Error(ErrorCode::InvalidParameter, "generators do not generate the group");
    }
    throw;
  }
}

}  // namespace

WeightedGraph generate(const FamilySpec& spec) {
  const MeasureMode& measure = spec.measure;
  const bool family_measure =
      measure.kind() == MeasureMode::Kind::Explicit && measure.values().empty();

  return std::visit(
      overloaded{
          [&](const family::Cycle& c) {
            require(c.n >= 3, "cycle needs n >= 3");
            std::vector<Edge> edges;
            for (std::size_t i = 0; i < c.n; ++i) edges.push_back({i, (i + 1) % c.n, 1.0});
            return tagged(build_graph(c.n, edges, measure), "cycle:" + std::to_string(c.n));
          },
          [&](const family::Complete& c) {
            require(c.n >= 2, "complete graph needs n >= 2");
            return tagged(build_graph(c.n, clique_edges(c.n), measure), "complete:" + std::to_string(c.n));
          },
          [&](const family::Hypercube& h) {
            require(h.d >= 1 && h.d <= 11, "hypercube dimension must be in [1, 11]");
            const std::size_t n = std::size_t{1} << h.d;
            std::vector<Edge> edges;
            std::vector<std::string> labels;
            for (std::size_t u = 0; u < n; ++u) {
              std::string s;
              for (std::size_t b = h.d; b-- > 0;) s += ((u >> b) & 1u) ? '1' : '0';
              labels.push_back(s);
              for (std::size_t b = 0; b < h.d; ++b) {
                const std::size_t v = u ^ (std::size_t{1} << b);
                if (u < v) edges.push_back({u, v, 1.0});
              }
            }
            return tagged(build_graph(n, edges, measure, std::move(labels)),
                          "hypercube:" + std::to_string(h.d));
          },
          [&](const family::AbelianCayley& c) { return make_cayley(c, measure); },
          [&](const family::Dumbbell& d) {
            require(d.n >= 3, "dumbbell needs n >= 3");
            auto edges = clique_edges(d.n);
            auto right = clique_edges(d.n, d.n);
            edges.insert(edges.end(), right.begin(), right.end());
            edges.push_back({d.n - 1, d.n, 1.0});
            std::vector<std::string> labels;
            for (std::size_t i = 0; i < d.n; ++i) labels.push_back("a" + std::to_string(i));
            for (std::size_t i = 0; i < d.n; ++i) labels.push_back("b" + std::to_string(i));
            return tagged(build_graph(2 * d.n, edges, measure, std::move(labels)),
                          "dumbbell:" + std::to_string(d.n));
          },
          [&](const family::Triangle& t) {
            require(t.a > 0 && t.b > 0 && t.c > 0, "triangle weights must be positive");
            const std::vector<Edge> edges{{0, 1, t.a}, {0, 2, t.b}, {1, 2, t.c}};
            MeasureMode m = family_measure ? MeasureMode::explicit_values({t.C, t.B, t.A}) : measure;
            return tagged(build_graph(3, edges, m, {"x", "y", "z"}), "triangle");
          },
          [&](const family::Tetrahedron& t) {
            require(t.a > 0 && t.b > 0 && t.c > 0, "tetrahedron weights must be positive");
            const std::vector<Edge> edges{{0, 3, t.a}, {1, 2, t.a}, {0, 1, t.b},
                                          {2, 3, t.b}, {0, 2, t.c}, {1, 3, t.c}};
            MeasureMode m = family_measure ? MeasureMode::constant(t.A) : measure;
            return tagged(build_graph(4, edges, m, {"x1", "x2", "x3", "x4"}), "tetrahedron");
          },
          [&](const family::Path& p) {
            require(p.n >= 2, "path needs n >= 2");
            std::vector<Edge> edges;
            for (std::size_t i = 0; i + 1 < p.n; ++i) edges.push_back({i, i + 1, 1.0});
            return tagged(build_graph(p.n, edges, measure), "path:" + std::to_string(p.n));
          },
          [&](const family::MimuraProduct& m) {
            require(m.n >= 2, "mimura product needs n >= 2");
            auto kn = build_graph(m.n, clique_edges(m.n), MeasureMode::unit());
            auto k2 = build_graph(2, clique_edges(2), MeasureMode::unit());
            return tagged(cartesian_product(kn, k2, measure), "mimura:" + std::to_string(m.n));
          },
      },
      spec.family);
}

DumbbellWitness dumbbell_witness_functions(std::size_t n) {
  require(n >= 3, "dumbbell witnesses need n >= 3");
  const auto size = static_cast<Eigen::Index>(2 * n);
  DumbbellWitness w;
  w.f0 = VertexFunction::Zero(size);
  for (std::size_t i = n; i < 2 * n; ++i) w.f0[static_cast<Eigen::Index>(i)] = 2.0;
  w.f0[static_cast<Eigen::Index>(n)] = 1.0;
  if (n == 3) {
    VertexFunction g0(size);
    g0 << -1.0, -1.0, 1.0, 4.0, 7.0, 7.0;
    w.g0 = g0;
  }
  return w;
}

VertexFunction product_tightness_function(const WeightedGraph& g, const VertexFunction& f,
                                          std::size_t x) {
  const auto n = static_cast<Eigen::Index>(g.size());
  if (f.size() != n) throw Error(ErrorCode::InvalidParameter, "function size does not match graph");
  if (x >= g.size()) throw Error(ErrorCode::InvalidVertex, "vertex out of range");
  const double fx = f[static_cast<Eigen::Index>(x)];
  VertexFunction F(n * n);
  for (Eigen::Index u = 0; u < n; ++u) {
    for (Eigen::Index v = 0; v < n; ++v) F[u * n + v] = f[u] + f[v] - fx;
  }
  return F;
}

}  // namespace curvegraph
