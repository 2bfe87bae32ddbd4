#include "curvegraph/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <tuple>

#include "curvegraph/error.hpp"

namespace curvegraph {

namespace {

constexpr double kE = std::numbers::e;
const double kSqrt2 = std::sqrt(2.0);

Entry make_entry(std::string name, std::string tag, std::size_t k, double lhs, double rhs,
                 double tol) {
  Entry e;
  e.name = std::move(name);
  e.tag = std::move(tag);
  e.k = k;
  e.lhs = lhs;
  e.rhs = rhs;
  e.slack = rhs - lhs;
  e.status = judge(lhs, rhs, tol);
  return e;
}

// Combines the evaluations at the pessimistic and optimistic ends of the h_2
// interval. Pass needs the pessimistic end, Fail needs the optimistic one.
Entry bracketed(Entry pessimistic, Entry optimistic, const H2Estimate& h2) {
  if (h2.exact() || pessimistic.status == Status::Pass) return pessimistic;
  if (optimistic.status == Status::Fail) return optimistic;
  pessimistic.status = Status::Skipped;
  pessimistic.reason = "h2 bracket [" + std::to_string(h2.lower) + ", " +
                       std::to_string(h2.upper) + "] is inconclusive";
  return pessimistic;
}

void require(const WeightedGraph& g, const GraphCertificate& cert, double K) {
  if (!cert.implies(g, K, Dimension::infinite())) {
    throw Error(ErrorCode::PreconditionNotCertified,
                "certificate does not imply CD(" + std::to_string(K) + ", inf) for this graph");
  }
}

double log2_volume_ratio(const WeightedGraph& g) {
  return std::log2(g.total_measure() / g.measures().minCoeff());
}

double edge_weight_inside(const WeightedGraph& g, const VertexSet& S) {
  double total = 0.0;
  for (const Edge& e : g.edges()) {
    if (S.contains(e.u) && S.contains(e.v)) total += e.w;
  }
  return total;
}

double total_edge_weight(const WeightedGraph& g) {
  double total = 0.0;
  for (const Edge& e : g.edges()) total += e.w;
  return total;
}

void check_k(const SpectralDecomposition& dec, std::size_t k) {
  if (k < 2 || k > dec.size()) {
    throw Error(ErrorCode::KOutOfRange, "k = " + std::to_string(k) + " is out of range");
  }
}

std::size_t check_pair(const WeightedGraph& g, const VertexSet& S1, const VertexSet& S2) {
  if (S1.empty() || S2.empty()) throw Error(ErrorCode::EmptySet, "sets must be nonempty");
  for (std::size_t v : S1.members()) {
    if (S2.contains(v)) throw Error(ErrorCode::SetsNotDisjoint, "sets share a vertex");
  }
  return set_distance(g, S1, S2);
}

void check_rho(std::size_t dist, double rho) {
  if (!(rho >= 1.0) || !(static_cast<double>(dist) > rho)) {
    throw Error(ErrorCode::DistanceTooSmall, "need dist(S1,S2) > rho >= 1, got dist = " +
                                                 std::to_string(dist) +
                                                 ", rho = " + std::to_string(rho));
  }
}

// Unchecked evaluators. The public checks add precondition tests on top.

Entry eval_buser(const WeightedGraph& g, const SpectralDecomposition& dec, const H2Estimate& h2,
                 double tol) {
  const double lhs = constants::buser() * std::sqrt(dec.lambda(2) / d_nor(g));
  auto at = [&](double h) {
    Entry e = make_entry("buser", "h2 >= (e-1)/(2e) sqrt(lambda2/Dnor)", 0, lhs, h, tol);
    e.inputs = {{"lambda2", dec.lambda(2)}, {"Dnor", d_nor(g)}, {"h2", h},
                {"constant", constants::buser()}};
    return e;
  };
  return bracketed(at(h2.lower), at(h2.upper), h2);
}

Entry eval_buser_negative(const WeightedGraph& g, const SpectralDecomposition& dec,
                          const H2Estimate& h2, double K, double tol) {
  const double dnor = d_nor(g);
  const double c = std::pow(kE / (kE - 1.0), 2.0);
  auto at = [&](double h) {
    const double rhs = 8.0 * std::max(std::sqrt(dnor * K) * h, c * dnor * h * h);
    Entry e = make_entry("buser_negative_curvature",
                         "lambda2 <= 8 max{sqrt(Dnor K) h2, (e/(e-1))^2 Dnor h2^2}", 0,
                         dec.lambda(2), rhs, tol);
    e.inputs = {{"lambda2", dec.lambda(2)}, {"Dnor", dnor}, {"K", K}, {"h2", h}};
    return e;
  };
  return bracketed(at(h2.lower), at(h2.upper), h2);
}

Entry eval_eigenvalue_ratio(const WeightedGraph& g, const SpectralDecomposition& dec,
                            std::size_t k, double tol) {
  const double kk = static_cast<double>(k);
  const double c = std::pow(constants::ratio(), 2.0);
  Entry e = make_entry("eigenvalue_ratio",
                       "lambda_k <= (20 sqrt2 e/(e-1))^2 Dnon Dnor k^2 lambda2", k, dec.lambda(k),
                       c * d_non(g) * d_nor(g) * kk * kk * dec.lambda(2), tol);
  e.inputs = {{"lambda_k", dec.lambda(k)}, {"lambda2", dec.lambda(2)}, {"Dnon", d_non(g)},
              {"Dnor", d_nor(g)}, {"constant", c}};
  return e;
}

Entry eval_higher_buser(const WeightedGraph& g, const SpectralDecomposition& dec,
                        const H2Estimate& h2, std::size_t k, double tol) {
  const double lhs = constants::higher_buser() * std::sqrt(dec.lambda(k)) /
                     (d_nor(g) * std::sqrt(d_non(g)) * static_cast<double>(k));
  auto at = [&](double h) {
    Entry e = make_entry("higher_buser",
                         "h2 >= (e-1)^2/(40 sqrt2 e^2) sqrt(lambda_k)/(Dnor sqrt(Dnon) k)", k,
                         lhs, h, tol);
    e.inputs = {{"lambda_k", dec.lambda(k)}, {"Dnon", d_non(g)}, {"Dnor", d_nor(g)}, {"h2", h},
                {"constant", constants::higher_buser()}};
    return e;
  };
  return bracketed(at(h2.lower), at(h2.upper), h2);
}

Entry eval_concentration_k(const WeightedGraph& g, const SpectralDecomposition& dec,
                           const VertexSet& S1, const VertexSet& S2, double rho, std::size_t k,
                           double tol) {
  const double s1 = S1.measure() / g.total_measure();
  const double s2 = S2.measure() / g.total_measure();
  const double arg = constants::concentration() / (d_non(g) * static_cast<double>(k)) *
                     std::sqrt(dec.lambda(k) / d_nor(g) * rho);
  const double steps = nudged_floor(arg);
  Entry e = make_entry("concentration_k",
                       "s2 <= (1-s1) exp{-ln(1+2s1) floor((e-1)/(20 sqrt2 e Dnon k) "
                       "sqrt(lambda_k rho/Dnor))}",
                       k, s2, (1.0 - s1) * std::exp(-std::log1p(2.0 * s1) * steps), tol);
  e.inputs = {{"s1", s1}, {"s2", s2}, {"rho", rho}, {"lambda_k", dec.lambda(k)},
              {"floor", steps}};
  e.sets = {S1.members(), S2.members()};
  return e;
}

Entry eval_diameter_k(const WeightedGraph& g, const SpectralDecomposition& dec, std::size_t k,
                      double tol) {
  const double kk = static_cast<double>(k);
  const double arg = constants::diameter() * d_non(g) * std::sqrt(d_nor(g)) * kk /
                     std::sqrt(dec.lambda(k)) * log2_volume_ratio(g);
  Entry e = make_entry("diameter_k",
                       "diam <= 2 floor(40e/(e-1) Dnon sqrt(Dnor) k/sqrt(lambda_k) log2(mu(V)/min mu))",
                       k, static_cast<double>(diameter(g)), 2.0 * nudged_floor(arg), tol);
  e.inputs = {{"lambda_k", dec.lambda(k)}, {"Dnon", d_non(g)}, {"Dnor", d_nor(g)},
              {"log2_ratio", log2_volume_ratio(g)}};
  return e;
}

struct SetPair {
  VertexSet S1;
  VertexSet S2;
  std::size_t dist = 0;
};

// Balls around a random vertex and a vertex farthest from it, with radii small
// enough that the balls stay at distance >= 2.
std::vector<SetPair> sample_set_pairs(const WeightedGraph& g, std::size_t count,
                                      std::mt19937_64& rng) {
  std::vector<SetPair> pairs;
  if (diameter(g) < 2) return pairs;
  std::uniform_int_distribution<std::size_t> pick(0, g.size() - 1);
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t x = pick(rng);
    auto dist = bfs_distances(g, x);
    while (*std::max_element(dist.begin(), dist.end()) < 2) {
      x = pick(rng);
      dist = bfs_distances(g, x);
    }
    const auto far = std::max_element(dist.begin(), dist.end());
    const std::size_t y = static_cast<std::size_t>(far - dist.begin());
    const std::size_t room = *far - 2;
    const std::size_t r1 = std::uniform_int_distribution<std::size_t>(0, room)(rng);
    const std::size_t r2 = std::uniform_int_distribution<std::size_t>(0, room - r1)(rng);
    SetPair p{ball(g, x, r1), ball(g, y, r2), 0};
    p.dist = set_distance(g, p.S1, p.S2);
    pairs.push_back(std::move(p));
  }
  return pairs;
}

Entry from_pointwise(std::string name, std::string tag, const PointwiseCheck& c) {
  Entry e;
  e.name = std::move(name);
  e.tag = std::move(tag);
  e.lhs = c.lhs;
  e.rhs = c.rhs;
  e.slack = c.slack;
  e.status = c.holds ? Status::Pass : Status::Fail;
  e.inputs = {{"worst_vertex", static_cast<double>(c.worst_vertex)}};
  return e;
}

Entry from_scalar(std::string name, std::string tag, const ScalarCheck& c) {
  Entry e;
  e.name = std::move(name);
  e.tag = std::move(tag);
  e.lhs = c.lhs;
  e.rhs = c.rhs;
  e.slack = c.slack;
  e.status = c.holds ? Status::Pass : Status::Fail;
  return e;
}

// Keeps the more alarming of two evaluations of the same inequality.
void keep_worst(std::optional<Entry>& acc, Entry e) {
  if (!acc || (e.status == Status::Fail && acc->status != Status::Fail) ||
      (e.status == acc->status && e.slack < acc->slack)) {
    acc = std::move(e);
  }
}

VertexFunction random_function(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  VertexFunction f(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < f.size(); ++i) f[i] = u(rng);
  return f;
}

}  // namespace

std::string to_string(Status s) {
  switch (s) {
    case Status::Pass: return "Pass";
    case Status::Fail: return "Fail";
    case Status::ReportOnly: return "ReportOnly";
    case Status::Skipped: return "Skipped";
  }
  return "?";
}

Status judge(double lhs, double rhs, double tol) {
  const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
  return rhs - lhs >= -tol * scale ? Status::Pass : Status::Fail;
}

bool H2Estimate::exact() const { return upper - lower <= 1e-12 * std::max(1.0, upper); }

H2Estimate H2Estimate::exact_value(double h2) {
  H2Estimate h;
  h.lower = h.upper = h2;
  h.method = "given";
  return h;
}

H2Estimate estimate_h2(const WeightedGraph& g, const SpectralDecomposition& dec, double budget,
                       std::uint64_t max_connected_sets) {
  H2Estimate h;
  if (enumeration_cost(g.size(), 2, PartitionMode::Subpartition) <= budget) {
    auto r = multiway_constant(g, 2, PartitionMode::Subpartition, budget);
    h.lower = h.upper = r.value;
    h.method = "enumeration";
    h.witness = std::move(r.witness);
    return h;
  }
  if (auto r = cheeger_constant(g, max_connected_sets)) {
    h.lower = h.upper = r->value;
    h.method = "connected-sets";
    h.witness = std::move(r->witness);
    return h;
  }
  // Sweep over level sets of the Fiedler vector.
  const Eigen::VectorXd psi = dec.eigenfunctions.col(1);
  std::vector<std::size_t> order(g.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return psi[a] < psi[b]; });
  h.upper = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> prefix;
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    prefix.push_back(order[i]);
    VertexSet S(g, prefix);
    VertexSet T(g, std::vector<std::size_t>(order.begin() + static_cast<long>(i) + 1, order.end()));
    const double value = std::max(expansion(g, S), expansion(g, T));
    if (value < h.upper) {
      h.upper = value;
      h.witness = {S, T};
    }
  }
  h.lower = std::max(dec.lambda(2) / 2.0, flow_cheeger_lower_bound(g));
  h.lower = std::min(h.lower, h.upper);
  h.method = "bracket";
  return h;
}

namespace constants {
double buser() { return (kE - 1.0) / (2.0 * kE); }
double ratio() { return 20.0 * kSqrt2 * kE / (kE - 1.0); }
double higher_buser() { return (kE - 1.0) * (kE - 1.0) / (40.0 * kSqrt2 * kE * kE); }
double concentration() { return (kE - 1.0) / (20.0 * kSqrt2 * kE); }
double diameter() { return 40.0 * kE / (kE - 1.0); }
}  // namespace constants

double nudged_floor(double x) { return std::floor(x + 1e-12 * std::max(1.0, std::abs(x))); }

Entry buser_check(const WeightedGraph& g, const SpectralDecomposition& dec, const H2Estimate& h2,
                  const GraphCertificate& cert, double tol) {
  require(g, cert, 0.0);
  return eval_buser(g, dec, h2, tol);
}

Entry buser_negative_check(const WeightedGraph& g, const SpectralDecomposition& dec,
                           const H2Estimate& h2, const GraphCertificate& cert, double tol) {
  const double K = std::max(0.0, -cert.K());
  require(g, cert, -K);
  return eval_buser_negative(g, dec, h2, K, tol);
}

Entry improved_cheeger_check(const WeightedGraph& g, const SpectralDecomposition& dec,
                             const H2Estimate& h2, std::size_t k, double tol) {
  check_k(dec, k);
  const double rhs = 10.0 * std::sqrt(2.0 * d_non(g)) * static_cast<double>(k) * dec.lambda(2) /
                     std::sqrt(dec.lambda(k));
  auto at = [&](double h) {
    Entry e = make_entry("improved_cheeger", "h2 <= 10 sqrt(2 Dnon) k lambda2/sqrt(lambda_k)", k,
                         h, rhs, tol);
    e.inputs = {{"h2", h}, {"lambda2", dec.lambda(2)}, {"lambda_k", dec.lambda(k)},
                {"Dnon", d_non(g)}};
    return e;
  };
  return bracketed(at(h2.upper), at(h2.lower), h2);
}

Entry eigenvalue_ratio_check(const WeightedGraph& g, const SpectralDecomposition& dec,
                             std::size_t k, const GraphCertificate& cert, double tol) {
  check_k(dec, k);
  require(g, cert, 0.0);
  return eval_eigenvalue_ratio(g, dec, k, tol);
}

Entry higher_buser_check(const WeightedGraph& g, const SpectralDecomposition& dec,
                         const H2Estimate& h2, std::size_t k, const GraphCertificate& cert,
                         double tol) {
  check_k(dec, k);
  require(g, cert, 0.0);
  return eval_higher_buser(g, dec, h2, k, tol);
}

Entry finer_cheeger_check(const WeightedGraph& g, const SpectralDecomposition& dec,
                          const VertexSet& S1, const VertexSet& S2, double tol) {
  const std::size_t dist = check_pair(g, S1, S2);
  const double s1 = S1.measure() / g.total_measure();
  const double s2 = S2.measure() / g.total_measure();
  const double outside =
      total_edge_weight(g) - edge_weight_inside(g, S1) - edge_weight_inside(g, S2);
  const double d = static_cast<double>(dist);
  Entry e = make_entry("finer_cheeger",
                       "lambda2 mu(V) <= (1/dist^2)(1/s1 + 1/s2)(|E| - |E_S1| - |E_S2|)", 0,
                       dec.lambda(2) * g.total_measure(), (1.0 / s1 + 1.0 / s2) * outside / (d * d),
                       tol);
  e.inputs = {{"s1", s1}, {"s2", s2}, {"dist", d}, {"lambda2", dec.lambda(2)}};
  e.sets = {S1.members(), S2.members()};
  return e;
}

Entry concentration_check(const WeightedGraph& g, const SpectralDecomposition& dec,
                          const VertexSet& S1, const VertexSet& S2, double rho, double tol) {
  check_rho(check_pair(g, S1, S2), rho);
  const double s1 = S1.measure() / g.total_measure();
  const double s2 = S2.measure() / g.total_measure();
  const double steps = nudged_floor(dec.lambda(2) * rho / (2.0 * d_non(g)));
  Entry e = make_entry("concentration",
                       "s2 <= (1-s1) exp{-ln(1+2s1) floor(lambda2 rho/(2 Dnon))}", 0, s2,
                       (1.0 - s1) * std::exp(-std::log1p(2.0 * s1) * steps), tol);
  e.inputs = {{"s1", s1}, {"s2", s2}, {"rho", rho}, {"lambda2", dec.lambda(2)},
              {"floor", steps}};
  e.sets = {S1.members(), S2.members()};
  return e;
}

Entry concentration_k_check(const WeightedGraph& g, const SpectralDecomposition& dec,
                            const VertexSet& S1, const VertexSet& S2, double rho, std::size_t k,
                            const GraphCertificate& cert, double tol) {
  check_k(dec, k);
  check_rho(check_pair(g, S1, S2), rho);
  require(g, cert, 0.0);
  return eval_concentration_k(g, dec, S1, S2, rho, k, tol);
}

Entry diameter_check(const WeightedGraph& g, const SpectralDecomposition& dec, double tol) {
  const double arg = std::sqrt(2.0 * d_non(g) / dec.lambda(2)) * log2_volume_ratio(g);
  Entry e = make_entry("diameter", "diam <= 2 floor(sqrt(2 Dnon/lambda2) log2(mu(V)/min mu))", 0,
                       static_cast<double>(diameter(g)), 2.0 * nudged_floor(arg), tol);
  e.inputs = {{"lambda2", dec.lambda(2)}, {"Dnon", d_non(g)},
              {"log2_ratio", log2_volume_ratio(g)}};
  return e;
}

Entry diameter_k_check(const WeightedGraph& g, const SpectralDecomposition& dec, std::size_t k,
                       const GraphCertificate& cert, double tol) {
  check_k(dec, k);
  require(g, cert, 0.0);
  return eval_diameter_k(g, dec, k, tol);
}

Entry iso_ratio_report(const WeightedGraph& g, double h_k, double h_2, std::size_t k) {
  const double kk = static_cast<double>(k);
  const double scale = d_non(g) * d_nor(g) * kk * std::sqrt(std::log(kk)) * h_2;
  Entry e;
  e.name = "iso_ratio";
  e.tag = "h_k <= C Dnon Dnor k sqrt(ln k) h2";
  e.k = k;
  e.lhs = h_k;
  e.rhs = scale;
  e.slack = e.rhs - e.lhs;
  e.status = Status::ReportOnly;
  e.inputs = {{"implied_constant", h_k / scale}, {"h_k", h_k}, {"h2", h_2}};
  e.reason = "universal constant unspecified; rhs omits C";
  return e;
}

Entry iso_ratio_genus_report(const WeightedGraph& g, double h_k, double h_2, std::size_t k,
                             double genus_bound) {
  const double scale =
      d_non(g) * d_nor(g) * std::log(genus_bound + 1.0) * static_cast<double>(k) * h_2;
  Entry e;
  e.name = "iso_ratio_genus";
  e.tag = "h_k <= C Dnon Dnor ln(g+1) k h2";
  e.k = k;
  e.lhs = h_k;
  e.rhs = scale;
  e.slack = e.rhs - e.lhs;
  e.status = Status::ReportOnly;
  e.inputs = {{"implied_constant", h_k / scale}, {"genus_bound", genus_bound}};
  e.reason = "universal constant unspecified; rhs omits C";
  return e;
}

Entry partition_ratio_report(const WeightedGraph& g, double part_k, double part_2,
                             std::size_t k) {
  const double kk = static_cast<double>(k);
  const double scale =
      static_cast<double>(max_degree(g)) * kk * kk * std::sqrt(std::log(kk)) * part_2;
  Entry e;
  e.name = "partition_ratio";
  e.tag = "part_k <= C d_G k^2 sqrt(ln k) part_2";
  e.k = k;
  e.lhs = part_k;
  e.rhs = scale;
  e.slack = e.rhs - e.lhs;
  e.status = Status::ReportOnly;
  e.inputs = {{"implied_constant", part_k / scale}, {"d_G", static_cast<double>(max_degree(g))}};
  e.reason = "universal constant unspecified; rhs omits C";
  return e;
}

Entry mimura_check(const WeightedGraph& g, double h_3, double h_2, double tol) {
  const double dG = static_cast<double>(max_degree(g));
  Entry e = make_entry("mimura", "h3/h2 >= d_G/2", 3, dG / 2.0, h_3 / h_2, tol);
  e.inputs = {{"h3", h_3}, {"h2", h_2}, {"d_G", dG}};
  return e;
}

std::size_t BoundsReport::count(Status s) const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [s](const Entry& e) { return e.status == s; }));
}

BoundsReport full_report(const WeightedGraph& g, std::size_t k_max, const ReportOptions& options) {
  if (k_max < 2 || k_max > g.size()) {
    throw Error(ErrorCode::KOutOfRange, "k_max must lie in [2, N]");
  }
  BoundsReport report;
  report.family = g.family();
  report.fingerprint = g.fingerprint();
  report.k_max = k_max;
  report.options = options;
  const double tol = options.tol;
  std::mt19937_64 rng(options.seed);

  const CurvatureSummary summary = summarize_curvature(g);
  CurvatureSection& cs = report.curvature;
  cs.min_curvature = summary.min_curvature;
  cs.nonnegative = summary.nonnegative.has_value();
  if (summary.lower) cs.certified_lower = summary.lower->K();
  for (const auto& c : summary.profile) {
    cs.per_vertex.push_back(c.value);
    if (!c.psd_at_zero) cs.failing_vertices.push_back(c.vertex);
  }
  const bool cd0 = cs.nonnegative;

  auto& out = report.entries;
  auto gate = [&](bool certified, Entry e, const std::string& hypothesis) {
    if (!certified) {
      if (options.force) {
        if (e.status != Status::Skipped) e.status = Status::ReportOnly;
        e.reason = "forced: " + hypothesis + " not certified";
      } else {
        e.status = Status::Skipped;
        e.reason = hypothesis + " not certified";
      }
    }
    out.push_back(std::move(e));
  };
  auto skipped = [&](std::string name, std::size_t k, std::string reason) {
    Entry e;
    e.name = std::move(name);
    e.k = k;
    e.status = Status::Skipped;
    e.reason = std::move(reason);
    out.push_back(std::move(e));
  };

  const SpectralDecomposition dec = decompose(g);
  report.h2 = estimate_h2(g, dec, options.budget, options.max_connected_sets);
  const H2Estimate& h2 = report.h2;

  // Exact multi-way constants, as far as the budget allows.
  std::vector<std::optional<double>> hk(k_max + 2), part(k_max + 1);
  if (h2.exact()) hk[2] = h2.lower;
  for (std::size_t k = 2; k <= std::min(k_max + 1, g.size()); ++k) {
    if (!hk[k] && enumeration_cost(g.size(), k, PartitionMode::Subpartition) <= options.budget) {
      hk[k] = multiway_constant(g, k, PartitionMode::Subpartition, options.budget).value;
    }
    if (k <= k_max && enumeration_cost(g.size(), k, PartitionMode::Partition) <= options.budget) {
      part[k] = multiway_constant(g, k, PartitionMode::Partition, options.budget).value;
    }
  }
  const std::string budget_reason = "enumeration budget exceeded";

  {
    Entry e = make_entry("spectral_range", "lambda_N <= 2 Dnon", 0, dec.lambda(dec.size()),
                         2.0 * d_non(g), tol);
    out.push_back(std::move(e));
  }

  gate(cd0, eval_buser(g, dec, h2, tol), "CD(0,inf)");
  if (std::isfinite(cs.min_curvature)) {
    const double K = summary.lower ? std::max(0.0, -summary.lower->K())
                                   : std::max(0.0, -cs.min_curvature);
    gate(summary.lower.has_value(), eval_buser_negative(g, dec, h2, K, tol), "CD(-K,inf)");
  } else {
    skipped("buser_negative_curvature", 0, "no finite curvature lower bound");
  }
  out.push_back(diameter_check(g, dec, tol));

  for (std::size_t k = 2; k <= k_max; ++k) {
    out.push_back(improved_cheeger_check(g, dec, h2, k, tol));
    gate(cd0, eval_eigenvalue_ratio(g, dec, k, tol), "CD(0,inf)");
    {
      Entry e;
      e.name = "eigenvalue_ratio_observed";
      e.tag = "lambda_k / lambda2 against Dnon Dnor k^2";
      e.k = k;
      e.lhs = dec.lambda(k) / dec.lambda(2);
      e.rhs = d_non(g) * d_nor(g) * static_cast<double>(k * k);
      e.slack = e.rhs - e.lhs;
      e.status = Status::ReportOnly;
      out.push_back(std::move(e));
    }
    gate(cd0, eval_higher_buser(g, dec, h2, k, tol), "CD(0,inf)");
    gate(cd0, eval_diameter_k(g, dec, k, tol), "CD(0,inf)");

    if (hk[k] && hk[2]) {
      if (k > 2) {
        Entry e = make_entry("hk_dominates_h2", "h2 <= h_k", k, *hk[2], *hk[k], tol);
        out.push_back(std::move(e));
      }
      Entry r = iso_ratio_report(g, *hk[k], *hk[2], k);
      if (!cd0) r.reason += "; CD(0,inf) not certified";
      out.push_back(std::move(r));
      if (options.genus_bound) {
        out.push_back(iso_ratio_genus_report(g, *hk[k], *hk[2], k, *options.genus_bound));
      }
    } else {
      skipped("iso_ratio", k, budget_reason);
    }
    if (hk[k] && part[k]) {
      out.push_back(make_entry("sandwich_lower", "h_k <= part_k", k, *hk[k], *part[k], tol));
      out.push_back(make_entry("sandwich_upper", "part_k <= k h_k", k, *part[k],
                               static_cast<double>(k) * *hk[k], tol));
      if (part[2]) out.push_back(partition_ratio_report(g, *part[k], *part[2], k));
    } else {
      skipped("sandwich_lower", k, budget_reason);
    }
    if (k + 1 <= g.size()) {
      if (hk[k] && hk[k + 1]) {
        out.push_back(make_entry("monotone", "h_k <= h_{k+1}", k, *hk[k], *hk[k + 1], tol));
      } else {
        skipped("monotone", k, budget_reason);
      }
    }
  }

  if (g.family().rfind("mimura", 0) == 0) {
    if (hk[2] && g.size() >= 3 && hk.size() > 3 && hk[3]) {
      out.push_back(mimura_check(g, *hk[3], *hk[2], tol));
    } else if (g.size() >= 3 &&
               enumeration_cost(g.size(), 3, PartitionMode::Subpartition) <= options.budget &&
               hk[2]) {
      const double h3 = multiway_constant(g, 3, PartitionMode::Subpartition, options.budget).value;
      out.push_back(mimura_check(g, h3, *hk[2], tol));
    } else {
      skipped("mimura", 3, budget_reason);
    }
  }

  // Concentration and boundary checks on sampled set pairs.
  const auto pairs = sample_set_pairs(g, options.set_pairs, rng);
  if (pairs.empty()) {
    skipped("finer_cheeger", 0, "diameter below 2, no separated set pair");
    skipped("concentration", 0, "diameter below 2, no separated set pair");
  }
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const SetPair& p = pairs[i];
    const double rho = static_cast<double>(p.dist) - 1.0;
    Entry f = finer_cheeger_check(g, dec, p.S1, p.S2, tol);
    f.instance = i;
    out.push_back(std::move(f));
    Entry c = concentration_check(g, dec, p.S1, p.S2, rho, tol);
    c.instance = i;
    out.push_back(std::move(c));
    for (std::size_t k = 2; k <= k_max; ++k) {
      Entry ck = eval_concentration_k(g, dec, p.S1, p.S2, rho, k, tol);
      ck.instance = i;
      gate(cd0, std::move(ck), "CD(0,inf)");
    }
    Entry b = from_scalar("boundary_measure", "||sqrt(Gamma chi_S)||_1 <= sqrt(2 Dnor) |dS|_w",
                          boundary_measure_check(g, p.S1));
    b.instance = i;
    b.sets = {p.S1.members()};
    out.push_back(std::move(b));
  }

  // Heat semigroup checks with seeded random functions.
  constexpr std::size_t kHeatSamples = 3;
  const double times[] = {0.1, 1.0, 5.0};
  std::vector<VertexFunction> fs;
  for (std::size_t i = 0; i < kHeatSamples; ++i) fs.push_back(random_function(g.size(), rng));
  {
    std::uniform_real_distribution<double> tdist(0.0, 3.0);
    double worst = 0.0, scale = 1.0;
    for (std::size_t i = 0; i < kHeatSamples; ++i) {
      const VertexFunction h = random_function(g.size(), rng);
      const auto r = semigroup_residuals(g, dec, fs[i], h, tdist(rng), tdist(rng));
      worst = std::max(worst, r.worst() / r.scale);
      scale = std::max(scale, r.scale);
    }
    Entry e = make_entry("heat_semigroup", "semigroup identities residual <= 1e-8", 0, worst, 1e-8,
                         0.0);
    out.push_back(std::move(e));
  }
  for (std::size_t ti = 0; ti < std::size(times); ++ti) {
    const double t = times[ti];
    std::optional<Entry> grad, rp, l1;
    for (const auto& f : fs) {
      if (summary.lower) {
        keep_worst(grad, from_pointwise("heat_gradient", "Gamma(P_t f) <= e^{2Kt} P_t Gamma(f)",
                                        gradient_estimate_check(g, dec, f, t, *summary.lower)));
      }
      if (cd0) {
        keep_worst(rp, from_pointwise("heat_reverse_poincare",
                                      "2t Gamma(P_t f) <= P_t(f^2) - (P_t f)^2",
                                      reverse_poincare_check(g, dec, f, t, *summary.nonnegative)));
        keep_worst(l1, from_scalar("heat_l1_contraction",
                                   "||f - P_t f||_1 <= sqrt(2t) ||sqrt(Gamma f)||_1",
                                   l1_contraction_check(g, dec, f, t, *summary.nonnegative)));
      }
    }
    auto emit = [&](std::optional<Entry>& e, const std::string& name, const std::string& hyp) {
      if (e) {
        e->instance = ti;
        e->inputs.push_back({"t", t});
        out.push_back(std::move(*e));
      } else {
        Entry s;
        s.name = name;
        s.instance = ti;
        s.status = Status::Skipped;
        s.reason = hyp + " not certified";
        s.inputs = {{"t", t}};
        out.push_back(std::move(s));
      }
    };
    emit(grad, "heat_gradient", "CD(-K,inf)");
    emit(rp, "heat_reverse_poincare", "CD(0,inf)");
    emit(l1, "heat_l1_contraction", "CD(0,inf)");
  }

  std::stable_sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.name, a.k, a.instance) < std::tie(b.name, b.k, b.instance);
  });
  return report;
}

}  // namespace curvegraph
