#include "curvegraph/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "curvegraph/error.hpp"
#include "parallel.hpp"

namespace curvegraph {

namespace {

using Eigen::Index;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Index idx(std::size_t i) { return static_cast<Index>(i); }

void check_vertex(const WeightedGraph& g, std::size_t x) {
  if (x >= g.size()) throw Error(ErrorCode::InvalidVertex, "vertex " + std::to_string(x) + " out of range");
}

void check_size(const WeightedGraph& g, const VertexFunction& f) {
  if (f.size() != idx(g.size())) {
    throw Error(ErrorCode::InvalidParameter, "function has " + std::to_string(f.size()) +
                                                 " values for a graph with " +
                                                 std::to_string(g.size()) + " vertices");
  }
}

}  // namespace

Dimension Dimension::finite(double n) {
  if (!(n > 0.0)) throw Error(ErrorCode::InvalidParameter, "dimension must be positive");
  return Dimension(n);
}

Eigen::VectorXd LocalForms::restrict(const VertexFunction& f) const {
  Eigen::VectorXd local(idx(support.size()));
  for (std::size_t i = 0; i < support.size(); ++i) local[idx(i)] = f[idx(support[i])];
  return local;
}

VertexFunction LocalForms::embed(const Eigen::VectorXd& local, std::size_t vertex_count) const {
  VertexFunction f = VertexFunction::Zero(idx(vertex_count));
  for (std::size_t i = 0; i < support.size(); ++i) f[idx(support[i])] = local[idx(i)];
  return f;
}

double gamma2_bilinear(const WeightedGraph& g, const VertexFunction& f, const VertexFunction& h,
                       std::size_t x) {
  check_vertex(g, x);
  check_size(g, f);
  check_size(g, h);
  const VertexFunction gfh = gamma(g, f, h);
  const VertexFunction lf = laplacian_apply(g, f);
  const VertexFunction lh = laplacian_apply(g, h);
  return 0.5 * (laplacian_apply(g, gfh, x) - gamma(g, f, lh, x) - gamma(g, h, lf, x));
}

double gamma2_value(const WeightedGraph& g, const VertexFunction& f, std::size_t x) {
  return gamma2_bilinear(g, f, f, x);
}

double gamma2_explicit(const WeightedGraph& g, const VertexFunction& f, std::size_t x) {
  check_vertex(g, x);
  check_size(g, f);
  const double mux = g.measure(x);
  const double fx = f[idx(x)];
  double second_diff = 0.0;
  double degree_term = 0.0;
  double lap = 0.0;
  double grad = 0.0;
  for (const Neighbor& ny : g.neighbors(x)) {
    const double fy = f[idx(ny.vertex)];
    const double muy = g.measure(ny.vertex);
    double inner_sum = 0.0;
    for (const Neighbor& nz : g.neighbors(ny.vertex)) {
      const double d = fx - 2.0 * fy + f[idx(nz.vertex)];
      inner_sum += nz.weight * d * d;
    }
    second_diff += ny.weight / muy * inner_sum;
    degree_term += ny.weight * (fy - fx) * (fy - fx) * g.weighted_degree(ny.vertex) / muy;
    lap += ny.weight * (fy - fx);
    grad += ny.weight * (fy - fx) * (fy - fx);
  }
  const double H = 0.25 / mux * second_diff;
  lap /= mux;
  grad /= 2.0 * mux;
  return H + 0.5 * lap * lap - 0.5 * (g.weighted_degree(x) / mux) * grad - 0.25 / mux * degree_term;
}

LocalForms local_forms(const WeightedGraph& g, std::size_t x) {
  check_vertex(g, x);
  LocalForms forms;
  forms.center = x;
  const auto nbrs = g.neighbors(x);
  forms.neighbor_count = nbrs.size();

  // Support ordering: center, N(x), S_2(x).
  std::vector<Index> pos(g.size(), -1);
  forms.support.push_back(x);
  pos[x] = 0;
  for (const Neighbor& n : nbrs) {
    pos[n.vertex] = idx(forms.support.size());
    forms.support.push_back(n.vertex);
  }
  std::vector<std::size_t> sphere;
  for (const Neighbor& n : nbrs) {
    for (const Neighbor& m : g.neighbors(n.vertex)) {
      if (pos[m.vertex] == -1) {
        pos[m.vertex] = -2;
        sphere.push_back(m.vertex);
      }
    }
  }
  std::sort(sphere.begin(), sphere.end());
  for (std::size_t z : sphere) {
    pos[z] = idx(forms.support.size());
    forms.support.push_back(z);
  }
  const Index m = idx(forms.support.size());

  // Gamma(.,.)(v) and the Laplacian row at v, for v in {x} u N(x), as local
  // matrices. Both only touch B_1(v), which lies inside B_2(x).
  auto gamma_form = [&](std::size_t v) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
    const Index pv = pos[v];
    const double scale = 0.5 / g.measure(v);
    for (const Neighbor& n : g.neighbors(v)) {
      const Index pz = pos[n.vertex];
      const double c = scale * n.weight;
      A(pz, pz) += c;
      A(pv, pv) += c;
      A(pz, pv) -= c;
      A(pv, pz) -= c;
    }
    return A;
  };
  auto laplacian_row = [&](std::size_t v) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(m);
    const Index pv = pos[v];
    for (const Neighbor& n : g.neighbors(v)) {
      row[pos[n.vertex]] += n.weight / g.measure(v);
      row[pv] -= n.weight / g.measure(v);
    }
    return row;
  };

  const double mux = g.measure(x);
  forms.G1 = gamma_form(x);
  forms.drow = laplacian_row(x);

  // Gamma_2(f,h)(x) = 1/2 [ sum_y (w_xy/mu_x) (Gamma(f,h)(y) - Gamma(f,h)(x))
  //                         - Gamma(f, Delta h)(x) - Gamma(h, Delta f)(x) ]
  Eigen::MatrixXd laplace_of_gamma = Eigen::MatrixXd::Zero(m, m);
  Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(m, m);
  for (const Neighbor& n : nbrs) {
    const double c = n.weight / mux;
    laplace_of_gamma += c * (gamma_form(n.vertex) - forms.G1);
    Eigen::VectorXd diff = Eigen::VectorXd::Zero(m);
    diff[pos[n.vertex]] += 1.0;
    diff[0] -= 1.0;
    const Eigen::RowVectorXd lap_diff = laplacian_row(n.vertex) - forms.drow;
    cross += (0.5 * n.weight / mux) * diff * lap_diff;
  }
  forms.G2 = 0.5 * (laplace_of_gamma - cross - cross.transpose());
  // Symmetrize exactly; the construction is symmetric up to rounding.
  forms.G2 = 0.5 * (forms.G2 + forms.G2.transpose()).eval();
  return forms;
}

CdCheckResult cd_check(const LocalForms& forms, std::size_t vertex_count, double K, Dimension n,
                       double tol) {
  if (!std::isfinite(K)) throw Error(ErrorCode::InvalidParameter, "K must be finite");
  Eigen::MatrixXd Q = forms.G2 - K * forms.G1;
  if (!n.is_infinite()) Q -= n.inverse() * forms.drow.transpose() * forms.drow;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q);
  CdCheckResult r;
  r.vertex = forms.center;
  r.min_eigenvalue = es.eigenvalues()[0];
  r.threshold = tol * std::max(1.0, Q.norm());
  r.holds = r.min_eigenvalue >= -r.threshold;
  r.witness = forms.embed(es.eigenvectors().col(0), vertex_count);
  return r;
}

CdCheckResult cd_check(const WeightedGraph& g, std::size_t x, double K, Dimension n, double tol) {
  return cd_check(local_forms(g, x), g.size(), K, n, tol);
}

CurvatureCertificate curvature_value(const WeightedGraph& g, std::size_t x, Dimension n) {
  check_vertex(g, x);
  if (g.degree(x) == 0) throw Error(ErrorCode::DegenerateVertex, "vertex has no neighbors");
  const LocalForms forms = local_forms(g, x);
  const Index m = idx(forms.support.size());
  const Index k = idx(forms.neighbor_count);
  const Index o = m - 1 - k;

  Eigen::MatrixXd Q0 = forms.G2;
  if (!n.is_infinite()) Q0 -= n.inverse() * forms.drow.transpose() * forms.drow;

  CurvatureCertificate cert;
  cert.vertex = x;
  cert.n = n;
  cert.psd_at_zero = cd_check(forms, g.size(), 0.0, n).holds;

  // Translation invariance lets us pin f(x) = 0; coordinates 1..k are the
  // neighbors, where Gamma(f)(x) is a positive diagonal form.
  const Eigen::MatrixXd Qii = Q0.block(1, 1, k, k);
  const Eigen::VectorXd D = forms.G1.diagonal().segment(1, k);
  const double scale = std::max(1.0, Q0.norm());

  Eigen::MatrixXd schur = Qii;
  Eigen::MatrixXd coupling;  // Q_oo^+ Q_oi, used to rebuild the witness
  if (o > 0) {
    const Eigen::MatrixXd Qoo = Q0.block(1 + k, 1 + k, o, o);
    const Eigen::MatrixXd Qoi = Q0.block(1 + k, 1, o, k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Qoo);
    const Eigen::VectorXd& ev = es.eigenvalues();
    const Eigen::MatrixXd& V = es.eigenvectors();
    if (ev[0] < -kPsdTolerance * scale) {
      // Gamma(f)(x) = 0 but Gamma_2(f)(x) < 0: no K can work.
      Eigen::VectorXd local = Eigen::VectorXd::Zero(m);
      local.tail(o) = V.col(0);
      cert.value = kNegInf;
      cert.witness = forms.embed(local, g.size());
      return cert;
    }
    const double cutoff = 1e-12 * std::max(std::abs(ev[o - 1]), std::abs(ev[0]));
    Eigen::MatrixXd range(o, 0);
    Eigen::VectorXd inv_vals;
    std::vector<Index> kept;
    for (Index i = 0; i < o; ++i) {
      if (std::abs(ev[i]) > cutoff) kept.push_back(i);
    }
    range.resize(o, idx(kept.size()));
    inv_vals.resize(idx(kept.size()));
    for (std::size_t i = 0; i < kept.size(); ++i) {
      range.col(idx(i)) = V.col(kept[i]);
      inv_vals[idx(i)] = 1.0 / ev[kept[i]];
    }
    const Eigen::MatrixXd pinv = range * inv_vals.asDiagonal() * range.transpose();
    const Eigen::MatrixXd off_range = Qoi - range * (range.transpose() * Qoi);
    if (off_range.norm() > 1e-9 * scale) {
      // Q_oi u leaves the range of Q_oo: driving the outer coordinates along
      // the kernel makes the quadratic form unbounded below.
      Index j = 0;
      off_range.colwise().norm().maxCoeff(&j);
      const Eigen::VectorXd r = off_range.col(j);
      const double t = (std::abs(Qii(j, j)) + 1.0) / r.squaredNorm();
      Eigen::VectorXd local = Eigen::VectorXd::Zero(m);
      local[1 + j] = 1.0;
      local.tail(o) = -t * r;
      cert.value = kNegInf;
      cert.witness = forms.embed(local, g.size());
      return cert;
    }
    coupling = pinv * Qoi;
    schur -= Qoi.transpose() * coupling;
  }

  const Eigen::VectorXd d_inv_sqrt = D.array().rsqrt();
  Eigen::MatrixXd reduced = d_inv_sqrt.asDiagonal() * schur * d_inv_sqrt.asDiagonal();
  reduced = 0.5 * (reduced + reduced.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(reduced);
  cert.value = es.eigenvalues()[0];
  const Eigen::VectorXd u = d_inv_sqrt.asDiagonal() * es.eigenvectors().col(0);
  Eigen::VectorXd local = Eigen::VectorXd::Zero(m);
  local.segment(1, k) = u;
  if (o > 0) local.tail(o) = -coupling * u;
  cert.witness = forms.embed(local, g.size());
  return cert;
}

std::vector<CurvatureCertificate> curvature_profile(const WeightedGraph& g, Dimension n) {
  std::vector<CurvatureCertificate> out(g.size());
  detail::parallel_for(g.size(), [&](std::size_t x) { out[x] = curvature_value(g, x, n); });
  return out;
}

bool GraphCertificate::implies(const WeightedGraph& g, double K_required, Dimension n_required) const {
  return g.fingerprint() == fingerprint_ && K_ >= K_required && n_.value() <= n_required.value();
}

std::vector<std::size_t> GraphCdCheck::failing_vertices() const {
  std::vector<std::size_t> out;
  for (const auto& r : per_vertex) {
    if (!r.holds) out.push_back(r.vertex);
  }
  return out;
}

GraphCdCheck cd_check_graph(const WeightedGraph& g, double K, Dimension n, double tol) {
  GraphCdCheck out;
  out.per_vertex.resize(g.size());
  detail::parallel_for(g.size(), [&](std::size_t x) { out.per_vertex[x] = cd_check(g, x, K, n, tol); });
  out.holds = std::all_of(out.per_vertex.begin(), out.per_vertex.end(),
                          [](const CdCheckResult& r) { return r.holds; });
  if (out.holds) out.certificate = GraphCertificate(K, n, g.fingerprint());
  return out;
}

CurvatureSummary summarize_curvature(const WeightedGraph& g) {
  CurvatureSummary s;
  s.profile = curvature_profile(g, Dimension::infinite());
  s.min_curvature = std::numeric_limits<double>::infinity();
  for (const auto& c : s.profile) s.min_curvature = std::min(s.min_curvature, c.value);
  auto cd0 = cd_check_graph(g, 0.0, Dimension::infinite());
  if (cd0.certificate) s.nonnegative = cd0.certificate;
  if (std::isfinite(s.min_curvature)) {
    const double K = s.min_curvature - 1e-6 * std::max(1.0, std::abs(s.min_curvature));
    auto lower = cd_check_graph(g, K, Dimension::infinite());
    if (lower.certificate) s.lower = lower.certificate;
  }
  return s;
}

double product_superadditivity_residual(const WeightedGraph& g1, const WeightedGraph& g2,
                                        const WeightedGraph& product, const VertexFunction& F,
                                        std::size_t x, std::size_t y) {
  auto unit = [](const WeightedGraph& g) { return (g.measures().array() == 1.0).all(); };
  if (!unit(g1) || !unit(g2) || !unit(product)) {
    throw Error(ErrorCode::InvalidParameter, "superadditivity needs unit measures on all graphs");
  }
  const std::size_t n1 = g1.size();
  const std::size_t n2 = g2.size();
  if (product.size() != n1 * n2) throw Error(ErrorCode::InvalidParameter, "product size mismatch");
  check_size(product, F);
  check_vertex(g1, x);
  check_vertex(g2, y);
  VertexFunction row(idx(n1));  // F_y
  for (std::size_t i = 0; i < n1; ++i) row[idx(i)] = F[idx(i * n2 + y)];
  VertexFunction col(idx(n2));  // F^x
  for (std::size_t j = 0; j < n2; ++j) col[idx(j)] = F[idx(x * n2 + j)];
  return gamma2_value(product, F, x * n2 + y) - gamma2_value(g1, row, x) - gamma2_value(g2, col, y);
}

double product_superadditivity_residual(const WeightedGraph& g1, const WeightedGraph& g2,
                                        const VertexFunction& F, std::size_t x, std::size_t y) {
  return product_superadditivity_residual(g1, g2, cartesian_product(g1, g2, MeasureMode::unit()), F,
                                          x, y);
}

ProductCd product_cd_bound(double K1, Dimension n1, double K2, Dimension n2, double mu1, double mu2,
                           double mu12) {
  if (!(mu1 > 0 && mu2 > 0 && mu12 > 0)) {
    throw Error(ErrorCode::NonPositiveMeasure, "product measures must be positive");
  }
  const double a = mu1 * mu1;
  const double b = mu2 * mu2;
  const double c = mu12 * mu12;
  const double K = std::min(a * K1, b * K2) / c;
  if (n1.is_infinite() || n2.is_infinite()) return {K, Dimension::infinite()};
  return {K, Dimension::finite(c * (b * n1.value() + a * n2.value()) / (a * b))};
}

}  // namespace curvegraph
