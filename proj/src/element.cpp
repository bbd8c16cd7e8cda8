#include "gaf/element.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gaf/errors.hpp"
#include "gaf/quadrature.hpp"

namespace gaf {

namespace {

void sort_graded(std::vector<Monomial>& v) {
  std::stable_sort(v.begin(), v.end(), [](const Monomial& a, const Monomial& b) {
    const int da = a.px + a.py;
    const int db = b.px + b.py;
    if (da != db) return da < db;
    return a.px > b.px;
  });
}

double ipow(double x, int p) {
  double r = 1.0;
  for (int k = 0; k < p; ++k) r *= x;
  return r;
}

// Integral of x^p over [-1/2, 1/2].
double centered_power_integral(int p) {
  if (p % 2 != 0) return 0.0;
  return ipow(0.5, p) / (p + 1.0);
}

}  // namespace

std::string to_string(MomentSet m) { return m == MomentSet::Triangle ? "tri" : "tensor"; }

std::string to_string(EdgeNodeKind e) {
  switch (e) {
    case EdgeNodeKind::Gauss: return "gauss";
    case EdgeNodeKind::GaussLobatto: return "lobatto";
    case EdgeNodeKind::Uniform: return "uniform";
  }
  return "gauss";
}

MomentSet parse_moment_set(const std::string& s) {
  if (s == "tri" || s == "triangle") return MomentSet::Triangle;
  if (s == "tensor") return MomentSet::Tensor;
  throw std::invalid_argument("unknown moment set '" + s + "' (expected tri|tensor)");
}

EdgeNodeKind parse_edge_node_kind(const std::string& s) {
  if (s == "gauss") return EdgeNodeKind::Gauss;
  if (s == "lobatto" || s == "gauss_lobatto") return EdgeNodeKind::GaussLobatto;
  if (s == "uniform") return EdgeNodeKind::Uniform;
  throw std::invalid_argument("unknown edge node kind '" + s + "' (expected gauss|lobatto|uniform)");
}

std::vector<double> gauss_edge_nodes(int count) {
  if (count < 1) throw std::invalid_argument("gauss_edge_nodes: count must be >= 1");
  return gauss_legendre(count).points;
}

std::vector<double> alt_edge_nodes(int count, EdgeNodeKind kind) {
  if (count < 1) throw std::invalid_argument("alt_edge_nodes: count must be >= 1");
  std::vector<double> nodes(count);
  switch (kind) {
    case EdgeNodeKind::Uniform: {
      const int n = count + 1;
      for (int a = 0; a < count; ++a) nodes[a] = -0.5 + static_cast<double>(a + 1) / n;
      if (count % 2 == 1) nodes[count / 2] = 0.0;
      return nodes;
    }
    case EdgeNodeKind::GaussLobatto: {
      const auto rule = gauss_lobatto(count + 2);
      std::copy(rule.points.begin() + 1, rule.points.end() - 1, nodes.begin());
      return nodes;
    }
    case EdgeNodeKind::Gauss:
      return gauss_edge_nodes(count);
  }
  return nodes;
}

std::vector<double> edge_nodes(int count, EdgeNodeKind kind) {
  return kind == EdgeNodeKind::Gauss ? gauss_edge_nodes(count) : alt_edge_nodes(count, kind);
}

std::vector<Monomial> moment_indices(int degree, MomentSet set) {
  if (degree < 2) throw std::invalid_argument("moment_indices: degree must be >= 2");
  std::vector<Monomial> out;
  if (set == MomentSet::Tensor) {
    for (int k = 0; k <= degree - 2; ++k)
      for (int l = 0; l <= degree - 2; ++l) out.push_back({k, l});
  } else {
    const int m = std::max(0, degree - 4);
    for (int k = 0; k <= m; ++k)
      for (int l = 0; k + l <= m; ++l) out.push_back({k, l});
  }
  sort_graded(out);
  return out;
}

std::vector<Monomial> build_basis(int degree, MomentSet set) {
  if (degree < 2) throw std::invalid_argument("build_basis: degree must be >= 2");
  std::vector<Monomial> out;
  if (set == MomentSet::Tensor) {
    for (int m = 0; m <= degree; ++m)
      for (int n = 0; n <= degree; ++n) out.push_back({m, n});
  } else {
    for (int m = 0; m <= degree; ++m)
      for (int n = 0; m + n <= degree; ++n) out.push_back({m, n});
    out.push_back({degree, 1});
    out.push_back({1, degree});
    if (degree <= 3) out.push_back({2, 2});
  }
  sort_graded(out);
  return out;
}

double moment_normalization(int k, int l) {
  return (k + 1.0) * ipow(2.0, k) * (l + 1.0) * ipow(2.0, l);
}

double moment_functional(int k, int l, int m, int n) {
  return moment_normalization(k, l) * centered_power_integral(k + m) *
         centered_power_integral(l + n);
}

std::vector<DofDescriptor> dof_layout(std::span<const double> nodes,
                                      std::span<const Monomial> moments) {
  std::vector<DofDescriptor> out;
  const Point2 corners[4] = {{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}};
  for (int n = 0; n < 4; ++n) out.push_back({NodeDof{n}, corners[n]});
  for (int e = 0; e < 4; ++e) {
    for (int a = 0; a < static_cast<int>(nodes.size()); ++a) {
      const double xi = nodes[a];
      Point2 p;
      switch (static_cast<Edge>(e)) {
        case Edge::Bottom: p = {xi, -0.5}; break;
        case Edge::Right: p = {0.5, xi}; break;
        case Edge::Top: p = {xi, 0.5}; break;
        case Edge::Left: p = {-0.5, xi}; break;
      }
      out.push_back({EdgeDof{static_cast<Edge>(e), a}, p});
    }
  }
  for (const auto& mo : moments) out.push_back({MomentDof{mo.px, mo.py}, {}});
  return out;
}

Eigen::VectorXd eval_monomials(std::span<const Monomial> basis, Point2 x) {
  Eigen::VectorXd v(basis.size());
  for (std::size_t s = 0; s < basis.size(); ++s)
    v[s] = ipow(x.x, basis[s].px) * ipow(x.y, basis[s].py);
  return v;
}

Eigen::MatrixXd assemble_vandermonde(std::span<const DofDescriptor> layout,
                                     std::span<const Monomial> basis) {
  if (layout.size() != basis.size())
    throw std::invalid_argument("assemble_vandermonde: layout and basis sizes differ");
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd v(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& dof = layout[r];
    if (const auto* mom = std::get_if<MomentDof>(&dof.kind)) {
      for (Eigen::Index s = 0; s < n; ++s)
        v(r, s) = moment_functional(mom->k, mom->l, basis[s].px, basis[s].py);
    } else {
      v.row(r) = eval_monomials(basis, dof.location).transpose();
    }
  }
  return v;
}

ShapeSolve solve_shape_coefficients(const Eigen::MatrixXd& v) {
  if (v.rows() != v.cols())
    throw std::invalid_argument("solve_shape_coefficients: matrix must be square");
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(v);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  const double smin = sv.size() ? sv(sv.size() - 1) : 0.0;
  const double cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  if (!(cond < kUnisolvenceConditionLimit)) {
    throw UnisolvenceFailure("generalized Vandermonde is numerically singular (condition " +
                                 std::to_string(cond) + ")",
                             cond);
  }
  ShapeSolve out;
  out.coefficients = v.partialPivLu().solve(Eigen::MatrixXd::Identity(v.rows(), v.cols()));
  out.condition = cond;
  return out;
}

ElementDef ElementDef::build(int degree, MomentSet moments, EdgeNodeKind edges) {
  if (degree < 2) throw std::invalid_argument("ElementDef: degree must be >= 2");
  ElementDef el;
  el.degree_ = degree;
  el.moment_set_ = moments;
  el.edge_kind_ = edges;
  el.edge_nodes_ = gaf::edge_nodes(degree - 1, edges);
  el.basis_ = build_basis(degree, moments);
  el.moments_ = moment_indices(degree, moments);
  el.finalize();
  return el;
}

ElementDef ElementDef::from_parts(int degree, std::vector<double> nodes,
                                  std::vector<Monomial> basis, std::vector<Monomial> moments) {
  if (degree < 2) throw std::invalid_argument("ElementDef: degree must be >= 2");
  if (static_cast<int>(nodes.size()) != degree - 1)
    throw std::invalid_argument("ElementDef: need degree - 1 edge nodes");
  ElementDef el;
  el.degree_ = degree;
  el.edge_nodes_ = std::move(nodes);
  el.basis_ = std::move(basis);
  el.moments_ = std::move(moments);
  el.finalize();
  return el;
}

void ElementDef::finalize() {
  dofs_ = dof_layout(edge_nodes_, moments_);
  if (dofs_.size() != basis_.size()) {
    throw UnisolvenceFailure("basis size " + std::to_string(basis_.size()) +
                                 " does not match DOF count " + std::to_string(dofs_.size()),
                             std::numeric_limits<double>::infinity());
  }
  vandermonde_ = assemble_vandermonde(dofs_, basis_);
  auto solved = solve_shape_coefficients(vandermonde_);
  coeffs_ = std::move(solved.coefficients);
  condition_ = solved.condition;
}

Eigen::VectorXd ElementDef::eval_shapes(Point2 x) const {
  return coeffs_.transpose() * eval_monomials(basis_, x);
}

ElementDef::Gradients ElementDef::eval_shape_grads(Point2 x) const {
  const auto n = static_cast<Eigen::Index>(basis_.size());
  Eigen::VectorXd mx(n), my(n);
  for (Eigen::Index s = 0; s < n; ++s) {
    const auto [px, py] = basis_[s];
    mx[s] = px == 0 ? 0.0 : px * ipow(x.x, px - 1) * ipow(x.y, py);
    my[s] = py == 0 ? 0.0 : py * ipow(x.x, px) * ipow(x.y, py - 1);
  }
  return {coeffs_.transpose() * mx, coeffs_.transpose() * my};
}

double ElementDef::duality_residual() const {
  const Eigen::MatrixXd d = vandermonde_ * coeffs_ - Eigen::MatrixXd::Identity(
                                                         vandermonde_.rows(), vandermonde_.cols());
  return d.cwiseAbs().maxCoeff();
}

}  // namespace gaf
