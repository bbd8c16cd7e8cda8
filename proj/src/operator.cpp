#include "gaf/operator.hpp"

#include <algorithm>

namespace gaf {

int default_moment_quadrature_points(const ElementDef& element) {
  int m_max = 0;
  for (const auto& mo : element.moments()) m_max = std::max({m_max, mo.px, mo.py});
  return (element.degree() + m_max + 2) / 2;
}

OperatorTables OperatorTables::build(const ElementDef& element, int quad_points) {
  OperatorTables t;
  t.q = quad_points > 0 ? quad_points : default_moment_quadrature_points(element);
  t.rule = gauss_legendre(t.q);
  t.gather = gather_map(element);

  const int nq = t.q;
  const int np = element.edge_point_count();
  const auto& xi = element.edge_nodes();
  const auto& pts = t.rule.points;
  const auto& wts = t.rule.weights;

  t.row_right = 0;
  t.row_top = t.row_right + nq;
  t.row_bulk = t.row_top + nq;
  t.row_dx_own = t.row_bulk + nq * nq;
  t.row_dy_own = t.row_dx_own + 1 + 2 * np;
  t.row_dx_left = t.row_dy_own + 1 + 2 * np;
  t.row_dy_below = t.row_dx_left + 1 + np;
  const int rows = t.row_dy_below + 1 + np;

  t.eval.resize(rows, element.dof_count());
  for (int p = 0; p < nq; ++p) {
    t.eval.row(t.row_right + p) = element.eval_shapes({0.5, pts[p]}).transpose();
    t.eval.row(t.row_top + p) = element.eval_shapes({pts[p], 0.5}).transpose();
  }
  for (int qy = 0; qy < nq; ++qy)
    for (int qx = 0; qx < nq; ++qx)
      t.eval.row(t.row_bulk + qy * nq + qx) = element.eval_shapes({pts[qx], pts[qy]}).transpose();

  // Owned points in slot order: upper-right node, right edge, top edge.
  std::vector<Point2> owned{{0.5, 0.5}};
  for (int a = 0; a < np; ++a) owned.push_back({0.5, xi[a]});
  for (int a = 0; a < np; ++a) owned.push_back({xi[a], 0.5});
  for (std::size_t s = 0; s < owned.size(); ++s) {
    const auto g = element.eval_shape_grads(owned[s]);
    t.eval.row(t.row_dx_own + static_cast<int>(s)) = g.dx.transpose();
    t.eval.row(t.row_dy_own + static_cast<int>(s)) = g.dy.transpose();
  }
  // Derivatives this cell supplies to its left / lower neighbour's owned points.
  t.eval.row(t.row_dx_left) = element.eval_shape_grads({-0.5, 0.5}).dx.transpose();
  t.eval.row(t.row_dy_below) = element.eval_shape_grads({0.5, -0.5}).dy.transpose();
  for (int a = 0; a < np; ++a) {
    t.eval.row(t.row_dx_left + 1 + a) = element.eval_shape_grads({-0.5, xi[a]}).dx.transpose();
    t.eval.row(t.row_dy_below + 1 + a) = element.eval_shape_grads({xi[a], -0.5}).dy.transpose();
  }

  const int nmom = element.moment_count();
  t.w_right.resize(nmom, nq);
  t.w_left.resize(nmom, nq);
  t.w_top.resize(nmom, nq);
  t.w_bottom.resize(nmom, nq);
  t.w_bulk_x.resize(nmom, nq * nq);
  t.w_bulk_y.resize(nmom, nq * nq);
  for (int m = 0; m < nmom; ++m) {
    const auto [k, l] = element.moments()[m];
    const double a = moment_normalization(k, l);
    const auto pw = [](double x, int p) { return std::pow(x, p); };
    const auto dpw = [](double x, int p) { return p == 0 ? 0.0 : p * std::pow(x, p - 1); };
    for (int p = 0; p < nq; ++p) {
      t.w_right(m, p) = a * wts[p] * pw(0.5, k) * pw(pts[p], l);
      t.w_left(m, p) = a * wts[p] * pw(-0.5, k) * pw(pts[p], l);
      t.w_top(m, p) = a * wts[p] * pw(pts[p], k) * pw(0.5, l);
      t.w_bottom(m, p) = a * wts[p] * pw(pts[p], k) * pw(-0.5, l);
    }
    for (int qy = 0; qy < nq; ++qy) {
      for (int qx = 0; qx < nq; ++qx) {
        const double w = a * wts[qx] * wts[qy];
        t.w_bulk_x(m, qy * nq + qx) = w * dpw(pts[qx], k) * pw(pts[qy], l);
        t.w_bulk_y(m, qy * nq + qx) = w * pw(pts[qx], k) * dpw(pts[qy], l);
      }
    }
  }
  return t;
}

}  // namespace gaf
