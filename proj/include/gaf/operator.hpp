#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "gaf/element.hpp"
#include "gaf/errors.hpp"
#include "gaf/field.hpp"
#include "gaf/mesh.hpp"
#include "gaf/models.hpp"
#include "gaf/quadrature.hpp"

namespace gaf {

/// Gauss points per direction for the moment integrals:
/// ceil((N + m_max + 1) / 2), m_max = max over moments of max(k, l).
int default_moment_quadrature_points(const ElementDef& element);

/// Reference-cell tables shared by every cell: shape values / gradients at
/// all evaluation points, and moment test-function weights.
struct OperatorTables {
  QuadratureRule rule;
  int q = 0;  ///< points per direction

  /// rows x dof_count; each row is a linear functional of the cell's DOFs.
  Eigen::MatrixXd eval;
  int row_right = 0;     ///< values at (1/2, eta_q), q rows
  int row_top = 0;       ///< values at (xi_q, 1/2), q rows
  int row_bulk = 0;      ///< values at (xi_qx, eta_qy), q*q rows, index qy*q + qx
  int row_dx_own = 0;    ///< d/dx_ref at owned points (slot order), 1 + 2(N-1) rows
  int row_dy_own = 0;    ///< d/dy_ref at owned points
  int row_dx_left = 0;   ///< d/dx_ref at upper-left node and left edge points, N rows
  int row_dy_below = 0;  ///< d/dy_ref at lower-right node and bottom edge points, N rows

  /// moment_count x q, normalization and quadrature weight folded in.
  Eigen::MatrixXd w_right, w_left, w_top, w_bottom;
  /// moment_count x q*q, derivative of the test function folded in.
  Eigen::MatrixXd w_bulk_x, w_bulk_y;

  std::vector<DofSource> gather;

  static OperatorTables build(const ElementDef& element, int quad_points = 0);
};

/// Right-hand side of the semi-discrete scheme: upwind point value updates with
/// Jacobian splitting, weak-form moment updates with Gauss quadrature.
///
/// `apply` reuses internal scratch buffers, so a single instance must not be
/// applied from several threads at once; copies are independent.
template <class Model>
class SemiDiscreteOperator {
 public:
  static constexpr int S = Model::kComponents;
  using State = typename Model::State;

  SemiDiscreteOperator(const GridSpec& grid, const ElementDef& element, Model model,
                       int quad_points = 0)
      : grid_(grid),
        element_(element),
        model_(model),
        tables_(OperatorTables::build(element, quad_points)) {
    const int n = grid.cell_count();
    right_.resize(n);
    left_.resize(n);
    up_.resize(n);
    down_.resize(n);
    for (int c = 0; c < n; ++c) {
      const CellIndex ci = grid.cell_at(c);
      right_[c] = grid.linear_index(grid.neighbor(ci, 1, 0));
      left_[c] = grid.linear_index(grid.neighbor(ci, -1, 0));
      up_[c] = grid.linear_index(grid.neighbor(ci, 0, 1));
      down_[c] = grid.linear_index(grid.neighbor(ci, 0, -1));
    }
  }

  const GridSpec& grid() const noexcept { return grid_; }
  const ElementDef& element() const noexcept { return element_; }
  const Model& model() const noexcept { return model_; }
  const OperatorTables& tables() const noexcept { return tables_; }
  int quadrature_points() const noexcept { return tables_.q; }

  FieldState make_field() const { return FieldState(grid_, element_, S); }

  /// d/dt of every owned DOF; `q` and `dq` use the FieldState layout.
  void apply(const Eigen::VectorXd& q, Eigen::VectorXd& dq) const;

  void apply(const FieldState& in, FieldState& out) const { apply(in.values(), out.values()); }

  FieldState operator()(const FieldState& in) const {
    FieldState out = make_field();
    apply(in.values(), out.values());
    return out;
  }

  /// Point value update of one owned point (slot < 1 + 2(N-1)), evaluated
  /// directly from the neighbouring reconstructions.
  State point_rhs(const FieldState& field, CellIndex cell, int slot) const;

  /// Moment update of moment index m of `cell`, evaluated from the cell's own
  /// reconstruction on all four edges.
  State moment_rhs(const FieldState& field, CellIndex cell, int m) const;

 private:
  State column_state(const Eigen::MatrixXd& m, Eigen::Index row, int cell) const {
    State s;
    for (int k = 0; k < S; ++k) s[k] = m(row, static_cast<Eigen::Index>(cell) * S + k);
    return s;
  }

  State point_update(const State& q, const State& dxp, const State& dxm, const State& dyp,
                     const State& dym) const {
    const auto ex = model_.eigensystem(q, Direction::X);
    const auto ey = model_.eigensystem(q, Direction::Y);
    const State cx = ex.values.cwiseMax(0.0).cwiseProduct(ex.left * dxp) +
                     ex.values.cwiseMin(0.0).cwiseProduct(ex.left * dxm);
    const State cy = ey.values.cwiseMax(0.0).cwiseProduct(ey.left * dyp) +
                     ey.values.cwiseMin(0.0).cwiseProduct(ey.left * dym);
    return -(ex.right * cx + ey.right * cy);
  }

  void check(const State& s, int cell) const {
    try {
      model_.check_admissible(s);
    } catch (const InadmissibleState& e) {
      const CellIndex ci = grid_.cell_at(cell);
      throw InadmissibleState(e.what(), ci.i, ci.j);
    }
  }

  GridSpec grid_;
  ElementDef element_;
  Model model_;
  OperatorTables tables_;
  std::vector<int> right_, left_, up_, down_;

  mutable Eigen::MatrixXd dofs_;
  mutable Eigen::MatrixXd values_;
  mutable Eigen::MatrixXd fx_right_, fy_top_, fx_bulk_, fy_bulk_;
  mutable Eigen::MatrixXd mom_, mom_left_, mom_bottom_;
};

template <class Model>
void SemiDiscreteOperator<Model>::apply(const Eigen::VectorXd& q, Eigen::VectorXd& dq) const {
  const int ncell = grid_.cell_count();
  const int ndof = element_.dof_count();
  const int owned = element_.owned_count();
  const int np = element_.edge_point_count();
  const int nmom = element_.moment_count();
  const int nq = tables_.q;
  const Eigen::Index cols = static_cast<Eigen::Index>(ncell) * S;
  const double inv_dx = 1.0 / grid_.dx();
  const double inv_dy = 1.0 / grid_.dy();
  const auto& t = tables_;

  if (q.size() != cols * owned) throw std::invalid_argument("SemiDiscreteOperator: size mismatch");
  dq.resize(q.size());

  // Gather accessible DOFs of every cell: dof_count x (cells * S).
  dofs_.resize(ndof, cols);
  for (int c = 0; c < ncell; ++c) {
    const CellIndex ci = grid_.cell_at(c);
    for (int r = 0; r < ndof; ++r) {
      const auto& src = t.gather[r];
      const CellIndex owner = grid_.neighbor(ci, src.di, src.dj);
      const Eigen::Index off =
          (static_cast<Eigen::Index>(grid_.linear_index(owner)) * owned + src.slot) * S;
      for (int k = 0; k < S; ++k) dofs_(r, static_cast<Eigen::Index>(c) * S + k) = q[off + k];
    }
  }

  // Every reconstruction value and derivative needed, for all cells at once.
  values_.noalias() = t.eval * dofs_;

  // Fluxes at quadrature points.
  fx_right_.resize(nq, cols);
  fy_top_.resize(nq, cols);
  fx_bulk_.resize(static_cast<Eigen::Index>(nq) * nq, cols);
  fy_bulk_.resize(static_cast<Eigen::Index>(nq) * nq, cols);
  for (int c = 0; c < ncell; ++c) {
    const Eigen::Index c0 = static_cast<Eigen::Index>(c) * S;
    for (int p = 0; p < nq; ++p) {
      const State sr = column_state(values_, t.row_right + p, c);
      const State st = column_state(values_, t.row_top + p, c);
      check(sr, c);
      check(st, c);
      fx_right_.block<1, S>(p, c0) = model_.flux(sr, Direction::X).transpose();
      fy_top_.block<1, S>(p, c0) = model_.flux(st, Direction::Y).transpose();
    }
    for (int p = 0; p < nq * nq; ++p) {
      const State sb = column_state(values_, t.row_bulk + p, c);
      check(sb, c);
      fx_bulk_.block<1, S>(p, c0) = model_.flux(sb, Direction::X).transpose();
      fy_bulk_.block<1, S>(p, c0) = model_.flux(sb, Direction::Y).transpose();
    }
  }

  // Moment updates. Edge fluxes are evaluated once by the owning cell
  // (right and top edges) and reused by the neighbour across the edge.
  mom_.noalias() = inv_dx * (t.w_bulk_x * fx_bulk_);
  mom_.noalias() += inv_dy * (t.w_bulk_y * fy_bulk_);
  mom_.noalias() -= inv_dx * (t.w_right * fx_right_);
  mom_.noalias() -= inv_dy * (t.w_top * fy_top_);
  mom_left_.noalias() = inv_dx * (t.w_left * fx_right_);
  mom_bottom_.noalias() = inv_dy * (t.w_bottom * fy_top_);

  for (int c = 0; c < ncell; ++c) {
    const Eigen::Index c0 = static_cast<Eigen::Index>(c) * S;
    const Eigen::Index cl = static_cast<Eigen::Index>(left_[c]) * S;
    const Eigen::Index cb = static_cast<Eigen::Index>(down_[c]) * S;
    const Eigen::Index base = static_cast<Eigen::Index>(c) * owned * S;
    for (int m = 0; m < nmom; ++m) {
      const Eigen::Index off = base + static_cast<Eigen::Index>(1 + 2 * np + m) * S;
      for (int k = 0; k < S; ++k)
        dq[off + k] = mom_(m, c0 + k) + mom_left_(m, cl + k) + mom_bottom_(m, cb + k);
    }
  }

  // Point value updates.
  for (int c = 0; c < ncell; ++c) {
    const int cr = right_[c];
    const int cu = up_[c];
    const Eigen::Index base = static_cast<Eigen::Index>(c) * owned * S;
    auto own_state = [&](int slot) {
      return State(Eigen::Map<const State>(q.data() + base + static_cast<Eigen::Index>(slot) * S));
    };
    auto write = [&](int slot, const State& v) {
      Eigen::Map<State>(dq.data() + base + static_cast<Eigen::Index>(slot) * S) = v;
    };

    {  // upper-right node
      const State qn = own_state(0);
      check(qn, c);
      const State dxp = inv_dx * column_state(values_, t.row_dx_own, c);
      const State dxm = inv_dx * column_state(values_, t.row_dx_left, cr);
      const State dyp = inv_dy * column_state(values_, t.row_dy_own, c);
      const State dym = inv_dy * column_state(values_, t.row_dy_below, cu);
      write(0, point_update(qn, dxp, dxm, dyp, dym));
    }
    for (int a = 0; a < np; ++a) {  // right edge: upwind in x, tangential in y
      const int slot = 1 + a;
      const State qp = own_state(slot);
      check(qp, c);
      const State dxp = inv_dx * column_state(values_, t.row_dx_own + slot, c);
      const State dxm = inv_dx * column_state(values_, t.row_dx_left + 1 + a, cr);
      const State dy = inv_dy * column_state(values_, t.row_dy_own + slot, c);
      write(slot, point_update(qp, dxp, dxm, dy, dy));
    }
    for (int a = 0; a < np; ++a) {  // top edge: tangential in x, upwind in y
      const int slot = 1 + np + a;
      const State qp = own_state(slot);
      check(qp, c);
      const State dx = inv_dx * column_state(values_, t.row_dx_own + slot, c);
      const State dyp = inv_dy * column_state(values_, t.row_dy_own + slot, c);
      const State dym = inv_dy * column_state(values_, t.row_dy_below + 1 + a, cu);
      write(slot, point_update(qp, dx, dx, dyp, dym));
    }
  }
}

template <class Model>
typename SemiDiscreteOperator<Model>::State SemiDiscreteOperator<Model>::point_rhs(
    const FieldState& field, CellIndex cell, int slot) const {
  const int np = element_.edge_point_count();
  if (slot < 0 || slot >= 1 + 2 * np)
    throw std::invalid_argument("point_rhs: slot is not an owned point");
  const State q = field.slot(cell, slot);
  const CellIndex right = grid_.neighbor(cell, 1, 0);
  const CellIndex up = grid_.neighbor(cell, 0, 1);
  auto grad = [&](CellIndex c, Point2 x) { return reconstruct_grad(field, element_, grid_, c, x); };

  State dxp, dxm, dyp, dym;
  if (slot == 0) {
    dxp = grad(cell, {0.5, 0.5}).dx;
    dxm = grad(right, {-0.5, 0.5}).dx;
    dyp = grad(cell, {0.5, 0.5}).dy;
    dym = grad(up, {0.5, -0.5}).dy;
  } else if (slot <= np) {
    const double xi = element_.edge_nodes()[slot - 1];
    const auto own = grad(cell, {0.5, xi});
    dxp = own.dx;
    dxm = grad(right, {-0.5, xi}).dx;
    dyp = dym = own.dy;
  } else {
    const double xi = element_.edge_nodes()[slot - 1 - np];
    const auto own = grad(cell, {xi, 0.5});
    dxp = dxm = own.dx;
    dyp = own.dy;
    dym = grad(up, {xi, -0.5}).dy;
  }
  const auto sx = split_jacobian(model_, q, Direction::X);
  const auto sy = split_jacobian(model_, q, Direction::Y);
  return -(sx.plus * dxp + sx.minus * dxm + sy.plus * dyp + sy.minus * dym);
}

template <class Model>
typename SemiDiscreteOperator<Model>::State SemiDiscreteOperator<Model>::moment_rhs(
    const FieldState& field, CellIndex cell, int m) const {
  const auto [k, l] = element_.moments().at(m);
  const double a_ref = moment_normalization(k, l);
  const auto& rule = tables_.rule;
  const Eigen::MatrixXd d = gather_cell_dofs(field, element_, grid_, cell);
  auto value = [&](Point2 x) -> State { return d.transpose() * element_.eval_shapes(x); };
  auto b = [](int p, double x) { return std::pow(x, p); };
  auto db = [](int p, double x) { return p == 0 ? 0.0 : p * std::pow(x, p - 1); };

  State boundary_x = State::Zero();
  State boundary_y = State::Zero();
  State bulk_x = State::Zero();
  State bulk_y = State::Zero();
  for (int i = 0; i < rule.size(); ++i) {
    const double s = rule.points[i];
    const double w = rule.weights[i];
    boundary_x += w * b(l, s) *
                  (b(k, 0.5) * model_.flux(value({0.5, s}), Direction::X) -
                   b(k, -0.5) * model_.flux(value({-0.5, s}), Direction::X));
    boundary_y += w * b(k, s) *
                  (b(l, 0.5) * model_.flux(value({s, 0.5}), Direction::Y) -
                   b(l, -0.5) * model_.flux(value({s, -0.5}), Direction::Y));
    for (int j = 0; j < rule.size(); ++j) {
      const double yy = rule.points[j];
      const double ww = w * rule.weights[j];
      const State qv = value({s, yy});
      bulk_x += ww * db(k, s) * b(l, yy) * model_.flux(qv, Direction::X);
      bulk_y += ww * b(k, s) * db(l, yy) * model_.flux(qv, Direction::Y);
    }
  }
  return -a_ref * ((boundary_x - bulk_x) / grid_.dx() + (boundary_y - bulk_y) / grid_.dy());
}

}  // namespace gaf
