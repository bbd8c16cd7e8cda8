#include "gaf/field.hpp"

#include <iomanip>
#include <ostream>
#include <stdexcept>

#include "gaf/quadrature.hpp"

namespace gaf {

FieldState::FieldState(const GridSpec& grid, const ElementDef& element, int components)
    : nx_(grid.nx()),
      ny_(grid.ny()),
      components_(components),
      edge_points_(element.edge_point_count()),
      moments_(element.moment_count()),
      owned_(element.owned_count()),
      values_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid.cell_count()) *
                                    element.owned_count() * components)) {
  if (components <= 0) throw std::invalid_argument("FieldState: components must be positive");
}

Eigen::VectorXd FieldState::total_mass(const GridSpec& grid) const {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(components_);
  for (int j = 0; j < ny_; ++j)
    for (int i = 0; i < nx_; ++i) m += slot({i, j}, moment_slot(0));
  return m * grid.cell_area();
}

Eigen::VectorXd FieldState::l1_norm(const GridSpec& grid) const {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(components_);
  for (int j = 0; j < ny_; ++j)
    for (int i = 0; i < nx_; ++i) m += slot({i, j}, moment_slot(0)).cwiseAbs();
  return m * grid.cell_area();
}

std::vector<DofSource> gather_map(const ElementDef& element) {
  const int np = element.edge_point_count();
  std::vector<DofSource> map;
  map.reserve(element.dof_count());
  // Nodes: LL, LR, UR, UL. Each is the upper-right node of some cell.
  map.push_back({-1, -1, 0});
  map.push_back({0, -1, 0});
  map.push_back({0, 0, 0});
  map.push_back({-1, 0, 0});
  const int right0 = 1;
  const int top0 = 1 + np;
  for (int a = 0; a < np; ++a) map.push_back({0, -1, top0 + a});   // bottom
  for (int a = 0; a < np; ++a) map.push_back({0, 0, right0 + a});  // right
  for (int a = 0; a < np; ++a) map.push_back({0, 0, top0 + a});    // top
  for (int a = 0; a < np; ++a) map.push_back({-1, 0, right0 + a}); // left
  for (int m = 0; m < element.moment_count(); ++m) map.push_back({0, 0, 1 + 2 * np + m});
  return map;
}

Eigen::MatrixXd gather_cell_dofs(const FieldState& field, const ElementDef& element,
                                 const GridSpec& grid, CellIndex cell) {
  const auto map = gather_map(element);
  Eigen::MatrixXd d(element.dof_count(), field.components());
  for (int r = 0; r < element.dof_count(); ++r) {
    const auto& src = map[r];
    d.row(r) = field.slot(grid.neighbor(cell, src.di, src.dj), src.slot).transpose();
  }
  return d;
}

Eigen::MatrixXd cell_moments(const GridSpec& grid, const ElementDef& element, CellIndex cell,
                             const StateFunction& u, int components, int points) {
  const auto rule = gauss_legendre(points);
  const auto& moments = element.moments();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(moments.size()), components);
  for (int qy = 0; qy < rule.size(); ++qy) {
    for (int qx = 0; qx < rule.size(); ++qx) {
      const Point2 ref{rule.points[qx], rule.points[qy]};
      const Eigen::VectorXd val = u(grid.from_reference(cell, ref));
      const double w = rule.weights[qx] * rule.weights[qy];
      for (std::size_t m = 0; m < moments.size(); ++m) {
        const auto [k, l] = moments[m];
        const double b = std::pow(ref.x, k) * std::pow(ref.y, l);
        out.row(static_cast<Eigen::Index>(m)) +=
            (moment_normalization(k, l) * w * b) * val.transpose();
      }
    }
  }
  return out;
}

FieldState project_initial(const GridSpec& grid, const ElementDef& element, const StateFunction& u,
                           int components) {
  FieldState f(grid, element, components);
  const int np = element.edge_point_count();
  const auto& nodes = element.edge_nodes();
  const int qn = initialization_points(element);
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      const CellIndex c{i, j};
      f.slot(c, FieldState::node_slot()) = u(grid.from_reference(c, {0.5, 0.5}));
      for (int a = 0; a < np; ++a) {
        f.slot(c, f.right_edge_slot(a)) = u(grid.from_reference(c, {0.5, nodes[a]}));
        f.slot(c, f.top_edge_slot(a)) = u(grid.from_reference(c, {nodes[a], 0.5}));
      }
      const Eigen::MatrixXd mom = cell_moments(grid, element, c, u, components, qn);
      for (int m = 0; m < element.moment_count(); ++m)
        f.slot(c, f.moment_slot(m)) = mom.row(m).transpose();
    }
  }
  return f;
}

Eigen::VectorXd reconstruct(const FieldState& field, const ElementDef& element,
                            const GridSpec& grid, CellIndex cell, Point2 x_ref) {
  const Eigen::MatrixXd d = gather_cell_dofs(field, element, grid, cell);
  return d.transpose() * element.eval_shapes(x_ref);
}

PhysicalGradient reconstruct_grad(const FieldState& field, const ElementDef& element,
                                  const GridSpec& grid, CellIndex cell, Point2 x_ref) {
  const Eigen::MatrixXd d = gather_cell_dofs(field, element, grid, cell);
  const auto g = element.eval_shape_grads(x_ref);
  return {d.transpose() * g.dx / grid.dx(), d.transpose() * g.dy / grid.dy()};
}

void write_cell_averages_csv(std::ostream& os, const FieldState& field, const GridSpec& grid,
                             const std::vector<std::string>& names) {
  os << "i,j,x,y";
  for (int k = 0; k < field.components(); ++k)
    os << ',' << (k < static_cast<int>(names.size()) ? names[k] : "q" + std::to_string(k));
  os << '\n' << std::setprecision(17);
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      const auto xc = grid.center({i, j});
      os << i << ',' << j << ',' << xc.x << ',' << xc.y;
      const auto avg = field.cell_average({i, j});
      for (int k = 0; k < field.components(); ++k) os << ',' << avg[k];
      os << '\n';
    }
  }
}

void write_full_dofs_csv(std::ostream& os, const FieldState& field, const ElementDef& element,
                         const GridSpec& grid) {
  os << "i,j,slot,kind,index,component,value\n" << std::setprecision(17);
  const int np = element.edge_point_count();
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      for (int s = 0; s < field.owned_per_cell(); ++s) {
        std::string kind;
        std::string index;
        if (s == 0) {
          kind = "node";
          index = "2";
        } else if (s <= np) {
          kind = "right_edge";
          index = std::to_string(s - 1);
        } else if (s <= 2 * np) {
          kind = "top_edge";
          index = std::to_string(s - 1 - np);
        } else {
          const auto& mo = element.moments()[s - 1 - 2 * np];
          kind = "moment";
          index = std::to_string(mo.px) + ":" + std::to_string(mo.py);
        }
        const auto v = field.slot({i, j}, s);
        for (int k = 0; k < field.components(); ++k)
          os << i << ',' << j << ',' << s << ',' << kind << ',' << index << ',' << k << ','
             << v[k] << '\n';
      }
    }
  }
}

}  // namespace gaf
