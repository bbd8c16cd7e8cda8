#pragma once

#include <Eigen/Dense>

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "gaf/element.hpp"
#include "gaf/mesh.hpp"

namespace gaf {

/// Initial or exact data: physical point -> state vector.
using StateFunction = std::function<Eigen::VectorXd(Point2)>;

/// Global DOF storage. Each cell owns its upper-right node, the points on its
/// right and top edges, and all of its moments; everything else it sees is
/// owned by a periodic neighbour. Per cell the owned slots are
///   0                         upper-right node
///   1 .. N-1                  right edge points (ascending)
///   N .. 2N-2                 top edge points (ascending)
///   2N-1 .. 2N-2+|I_M|        moments in element order ((0,0) first)
/// and every slot holds `components` contiguous values.
class FieldState {
 public:
  FieldState(const GridSpec& grid, const ElementDef& element, int components);

  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  int components() const noexcept { return components_; }
  int owned_per_cell() const noexcept { return owned_; }
  int edge_points() const noexcept { return edge_points_; }
  int moment_count() const noexcept { return moments_; }
  Eigen::Index size() const noexcept { return values_.size(); }

  Eigen::VectorXd& values() noexcept { return values_; }
  const Eigen::VectorXd& values() const noexcept { return values_; }

  static constexpr int node_slot() noexcept { return 0; }
  int right_edge_slot(int a) const noexcept { return 1 + a; }
  int top_edge_slot(int a) const noexcept { return 1 + edge_points_ + a; }
  int moment_slot(int m) const noexcept { return 1 + 2 * edge_points_ + m; }

  Eigen::Index offset(CellIndex c, int slot) const noexcept {
    return (static_cast<Eigen::Index>(c.j * nx_ + c.i) * owned_ + slot) * components_;
  }
  Eigen::Map<Eigen::VectorXd> slot(CellIndex c, int s) {
    return {values_.data() + offset(c, s), components_};
  }
  Eigen::Map<const Eigen::VectorXd> slot(CellIndex c, int s) const {
    return {values_.data() + offset(c, s), components_};
  }

  Eigen::VectorXd cell_average(CellIndex c) const { return slot(c, moment_slot(0)); }

  /// Sum over cells of cell_average * area, per component.
  Eigen::VectorXd total_mass(const GridSpec& grid) const;

  /// Sum over cells of |cell_average| * area, per component.
  Eigen::VectorXd l1_norm(const GridSpec& grid) const;

  bool all_finite() const { return values_.allFinite(); }

 private:
  int nx_;
  int ny_;
  int components_;
  int edge_points_;
  int moments_;
  int owned_;
  Eigen::VectorXd values_;
};

/// Where an accessible DOF of a cell is stored: the owning cell's offset and slot.
struct DofSource {
  int di;
  int dj;
  int slot;
};

/// One entry per accessible DOF in element order.
std::vector<DofSource> gather_map(const ElementDef& element);

/// Accessible DOFs of `cell` as a (dof_count x components) matrix.
Eigen::MatrixXd gather_cell_dofs(const FieldState& field, const ElementDef& element,
                                 const GridSpec& grid, CellIndex cell);

/// Moments of `u` on `cell` by a tensor Gauss-Legendre rule with `points` per direction.
Eigen::MatrixXd cell_moments(const GridSpec& grid, const ElementDef& element, CellIndex cell,
                             const StateFunction& u, int components, int points);

/// Quadrature points per direction used for initialization and exact cell averages.
inline int initialization_points(const ElementDef& element) { return element.degree() + 3; }

/// Point values by evaluation, moments by quadrature.
FieldState project_initial(const GridSpec& grid, const ElementDef& element, const StateFunction& u,
                           int components);

Eigen::VectorXd reconstruct(const FieldState& field, const ElementDef& element,
                            const GridSpec& grid, CellIndex cell, Point2 x_ref);

struct PhysicalGradient {
  Eigen::VectorXd dx;
  Eigen::VectorXd dy;
};
PhysicalGradient reconstruct_grad(const FieldState& field, const ElementDef& element,
                                  const GridSpec& grid, CellIndex cell, Point2 x_ref);

/// CSV: i,j,x,y,<name_0>,...  one row per cell, cell averages.
void write_cell_averages_csv(std::ostream& os, const FieldState& field, const GridSpec& grid,
                             const std::vector<std::string>& component_names);

/// CSV: i,j,slot,kind,index,component,value for every owned DOF.
void write_full_dofs_csv(std::ostream& os, const FieldState& field, const ElementDef& element,
                         const GridSpec& grid);

}  // namespace gaf
