#pragma once

#include <Eigen/Dense>

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gaf/mesh.hpp"

namespace gaf {

/// Choice of interior moments (and with it of the reconstruction space).
///   Triangle: k + l <= max(0, N - 4), reconstruction S^N (plus x^2 y^2 for N = 2, 3).
///   Tensor:   0 <= k, l <= N - 2,     reconstruction P^{N,N}.
enum class MomentSet { Triangle, Tensor };

/// Placement of the N - 1 interior points on each cell edge.
enum class EdgeNodeKind { Gauss, GaussLobatto, Uniform };

/// Cell edges, counterclockwise starting at the bottom.
enum class Edge { Bottom = 0, Right = 1, Top = 2, Left = 3 };

struct Monomial {
  int px = 0;  ///< exponent of x
  int py = 0;  ///< exponent of y
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

struct NodeDof {
  int n;  ///< 0 lower-left, 1 lower-right, 2 upper-right, 3 upper-left
};
struct EdgeDof {
  Edge edge;
  int a;  ///< index into the ascending edge-node list
};
struct MomentDof {
  int k;
  int l;
};
using DofKind = std::variant<NodeDof, EdgeDof, MomentDof>;

/// One degree of freedom accessible to a cell. Point DOFs carry their
/// location on the boundary of the reference cell.
struct DofDescriptor {
  DofKind kind;
  Point2 location;  ///< meaningful for point DOFs only

  bool is_point() const noexcept { return !std::holds_alternative<MomentDof>(kind); }
};

std::string to_string(MomentSet m);
std::string to_string(EdgeNodeKind e);
MomentSet parse_moment_set(const std::string& s);
EdgeNodeKind parse_edge_node_kind(const std::string& s);

/// Gauss-Legendre abscissae on (-1/2, 1/2), ascending.
std::vector<double> gauss_edge_nodes(int count);

/// Uniform or interior Gauss-Lobatto nodes for `count` = N - 1 edge points.
std::vector<double> alt_edge_nodes(int count, EdgeNodeKind kind);

/// Edge nodes of the requested kind (Gauss dispatches to gauss_edge_nodes).
std::vector<double> edge_nodes(int count, EdgeNodeKind kind);

/// Moment index set I_M, ordered by total degree and then by descending k.
std::vector<Monomial> moment_indices(int degree, MomentSet set);

/// Monomial basis of the reconstruction space, same graded ordering.
std::vector<Monomial> build_basis(int degree, MomentSet set);

/// sigma_{k,l}(x^m y^n) on the reference cell with normalization (k+1)2^k (l+1)2^l.
double moment_functional(int k, int l, int m, int n);

/// Normalization factor (k+1) 2^k (l+1) 2^l of the reference moment.
double moment_normalization(int k, int l);

/// Accessible DOFs of a cell: nodes 0..3, edges E0..E3 (ascending a), moments.
std::vector<DofDescriptor> dof_layout(std::span<const double> edge_nodes,
                                      std::span<const Monomial> moments);

/// V[r][s] = sigma_r(monomial_s).
Eigen::MatrixXd assemble_vandermonde(std::span<const DofDescriptor> layout,
                                     std::span<const Monomial> basis);

/// Condition-number threshold above which the Vandermonde is treated as singular.
inline constexpr double kUnisolvenceConditionLimit = 1e12;

struct ShapeSolve {
  Eigen::MatrixXd coefficients;  ///< column r: monomial coefficients of B_r
  double condition = 0.0;        ///< 2-norm condition number of V
};

/// Solves V C = I. Throws UnisolvenceFailure if V is singular to working precision.
ShapeSolve solve_shape_coefficients(const Eigen::MatrixXd& vandermonde);

/// Values of all monomials of `basis` at `x`.
Eigen::VectorXd eval_monomials(std::span<const Monomial> basis, Point2 x);

/// The hybrid finite element of order N + 1: point values on the boundary of
/// [-1/2,1/2]^2 plus interior moments, with shape functions dual to the DOFs.
/// Immutable after construction.
class ElementDef {
 public:
  static ElementDef build(int degree, MomentSet moments = MomentSet::Triangle,
                          EdgeNodeKind edges = EdgeNodeKind::Gauss);

  /// Assemble an element from explicit ingredients (used for negative
  /// unisolvence checks with hand-picked bases).
  static ElementDef from_parts(int degree, std::vector<double> edge_nodes,
                               std::vector<Monomial> basis, std::vector<Monomial> moments);

  int degree() const noexcept { return degree_; }
  int order() const noexcept { return degree_ + 1; }
  MomentSet moment_set() const noexcept { return moment_set_; }
  EdgeNodeKind edge_node_kind() const noexcept { return edge_kind_; }
  const std::vector<double>& edge_nodes() const noexcept { return edge_nodes_; }
  const std::vector<Monomial>& basis() const noexcept { return basis_; }
  const std::vector<Monomial>& moments() const noexcept { return moments_; }
  const std::vector<DofDescriptor>& dofs() const noexcept { return dofs_; }
  const Eigen::MatrixXd& vandermonde() const noexcept { return vandermonde_; }
  const Eigen::MatrixXd& shape_coeffs() const noexcept { return coeffs_; }
  double condition_number() const noexcept { return condition_; }

  int dof_count() const noexcept { return static_cast<int>(dofs_.size()); }
  int edge_point_count() const noexcept { return degree_ - 1; }
  int moment_count() const noexcept { return static_cast<int>(moments_.size()); }
  /// DOFs stored per cell: upper-right node, right and top edge points, moments.
  int owned_count() const noexcept { return 1 + 2 * edge_point_count() + moment_count(); }

  int node_dof(int n) const noexcept { return n; }
  int edge_dof(Edge e, int a) const noexcept {
    return 4 + static_cast<int>(e) * edge_point_count() + a;
  }
  int moment_dof(int m) const noexcept { return 4 + 4 * edge_point_count() + m; }

  /// B_r(x) for all r.
  Eigen::VectorXd eval_shapes(Point2 x) const;

  /// dB_r/dx_ref and dB_r/dy_ref for all r.
  struct Gradients {
    Eigen::VectorXd dx;
    Eigen::VectorXd dy;
  };
  Gradients eval_shape_grads(Point2 x) const;

  /// max_{r,s} |sigma_r(B_s) - delta_rs|.
  double duality_residual() const;

 private:
  ElementDef() = default;
  void finalize();

  int degree_ = 0;
  MomentSet moment_set_ = MomentSet::Triangle;
  EdgeNodeKind edge_kind_ = EdgeNodeKind::Gauss;
  std::vector<double> edge_nodes_;
  std::vector<Monomial> basis_;
  std::vector<Monomial> moments_;
  std::vector<DofDescriptor> dofs_;
  Eigen::MatrixXd vandermonde_;
  Eigen::MatrixXd coeffs_;
  double condition_ = 0.0;
};

}  // namespace gaf
