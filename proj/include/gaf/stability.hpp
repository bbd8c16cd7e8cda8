#pragma once

#include <Eigen/Dense>

#include <complex>
#include <iosfwd>
#include <span>
#include <vector>

#include "gaf/element.hpp"
#include "gaf/mesh.hpp"

namespace gaf {

/// Dense matrix A of d/dt q = A q for scalar advection with velocity (a_x, a_y).
struct OperatorMatrix {
  Eigen::MatrixXd matrix;
  int order = 0;
  int nx = 0;
  int ny = 0;
  double ax = 0.0;
  double ay = 0.0;
  MomentSet moments = MomentSet::Triangle;
  EdgeNodeKind edges = EdgeNodeKind::Gauss;
};

/// Column j is the right-hand side applied to the j-th unit DOF vector.
OperatorMatrix assemble_operator(const ElementDef& element, const GridSpec& grid, double ax,
                                 double ay);

/// Velocity (cos theta, sin theta).
OperatorMatrix assemble_operator(const ElementDef& element, const GridSpec& grid, double theta);

/// Eigenvalues only (LAPACK dgeev). Throws EigensolverFailure on non-convergence.
std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXd& a);

struct SpectrumReport {
  std::vector<std::complex<double>> eigenvalues;
  double max_real = 0.0;
  double tolerance = 0.0;      ///< eps for the real-part and near-imaginary tests
  double matrix_norm = 0.0;    ///< infinity norm of A
  bool stable = false;         ///< max_real <= tolerance and semisimple
  bool semisimple = true;      ///< every near-imaginary cluster has a full eigenvector set
  int diagonalizable_rank = 0; ///< numerical rank of the full eigenvector matrix
  bool diagonalizable = false;
  bool vectors_checked = false;
};

/// Full dense eigen-analysis. When `check_vectors` is false only the
/// eigenvalues are computed and the semisimplicity fields are left unset.
SpectrumReport spectrum(const Eigen::MatrixXd& a, double tolerance, bool check_vectors = true);

/// Stability tolerance used by the spectral study for the given spatial order.
double spectral_tolerance(int order);

/// Largest dt on the lattice {k * increment} such that every step up to it
/// keeps max |G(lambda dt)| <= 1 + slack.
double max_stable_dt(std::span<const std::complex<double>> eigenvalues, double increment,
                     double slack = 1e-12, double dt_limit = 10.0);

/// Time-step lattice increment for the given spatial order.
double dt_scan_increment(int order);

/// max |G(lambda * dt)| over all eigenvalues.
double max_amplification(std::span<const std::complex<double>> eigenvalues, double dt);

struct CflMapEntry {
  double cfl_x;
  double cfl_y;
  bool stable;
};

/// Stability of SSP-RK3 + scheme on a lattice of (cfl_x, cfl_y) pairs, with
/// cfl_x = a_x dt / dx and cfl_y = a_y dt / dy. The spectrum of A scales
/// linearly with |a|, so eigenvalues are computed once per direction and
/// shared by all lattice points on the same ray.
std::vector<CflMapEntry> cfl_region_scan(const ElementDef& element, const GridSpec& grid,
                                         std::span<const double> cfl_x,
                                         std::span<const double> cfl_y, double slack = 1e-12);

/// Radius of the stable region along the direction theta in the (cfl_x, cfl_y)
/// plane (dx = dy assumed), found on the lattice `increment`.
double cfl_radius(const ElementDef& element, const GridSpec& grid, double theta,
                  double increment);

void write_eigenvalues_csv(std::ostream& os, std::span<const std::complex<double>> eigenvalues);
void write_cfl_map_csv(std::ostream& os, std::span<const CflMapEntry> map);

}  // namespace gaf
