#pragma once

#include <Eigen/Dense>

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gaf/element.hpp"
#include "gaf/field.hpp"
#include "gaf/mesh.hpp"
#include "gaf/models.hpp"
#include "gaf/timestepper.hpp"

namespace gaf {

/// Exact solution q(x, t).
using ExactFunction = std::function<Eigen::VectorXd(Point2, double)>;

/// A benchmark: model, data, domain and default run parameters.
struct ProblemDef {
  std::string name;
  AnyModel model;
  StateFunction initial;
  ExactFunction exact;  ///< empty when no closed form is known
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;
  double t_end = 0.0;
  int default_cells = 32;
  std::vector<std::string> component_names;

  GridSpec grid(int nx, int ny) const { return GridSpec(nx, ny, x_min, x_max, y_min, y_max); }
  bool has_exact() const { return static_cast<bool>(exact); }
};

/// "cone", "gaussian", "acoustics" or "gresho". Throws std::invalid_argument otherwise.
ProblemDef make_problem(const std::string& name);
std::vector<std::string> problem_names();

/// Maximal diagonal-advection Courant numbers of the triangle-moment scheme, orders 3..7.
double table_cfl(int order);
/// Courant numbers used for the benchmark runs (0.085 instead of 0.088 at order 7).
double experiment_cfl(int order);

/// Azimuthal speed of the Gresho vortex at radius r.
double gresho_speed(double r);
/// Conserved state (rho, rho u, rho v, E) of the Gresho vortex centred at (0.5, 0.5).
Euler::State gresho_init(double x, double y, double mach = 0.1, double gamma = 1.4);

/// Per component: sum over cells of |average - exact average| * dx * dy. The
/// exact averages use the same Gauss rule as the initial projection.
Eigen::VectorXd l1_error_cell_averages(const FieldState& field, const ExactFunction& exact,
                                       double t, const GridSpec& grid, const ElementDef& element);

/// Outcome of one benchmark run.
struct RunOutput {
  IntegrationResult result;
  Eigen::VectorXd initial_mass;
  Eigen::VectorXd final_mass;
  double mass_drift = 0.0;              ///< max relative total-mass change over components
  std::optional<Eigen::VectorXd> l1_error;  ///< against the exact solution at t_end
};

/// Projects the initial data, integrates to control.t_end and evaluates errors.
RunOutput run_problem(const ProblemDef& problem, const ElementDef& element, const GridSpec& grid,
                      const StepControl& control, const std::vector<Observer>& observers = {});

/// |M_end - M_0| / scale per component, where scale is max(|M_0|, initial L1
/// norm), falling back to the largest scale over all components when a
/// component starts identically zero.
double relative_mass_drift(const Eigen::VectorXd& initial_mass, const Eigen::VectorXd& final_mass,
                           const Eigen::VectorXd& initial_l1);

struct ConvergenceRow {
  int cells = 0;
  double h = 0.0;
  double cfl = 0.0;
  double error = 0.0;
  std::optional<double> eoc;
  int steps = 0;
  double wall_seconds = 0.0;
  double mass_drift = 0.0;
};

double eoc(double error_prev, double error, double h_prev, double h);

/// Gaussian advection to t = 0.1 on n x n grids with the adaptive Courant
/// number anchored at h = 1/32.
std::vector<ConvergenceRow> run_convergence(int order, MomentSet moments, EdgeNodeKind edges,
                                            const std::vector<int>& cells, double base_cfl);

/// CSV: cells,h,cfl,e_L1,EOC,steps,wall_s,mass_drift (EOC blank on the first row).
void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows);

struct RadialProfile {
  struct Bin {
    double r_lo;
    double r_hi;
    double mean;
    int count;
  };
  std::vector<Bin> bins;
  std::vector<std::pair<double, double>> scatter;  ///< (r, value) per cell
  double peak = 0.0;                              ///< max over the scatter
  double peak_radius = 0.0;
};

/// Bins `value(cell average)` by cell-centre distance to `centre` on [0, r_max].
RadialProfile radial_profile(const FieldState& field, const GridSpec& grid, int n_bins,
                             const std::function<double(const Eigen::VectorXd&)>& value,
                             Point2 centre = {0.5, 0.5}, double r_max = 0.5);

/// ||(rho u, rho v)|| of an Euler cell average.
double momentum_norm(const Eigen::VectorXd& average);

/// CSV: kind,r_lo,r_hi,value,count  with kind "bin" or "cell".
void write_radial_profile_csv(std::ostream& os, const RadialProfile& profile);

}  // namespace gaf
