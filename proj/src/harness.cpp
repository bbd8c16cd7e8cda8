#include "gaf/harness.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "gaf/quadrature.hpp"

namespace gaf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_into(double x, double lo, double hi) {
  const double len = hi - lo;
  double r = std::fmod(x - lo, len);
  if (r < 0.0) r += len;
  return lo + r;
}

Eigen::VectorXd scalar(double v) { return Eigen::VectorXd::Constant(1, v); }

/// Exact solution of constant-velocity transport on the periodic box.
ExactFunction transported(std::function<double(Point2)> q0, LinearAdvection a, double x_min,
                          double x_max, double y_min, double y_max) {
  return [=](Point2 x, double t) {
    return scalar(q0({wrap_into(x.x - a.ax * t, x_min, x_max),
                      wrap_into(x.y - a.ay * t, y_min, y_max)}));
  };
}

ProblemDef cone() {
  ProblemDef p;
  p.name = "cone";
  const LinearAdvection a{1.0, 1.0};
  p.model = a;
  auto q0 = [](Point2 x) {
    constexpr double r_max = 0.2;
    const double r = std::hypot(x.x - 0.5, x.y - 0.5);
    return r < r_max ? 1.0 - r / r_max : 0.0;
  };
  p.initial = [q0](Point2 x) { return scalar(q0(x)); };
  p.exact = transported(q0, a, 0, 1, 0, 1);
  p.t_end = 5.0;
  p.default_cells = 101;
  p.component_names = {"q"};
  return p;
}

ProblemDef gaussian() {
  ProblemDef p;
  p.name = "gaussian";
  const LinearAdvection a{1.0, 1.0};
  p.model = a;
  auto q0 = [](Point2 x) {
    const double u = (x.x - 0.5) / 0.05;
    const double v = (x.y - 0.5) / 0.05;
    return 0.8 + std::exp(-u * u - v * v);
  };
  p.initial = [q0](Point2 x) { return scalar(q0(x)); };
  p.exact = transported(q0, a, 0, 1, 0, 1);
  p.t_end = 0.1;
  p.default_cells = 32;
  p.component_names = {"q"};
  return p;
}

ProblemDef acoustics() {
  ProblemDef p;
  p.name = "acoustics";
  const double c = 1.0;
  p.model = Acoustics{c};
  p.x_min = p.y_min = -1.0;
  p.x_max = p.y_max = 1.0;
  p.exact = [c](Point2 x, double t) {
    Eigen::VectorXd q(3);
    q[0] = std::cos(kTwoPi * c * t) * (std::sin(kTwoPi * x.x) + std::sin(kTwoPi * x.y)) / c;
    // The velocity lags the pressure by a quarter period with a minus sign;
    // the opposite sign does not satisfy p_t + c div v = 0.
    q[1] = -std::sin(kTwoPi * c * t) * std::cos(kTwoPi * x.x) / c;
    q[2] = -std::sin(kTwoPi * c * t) * std::cos(kTwoPi * x.y) / c;
    return q;
  };
  p.initial = [exact = p.exact](Point2 x) { return exact(x, 0.0); };
  p.t_end = 5.0;
  p.default_cells = 60;
  p.component_names = {"p", "vx", "vy"};
  return p;
}

ProblemDef gresho() {
  ProblemDef p;
  p.name = "gresho";
  p.model = Euler{1.4};
  p.initial = [](Point2 x) -> Eigen::VectorXd { return gresho_init(x.x, x.y); };
  p.exact = [](Point2 x, double) -> Eigen::VectorXd { return gresho_init(x.x, x.y); };
  p.t_end = 1.0;
  p.default_cells = 51;
  p.component_names = {"rho", "rho_u", "rho_v", "E"};
  return p;
}

}  // namespace

ProblemDef make_problem(const std::string& name) {
  if (name == "cone") return cone();
  if (name == "gaussian") return gaussian();
  if (name == "acoustics") return acoustics();
  if (name == "gresho") return gresho();
  throw std::invalid_argument("unknown problem '" + name + "'");
}

std::vector<std::string> problem_names() { return {"cone", "gaussian", "acoustics", "gresho"}; }

double table_cfl(int order) {
  switch (order) {
    case 3: return 0.27;
    case 4: return 0.20;
    case 5: return 0.17;
    case 6: return 0.12;
    case 7: return 0.088;
    default: throw std::invalid_argument("no tabulated Courant number for order " +
                                         std::to_string(order));
  }
}

double experiment_cfl(int order) { return order == 7 ? 0.085 : table_cfl(order); }

double gresho_speed(double r) {
  if (r < 0.2) return 5.0 * r;
  if (r < 0.4) return 2.0 - 5.0 * r;
  return 0.0;
}

Euler::State gresho_init(double x, double y, double mach, double gamma) {
  const double dx = x - 0.5;
  const double dy = y - 0.5;
  const double r = std::hypot(dx, dy);
  const double p0 = 1.0 / (gamma * mach * mach) - 0.5;
  double p = 0.0;
  if (r < 0.2)
    p = p0 + 0.5 * (5.0 * r) * (5.0 * r);
  else if (r < 0.4)
    p = p0 + 4.0 * std::log(5.0 * r) + 4.0 - 20.0 * r + 0.5 * (5.0 * r) * (5.0 * r);
  else
    p = p0 + 4.0 * std::log(2.0) - 2.0;
  // The azimuthal speed vanishes linearly at the centre, so speed / r stays bounded.
  const double scale = r > 0.0 ? gresho_speed(r) / r : 5.0;
  const Euler model{gamma};
  return model.to_conserved({1.0, -scale * dy, scale * dx, p});
}

Eigen::VectorXd l1_error_cell_averages(const FieldState& field, const ExactFunction& exact,
                                       double t, const GridSpec& grid, const ElementDef& element) {
  const auto rule = gauss_legendre(initialization_points(element));
  Eigen::VectorXd err = Eigen::VectorXd::Zero(field.components());
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      const CellIndex c{i, j};
      Eigen::VectorXd avg = Eigen::VectorXd::Zero(field.components());
      for (int qy = 0; qy < rule.size(); ++qy)
        for (int qx = 0; qx < rule.size(); ++qx)
          avg += rule.weights[qx] * rule.weights[qy] *
                 exact(grid.from_reference(c, {rule.points[qx], rule.points[qy]}), t);
      err += (field.cell_average(c) - avg).cwiseAbs();
    }
  }
  return err * grid.cell_area();
}

double relative_mass_drift(const Eigen::VectorXd& m0, const Eigen::VectorXd& m1,
                           const Eigen::VectorXd& l1) {
  Eigen::VectorXd scale = m0.cwiseAbs().cwiseMax(l1);
  const double fallback = scale.size() ? scale.maxCoeff() : 0.0;
  double drift = 0.0;
  for (Eigen::Index k = 0; k < m0.size(); ++k) {
    const double s = scale[k] > 0.0 ? scale[k] : fallback;
    const double d = std::abs(m1[k] - m0[k]);
    drift = std::max(drift, s > 0.0 ? d / s : d);
  }
  return drift;
}

RunOutput run_problem(const ProblemDef& problem, const ElementDef& element, const GridSpec& grid,
                      const StepControl& control, const std::vector<Observer>& observers) {
  const int s = component_count(problem.model);
  FieldState init = project_initial(grid, element, problem.initial, s);
  const Eigen::VectorXd l1 = init.l1_norm(grid);
  RunOutput out{std::visit(
                    [&](const auto& model) {
                      return integrate(std::move(init), element, grid, model, control, observers);
                    },
                    problem.model),
                {}, {}, 0.0, std::nullopt};
  out.initial_mass = out.result.log.front().mass;
  out.final_mass = out.result.field.total_mass(grid);
  out.mass_drift = relative_mass_drift(out.initial_mass, out.final_mass, l1);
  if (problem.has_exact())
    out.l1_error = l1_error_cell_averages(out.result.field, problem.exact, control.t_end, grid,
                                          element);
  return out;
}

double eoc(double error_prev, double error, double h_prev, double h) {
  return std::log(error_prev / error) / std::log(h_prev / h);
}

std::vector<ConvergenceRow> run_convergence(int order, MomentSet moments, EdgeNodeKind edges,
                                            const std::vector<int>& cells, double base_cfl) {
  const ProblemDef problem = make_problem("gaussian");
  const ElementDef element = ElementDef::build(order - 1, moments, edges);
  std::vector<ConvergenceRow> rows;
  for (const int n : cells) {
    const GridSpec grid = problem.grid(n, n);
    StepControl control;
    control.cfl = base_cfl;
    control.t_end = problem.t_end;
    control.policy = DtPolicy::AdaptiveConvergence;
    control.degree = element.degree();
    const auto run = run_problem(problem, element, grid, control);
    ConvergenceRow row;
    row.cells = n;
    row.h = grid.dx();
    row.cfl = control.effective_cfl(row.h);
    row.error = (*run.l1_error)[0];
    row.steps = run.result.steps;
    row.wall_seconds = run.result.wall_seconds;
    row.mass_drift = run.mass_drift;
    if (!rows.empty()) row.eoc = eoc(rows.back().error, row.error, rows.back().h, row.h);
    rows.push_back(row);
  }
  return rows;
}

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows) {
  os << "cells,h,cfl,e_L1,EOC,steps,wall_s,mass_drift\n" << std::setprecision(10);
  for (const auto& r : rows) {
    os << r.cells << ',' << r.h << ',' << r.cfl << ',' << r.error << ',';
    if (r.eoc) os << *r.eoc;
    os << ',' << r.steps << ',' << r.wall_seconds << ',' << r.mass_drift << '\n';
  }
}

RadialProfile radial_profile(const FieldState& field, const GridSpec& grid, int n_bins,
                             const std::function<double(const Eigen::VectorXd&)>& value,
                             Point2 centre, double r_max) {
  if (n_bins < 1) throw std::invalid_argument("radial_profile: n_bins must be positive");
  RadialProfile prof;
  const double width = r_max / n_bins;
  std::vector<double> sum(n_bins, 0.0);
  std::vector<int> count(n_bins, 0);
  bool first = true;
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      const Point2 xc = grid.center({i, j});
      const double r = std::hypot(xc.x - centre.x, xc.y - centre.y);
      const double v = value(field.cell_average({i, j}));
      prof.scatter.emplace_back(r, v);
      if (first || v > prof.peak) {
        prof.peak = v;
        prof.peak_radius = r;
        first = false;
      }
      if (r > r_max) continue;
      const int b = std::min(n_bins - 1, static_cast<int>(r / width));
      sum[b] += v;
      ++count[b];
    }
  }
  for (int b = 0; b < n_bins; ++b)
    prof.bins.push_back({b * width, (b + 1) * width, count[b] ? sum[b] / count[b] : 0.0, count[b]});
  return prof;
}

double momentum_norm(const Eigen::VectorXd& q) { return std::hypot(q[1], q[2]); }

void write_radial_profile_csv(std::ostream& os, const RadialProfile& p) {
  os << "kind,r_lo,r_hi,value,count\n" << std::setprecision(12);
  for (const auto& b : p.bins)
    os << "bin," << b.r_lo << ',' << b.r_hi << ',' << b.mean << ',' << b.count << '\n';
  for (const auto& [r, v] : p.scatter) os << "cell," << r << ',' << r << ',' << v << ",1\n";
}

}  // namespace gaf
