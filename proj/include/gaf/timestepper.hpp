#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iosfwd>
#include <limits>
#include <vector>

#include "gaf/errors.hpp"
#include "gaf/field.hpp"
#include "gaf/models.hpp"
#include "gaf/operator.hpp"

namespace gaf {

enum class DtPolicy { FixedCfl, AdaptiveConvergence };

/// Time-step selection. Under AdaptiveConvergence the Courant number is
/// scaled with the grid as cfl(h) = cfl * (h / reference_h)^((N - 2) / 3) so
/// that the RK3 temporal error does not mask the spatial order.
struct StepControl {
  double cfl = 0.27;
  double t_end = 0.0;
  DtPolicy policy = DtPolicy::FixedCfl;
  double reference_h = 1.0 / 32.0;
  int degree = 2;

  /// Courant number actually used on a grid of spacing h.
  double effective_cfl(double h) const;
};

double adaptive_cfl(double base_cfl, double reference_h, double h, int degree);

/// Largest characteristic speed: advection max(|a_x|,|a_y|), acoustics c,
/// Euler max over cell averages of max(|u|,|v|) + c_s.
template <class Model>
double max_signal_speed(const Model& model, const FieldState& field) {
  if constexpr (std::is_same_v<Model, Euler>) {
    double s = 0.0;
    for (int j = 0; j < field.ny(); ++j)
      for (int i = 0; i < field.nx(); ++i) {
        const Euler::State q = field.cell_average({i, j});
        model.check_admissible(q);
        s = std::max(s, model.max_signal_speed(q));
      }
    return s;
  } else {
    return model.max_signal_speed(Model::State::Zero().eval());
  }
}

/// dt = cfl * min(dx, dy) / max_signal_speed, clipped so that t + dt lands on t_end.
template <class Model>
double compute_dt(const Model& model, const GridSpec& grid, const StepControl& control,
                  const FieldState& field, double t = 0.0) {
  const double speed = max_signal_speed(model, field);
  if (!(speed > 0.0)) throw ZeroSignalSpeed("maximal signal speed is zero");
  const double h = std::min(grid.dx(), grid.dy());
  const double dt = control.effective_cfl(h) * h / speed;
  return std::min(dt, control.t_end - t);
}

/// One Shu-Osher SSP-RK3 step. `rhs(u, du)` writes L(u) into du.
template <class Vec, class Rhs>
void ssp_rk3_step(Vec& u, double dt, Rhs&& rhs) {
  Vec k(u.size());
  rhs(u, k);
  Vec u1 = u + dt * k;
  rhs(u1, k);
  Vec u2 = 0.75 * u + 0.25 * (u1 + dt * k);
  rhs(u2, k);
  u = (1.0 / 3.0) * u + (2.0 / 3.0) * (u2 + dt * k);
}

/// 1 + z + z^2/2 + z^3/6.
template <class T>
T rk3_stability_polynomial(T z) {
  return T(1) + z * (T(1) + z * (T(0.5) + z / T(6)));
}

struct StepRecord {
  int step = 0;
  double t = 0.0;
  double dt = 0.0;
  Eigen::VectorXd mass;
  double max_abs = 0.0;
};

struct IntegrationResult {
  FieldState field;
  int steps = 0;
  double wall_seconds = 0.0;
  std::vector<StepRecord> log;
};

/// Called with every `interval`-th record (and the final one).
struct Observer {
  int interval = 1;
  std::function<void(const StepRecord&, const FieldState&)> callback;
};

void write_step_log_csv(std::ostream& os, const std::vector<StepRecord>& log);

/// Runs compute_dt + ssp_rk3_step until t_end. InadmissibleState is rethrown
/// with the time of failure attached.
template <class Model>
IntegrationResult integrate(FieldState field, const ElementDef& element, const GridSpec& grid,
                            const Model& model, const StepControl& control,
                            const std::vector<Observer>& observers = {}) {
  const auto start = std::chrono::steady_clock::now();
  SemiDiscreteOperator<Model> op(grid, element, model);
  auto record = [&](int step, double t, double dt) {
    StepRecord r;
    r.step = step;
    r.t = t;
    r.dt = dt;
    r.mass = field.total_mass(grid);
    r.max_abs = field.values().cwiseAbs().maxCoeff();
    return r;
  };
  IntegrationResult out{field, 0, 0.0, {}};
  out.log.push_back(record(0, 0.0, 0.0));
  for (const auto& o : observers)
    if (o.callback) o.callback(out.log.back(), field);

  double t = 0.0;
  int step = 0;
  auto rhs = [&](const Eigen::VectorXd& u, Eigen::VectorXd& du) { op.apply(u, du); };
  while (t < control.t_end) {
    const double dt = compute_dt(model, grid, control, field, t);
    if (!(dt > 0.0)) break;
    try {
      ssp_rk3_step(field.values(), dt, rhs);
    } catch (const InadmissibleState& e) {
      throw InadmissibleState(e.what(), e.cell_i().value_or(-1), e.cell_j().value_or(-1), t);
    }
    // Land exactly on t_end when the step was clipped.
    t = (control.t_end - t <= dt) ? control.t_end : t + dt;
    ++step;
    out.log.push_back(record(step, t, dt));
    const bool last = t >= control.t_end;
    for (const auto& o : observers)
      if (o.callback && (last || (o.interval > 0 && step % o.interval == 0)))
        o.callback(out.log.back(), field);
  }
  out.field = std::move(field);
  out.steps = step;
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace gaf
