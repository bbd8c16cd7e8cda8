#include "gaf/timestepper.hpp"

#include <iomanip>
#include <ostream>

namespace gaf {

double adaptive_cfl(double base_cfl, double reference_h, double h, int degree) {
  return base_cfl * std::pow(h / reference_h, (degree - 2) / 3.0);
}

double StepControl::effective_cfl(double h) const {
  if (policy == DtPolicy::AdaptiveConvergence) return adaptive_cfl(cfl, reference_h, h, degree);
  return cfl;
}

void write_step_log_csv(std::ostream& os, const std::vector<StepRecord>& log) {
  const int s = log.empty() ? 0 : static_cast<int>(log.front().mass.size());
  os << "step,t,dt";
  for (int k = 0; k < s; ++k) os << ",mass_" << k;
  os << ",max_abs\n" << std::setprecision(17);
  for (const auto& r : log) {
    os << r.step << ',' << r.t << ',' << r.dt;
    for (int k = 0; k < s; ++k) os << ',' << r.mass[k];
    os << ',' << r.max_abs << '\n';
  }
}

}  // namespace gaf
