#include "gaf/mesh.hpp"

#include <stdexcept>

namespace gaf {

GridSpec::GridSpec(int nx, int ny, double x_min, double x_max, double y_min, double y_max)
    : nx_(nx), ny_(ny), x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max) {
  if (nx <= 0 || ny <= 0) {
    throw std::invalid_argument("GridSpec: cell counts must be positive");
  }
  if (!(x_max > x_min) || !(y_max > y_min)) {
    throw std::invalid_argument("GridSpec: domain bounds must satisfy max > min");
  }
  dx_ = (x_max - x_min) / nx;
  dy_ = (y_max - y_min) / ny;
}

}  // namespace gaf
