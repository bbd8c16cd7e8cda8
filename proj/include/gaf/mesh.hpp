#pragma once

#include <compare>

namespace gaf {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct CellIndex {
  int i = 0;
  int j = 0;
  friend auto operator<=>(const CellIndex&, const CellIndex&) = default;
};

/// Uniform periodic Cartesian grid. Cell (i, j) covers
/// [x_min + i dx, x_min + (i+1) dx] x [y_min + j dy, y_min + (j+1) dy].
class GridSpec {
 public:
  GridSpec(int nx, int ny, double x_min, double x_max, double y_min, double y_max);

  /// n x n cells on [0,1]^2.
  static GridSpec unit_square(int n) { return GridSpec(n, n, 0.0, 1.0, 0.0, 1.0); }

  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  int cell_count() const noexcept { return nx_ * ny_; }
  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  double y_min() const noexcept { return y_min_; }
  double y_max() const noexcept { return y_max_; }
  double dx() const noexcept { return dx_; }
  double dy() const noexcept { return dy_; }
  double cell_area() const noexcept { return dx_ * dy_; }
  bool periodic() const noexcept { return true; }

  Point2 center(CellIndex c) const noexcept {
    return {x_min_ + (c.i + 0.5) * dx_, y_min_ + (c.j + 0.5) * dy_};
  }

  /// Affine map of the closed cell onto [-1/2, 1/2]^2. No clamping.
  Point2 to_reference(CellIndex c, Point2 x) const noexcept {
    const Point2 xc = center(c);
    return {(x.x - xc.x) / dx_, (x.y - xc.y) / dy_};
  }

  Point2 from_reference(CellIndex c, Point2 ref) const noexcept {
    const Point2 xc = center(c);
    return {xc.x + dx_ * ref.x, xc.y + dy_ * ref.y};
  }

  /// Periodic neighbour lookup; the only place boundary handling enters.
  CellIndex neighbor(CellIndex c, int di, int dj) const noexcept {
    return {wrap(c.i + di, nx_), wrap(c.j + dj, ny_)};
  }

  int linear_index(CellIndex c) const noexcept { return c.j * nx_ + c.i; }
  CellIndex cell_at(int linear) const noexcept { return {linear % nx_, linear / nx_}; }

 private:
  static int wrap(int k, int n) noexcept {
    const int r = k % n;
    return r < 0 ? r + n : r;
  }

  int nx_;
  int ny_;
  double x_min_;
  double x_max_;
  double y_min_;
  double y_max_;
  double dx_;
  double dy_;
};

}  // namespace gaf
