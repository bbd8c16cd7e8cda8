#include "gaf/stability.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numbers>
#include <ostream>

#include "gaf/errors.hpp"
#include "gaf/operator.hpp"
#include "gaf/timestepper.hpp"

namespace gaf {

OperatorMatrix assemble_operator(const ElementDef& element, const GridSpec& grid, double ax,
                                 double ay) {
  SemiDiscreteOperator<LinearAdvection> op(grid, element, LinearAdvection{ax, ay});
  const Eigen::Index n = static_cast<Eigen::Index>(grid.cell_count()) * element.owned_count();
  OperatorMatrix out;
  out.matrix.resize(n, n);
  out.order = element.order();
  out.nx = grid.nx();
  out.ny = grid.ny();
  out.ax = ax;
  out.ay = ay;
  out.moments = element.moment_set();
  out.edges = element.edge_node_kind();
  Eigen::VectorXd probe = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd column(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    probe[j] = 1.0;
    op.apply(probe, column);
    out.matrix.col(j) = column;
    probe[j] = 0.0;
  }
  return out;
}

OperatorMatrix assemble_operator(const ElementDef& element, const GridSpec& grid, double theta) {
  return assemble_operator(element, grid, std::cos(theta), std::sin(theta));
}

namespace {

struct EigenDecomposition {
  std::vector<std::complex<double>> values;
  Eigen::MatrixXcd vectors;  // empty unless requested
};

EigenDecomposition run_dgeev(const Eigen::MatrixXd& a, bool want_vectors) {
  if (a.rows() != a.cols()) throw std::invalid_argument("eigenvalues: matrix must be square");
  const lapack_int n = static_cast<lapack_int>(a.rows());
  EigenDecomposition out;
  if (n == 0) return out;
  Eigen::MatrixXd work = a;
  std::vector<double> wr(n), wi(n);
  Eigen::MatrixXd vr;
  if (want_vectors) vr.resize(n, n);
  double dummy = 0.0;
  const lapack_int info =
      LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', n, work.data(), n, wr.data(),
                    wi.data(), &dummy, 1, want_vectors ? vr.data() : &dummy, want_vectors ? n : 1);
  if (info != 0)
    throw EigensolverFailure("dgeev failed with info = " + std::to_string(info));
  out.values.resize(n);
  for (lapack_int k = 0; k < n; ++k) out.values[k] = {wr[k], wi[k]};
  if (want_vectors) {
    out.vectors.resize(n, n);
    for (lapack_int k = 0; k < n; ++k) {
      if (wi[k] != 0.0 && k + 1 < n) {
        const Eigen::VectorXcd v = vr.col(k).cast<std::complex<double>>() +
                                   std::complex<double>(0.0, 1.0) * vr.col(k + 1);
        out.vectors.col(k) = v;
        out.vectors.col(k + 1) = v.conjugate();
        ++k;
      } else {
        out.vectors.col(k) = vr.col(k).cast<std::complex<double>>();
      }
    }
  }
  return out;
}

}  // namespace

std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXd& a) {
  return run_dgeev(a, false).values;
}

SpectrumReport spectrum(const Eigen::MatrixXd& a, double tolerance, bool check_vectors) {
  if (!a.allFinite()) throw EigensolverFailure("matrix has non-finite entries");
  auto dec = run_dgeev(a, check_vectors);
  SpectrumReport rep;
  rep.tolerance = tolerance;
  rep.matrix_norm = a.rows() ? a.cwiseAbs().rowwise().sum().maxCoeff() : 0.0;
  rep.eigenvalues = std::move(dec.values);
  rep.max_real = -std::numeric_limits<double>::infinity();
  for (const auto& l : rep.eigenvalues) rep.max_real = std::max(rep.max_real, l.real());
  if (rep.eigenvalues.empty()) rep.max_real = 0.0;

  if (check_vectors && !rep.eigenvalues.empty()) {
    rep.vectors_checked = true;
    // Cluster near-imaginary eigenvalues (|Re| < eps) within 1e-9 and compare
    // each cluster's size with the rank of its eigenvector block.
    constexpr double kClusterRadius = 1e-9;
    constexpr double kVectorRankTol = 1e-6;
    std::vector<int> idx;
    for (int k = 0; k < static_cast<int>(rep.eigenvalues.size()); ++k)
      if (std::abs(rep.eigenvalues[k].real()) < tolerance) idx.push_back(k);
    std::vector<bool> used(idx.size(), false);
    for (std::size_t s = 0; s < idx.size(); ++s) {
      if (used[s]) continue;
      std::vector<int> cluster{idx[s]};
      used[s] = true;
      for (std::size_t grow = 0; grow < cluster.size(); ++grow) {
        for (std::size_t t = 0; t < idx.size(); ++t) {
          if (used[t]) continue;
          if (std::abs(rep.eigenvalues[idx[t]] - rep.eigenvalues[cluster[grow]]) < kClusterRadius) {
            used[t] = true;
            cluster.push_back(idx[t]);
          }
        }
      }
      if (cluster.size() < 2) continue;
      Eigen::MatrixXcd block(dec.vectors.rows(), static_cast<Eigen::Index>(cluster.size()));
      for (std::size_t c = 0; c < cluster.size(); ++c)
        block.col(static_cast<Eigen::Index>(c)) = dec.vectors.col(cluster[c]).normalized();
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(block);
      const auto& sv = svd.singularValues();
      int rank = 0;
      for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv[k] > kVectorRankTol * sv[0]) ++rank;
      if (rank < static_cast<int>(cluster.size())) rep.semisimple = false;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(dec.vectors);
    qr.setThreshold(1e-10);
    rep.diagonalizable_rank = static_cast<int>(qr.rank());
    rep.diagonalizable = rep.diagonalizable_rank == static_cast<int>(a.rows());
  }
  rep.stable = rep.max_real <= tolerance && rep.semisimple;
  return rep;
}

double spectral_tolerance(int order) {
  if (order <= 5) return 5e-13;
  if (order == 6) return 1e-12;
  return 5e-12;
}

double dt_scan_increment(int order) { return order <= 5 ? 1e-4 : 5e-5; }

double max_amplification(std::span<const std::complex<double>> eigenvalues, double dt) {
  double g = 0.0;
  for (const auto& l : eigenvalues) g = std::max(g, std::abs(rk3_stability_polynomial(l * dt)));
  return g;
}

double max_stable_dt(std::span<const std::complex<double>> eigenvalues, double increment,
                     double slack, double dt_limit) {
  if (!(increment > 0.0)) throw std::invalid_argument("max_stable_dt: increment must be positive");
  const long max_steps = static_cast<long>(std::floor(dt_limit / increment));
  long k = 0;
  while (k < max_steps) {
    const double dt = (k + 1) * increment;
    if (max_amplification(eigenvalues, dt) > 1.0 + slack) break;
    ++k;
  }
  return k * increment;
}

std::vector<CflMapEntry> cfl_region_scan(const ElementDef& element, const GridSpec& grid,
                                         std::span<const double> cfl_x,
                                         std::span<const double> cfl_y, double slack) {
  std::map<long long, std::vector<std::complex<double>>> cache;
  std::vector<CflMapEntry> out;
  out.reserve(cfl_x.size() * cfl_y.size());
  for (const double cy : cfl_y) {
    for (const double cx : cfl_x) {
      // Velocity realizing (cx, cy) with dt = 1.
      const double ax = cx * grid.dx();
      const double ay = cy * grid.dy();
      const double speed = std::hypot(ax, ay);
      if (speed == 0.0) {
        out.push_back({cx, cy, true});
        continue;
      }
      const double angle = std::atan2(ay, ax);
      const auto key = static_cast<long long>(std::llround(angle * 1e12));
      auto it = cache.find(key);
      if (it == cache.end()) {
        const auto a = assemble_operator(element, grid, ax / speed, ay / speed);
        it = cache.emplace(key, eigenvalues(a.matrix)).first;
      }
      const bool stable = max_amplification(it->second, speed) <= 1.0 + slack;
      out.push_back({cx, cy, stable});
    }
  }
  return out;
}

double cfl_radius(const ElementDef& element, const GridSpec& grid, double theta,
                  double increment) {
  const auto a = assemble_operator(element, grid, theta);
  auto lambda = eigenvalues(a.matrix);
  const double h = std::min(grid.dx(), grid.dy());
  for (auto& l : lambda) l *= h;
  return max_stable_dt(lambda, increment);
}

void write_eigenvalues_csv(std::ostream& os, std::span<const std::complex<double>> eigenvalues) {
  os << "re,im\n" << std::setprecision(17);
  for (const auto& l : eigenvalues) os << l.real() << ',' << l.imag() << '\n';
}

void write_cfl_map_csv(std::ostream& os, std::span<const CflMapEntry> map) {
  os << "cfl_x,cfl_y,stable\n" << std::setprecision(10);
  for (const auto& e : map) os << e.cfl_x << ',' << e.cfl_y << ',' << (e.stable ? 1 : 0) << '\n';
}

}  // namespace gaf
