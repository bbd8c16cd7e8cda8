#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

#include "gaf/errors.hpp"
#include "gaf/harness.hpp"
#include "gaf/stability.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Options {
  int order = 3;
  std::string moments = "tri";
  std::string edges = "gauss";
  int nx = 0;
  int ny = 0;
  std::string problem = "gaussian";
  double cfl = 0.0;  // 0 selects the per-order default
  double t_end = -1.0;
  std::string out_dir = ".";

  // run
  int snapshot_every = 0;
  bool full_dofs = false;
  int radial_bins = 50;
  // converge
  std::vector<int> cells{32, 64, 96};
  // spectrum / dtmax / cflmap
  double theta = std::numbers::pi / 4;
  int theta_steps = 0;
  double increment = 0.0;
  bool no_vectors = false;
  double cfl_max = 0.4;
  double cfl_step = 0.01;
};

/// Thrown for invalid combinations that CLI11 cannot check by itself.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int degree_of(const Options& o) {
  if (o.order < 3 || o.order > 7) throw UsageError("--order must be in 3..7");
  return o.order - 1;
}

gaf::ElementDef element_of(const Options& o) {
  return gaf::ElementDef::build(degree_of(o), gaf::parse_moment_set(o.moments),
                                gaf::parse_edge_node_kind(o.edges));
}

double cfl_of(const Options& o) { return o.cfl > 0.0 ? o.cfl : gaf::experiment_cfl(o.order); }

fs::path prepare_out_dir(const Options& o) {
  fs::path dir(o.out_dir);
  fs::create_directories(dir);
  return dir;
}

std::ofstream open_csv(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return os;
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::ostringstream os;
  os << std::put_time(std::gmtime(&t), "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

/// Resolved parameters next to the outputs of every subcommand.
void write_manifest(const fs::path& dir, const std::string& command, const Options& o,
                    const gaf::ElementDef* element, json extra) {
  json m;
  m["command"] = command;
  m["build_id"] = GAF_BUILD_ID;
  m["created_utc"] = utc_now();
  m["order"] = o.order;
  m["moments"] = o.moments;
  m["edges"] = o.edges;
  if (element) {
    m["element"] = {{"degree", element->degree()},
                    {"dofs_per_cell", element->dof_count()},
                    {"owned_per_cell", element->owned_count()},
                    {"moment_count", element->moment_count()},
                    {"vandermonde_condition", element->condition_number()}};
  }
  for (auto& [k, v] : extra.items()) m[k] = v;
  std::ofstream os(dir / "manifest.json");
  os << std::setw(2) << m << '\n';
}

int cmd_run(const Options& o) {
  const auto problem = gaf::make_problem(o.problem);
  const auto element = element_of(o);
  const int nx = o.nx > 0 ? o.nx : problem.default_cells;
  const int ny = o.ny > 0 ? o.ny : nx;
  const auto grid = problem.grid(nx, ny);
  gaf::StepControl control;
  control.cfl = cfl_of(o);
  control.t_end = o.t_end >= 0.0 ? o.t_end : problem.t_end;
  control.degree = element.degree();
  const auto dir = prepare_out_dir(o);

  std::vector<gaf::Observer> observers;
  if (o.snapshot_every > 0) {
    observers.push_back({o.snapshot_every, [&](const gaf::StepRecord& r, const gaf::FieldState& f) {
                           std::ostringstream name;
                           name << "snapshot_" << std::setw(6) << std::setfill('0') << r.step
                                << ".csv";
                           auto os = open_csv(dir / name.str());
                           gaf::write_cell_averages_csv(os, f, grid, problem.component_names);
                         }});
  }
  const auto out = gaf::run_problem(problem, element, grid, control, observers);
  {
    auto os = open_csv(dir / "step_log.csv");
    gaf::write_step_log_csv(os, out.result.log);
  }
  {
    auto os = open_csv(dir / "averages.csv");
    gaf::write_cell_averages_csv(os, out.result.field, grid, problem.component_names);
  }
  if (o.full_dofs) {
    auto os = open_csv(dir / "dofs.csv");
    gaf::write_full_dofs_csv(os, out.result.field, element, grid);
  }
  if (o.problem == "gresho") {
    auto os = open_csv(dir / "radial_profile.csv");
    gaf::write_radial_profile_csv(
        os, gaf::radial_profile(out.result.field, grid, o.radial_bins, gaf::momentum_norm));
  }
  {
    auto os = open_csv(dir / "summary.csv");
    os << "component,l1_error,initial_mass,final_mass\n" << std::setprecision(12);
    for (int k = 0; k < out.initial_mass.size(); ++k) {
      os << problem.component_names[k] << ',';
      if (out.l1_error) os << (*out.l1_error)[k];
      os << ',' << out.initial_mass[k] << ',' << out.final_mass[k] << '\n';
    }
  }
  write_manifest(dir, "run", o, &element,
                 {{"problem", o.problem},
                  {"nx", nx},
                  {"ny", ny},
                  {"cfl", control.cfl},
                  {"t_end", control.t_end},
                  {"steps", out.result.steps},
                  {"wall_seconds", out.result.wall_seconds},
                  {"mass_drift", out.mass_drift}});
  std::cout << "steps=" << out.result.steps << " wall_s=" << out.result.wall_seconds
            << " mass_drift=" << out.mass_drift;
  if (out.l1_error) std::cout << " l1_error_0=" << (*out.l1_error)[0];
  std::cout << '\n';
  return 0;
}

int cmd_converge(const Options& o) {
  const auto element = element_of(o);
  const auto dir = prepare_out_dir(o);
  const double cfl = cfl_of(o);
  const auto rows = gaf::run_convergence(o.order, element.moment_set(), element.edge_node_kind(),
                                         o.cells, cfl);
  auto os = open_csv(dir / "convergence.csv");
  gaf::write_convergence_csv(os, rows);
  gaf::write_convergence_csv(std::cout, rows);
  write_manifest(dir, "converge", o, &element,
                 {{"problem", "gaussian"}, {"cells", o.cells}, {"base_cfl", cfl}});
  return 0;
}

gaf::GridSpec stability_grid(const Options& o) {
  const int nx = o.nx > 0 ? o.nx : 10;
  const int ny = o.ny > 0 ? o.ny : nx;
  // h = 1/10 on the default grid, matching the spectral study.
  return gaf::GridSpec(nx, ny, 0.0, nx / 10.0, 0.0, ny / 10.0);
}

int cmd_spectrum(const Options& o) {
  const auto element = element_of(o);
  const auto grid = stability_grid(o);
  const auto dir = prepare_out_dir(o);
  const auto a = gaf::assemble_operator(element, grid, o.theta);
  const double tol = gaf::spectral_tolerance(o.order);
  const auto rep = gaf::spectrum(a.matrix, tol, !o.no_vectors);
  {
    auto os = open_csv(dir / "eigenvalues.csv");
    gaf::write_eigenvalues_csv(os, rep.eigenvalues);
  }
  {
    auto os = open_csv(dir / "verdict.csv");
    os << "dimension,max_real,tolerance,matrix_norm,stable,semisimple,diagonalizable_rank,"
          "diagonalizable\n"
       << std::setprecision(12) << a.matrix.rows() << ',' << rep.max_real << ',' << rep.tolerance
       << ',' << rep.matrix_norm << ',' << rep.stable << ',';
    if (rep.vectors_checked)
      os << rep.semisimple << ',' << rep.diagonalizable_rank << ',' << rep.diagonalizable;
    else
      os << ",,";
    os << '\n';
  }
  write_manifest(dir, "spectrum", o, &element,
                 {{"nx", grid.nx()}, {"ny", grid.ny()}, {"theta", o.theta},
                  {"dimension", a.matrix.rows()}});
  std::cout << "dimension=" << a.matrix.rows() << " max_real=" << rep.max_real
            << " stable=" << (rep.stable ? "yes" : "no") << '\n';
  return 0;
}

int cmd_dtmax(const Options& o) {
  const auto element = element_of(o);
  const auto grid = stability_grid(o);
  const auto dir = prepare_out_dir(o);
  const double inc = o.increment > 0.0 ? o.increment : gaf::dt_scan_increment(o.order);
  std::vector<double> thetas;
  if (o.theta_steps > 0)
    for (int k = 0; k <= o.theta_steps; ++k)
      thetas.push_back(0.5 * std::numbers::pi * k / o.theta_steps);
  else
    thetas.push_back(o.theta);
  auto os = open_csv(dir / "dtmax.csv");
  os << "theta,dt_max,c_cfl,max_real\n" << std::setprecision(10);
  const double h = std::min(grid.dx(), grid.dy());
  for (const double th : thetas) {
    const auto a = gaf::assemble_operator(element, grid, th);
    const auto ev = gaf::eigenvalues(a.matrix);
    double max_re = -INFINITY;
    for (const auto& l : ev) max_re = std::max(max_re, l.real());
    const double dt = gaf::max_stable_dt(ev, inc);
    const double c = std::max(std::abs(std::cos(th)), std::abs(std::sin(th))) * dt / h;
    os << th << ',' << dt << ',' << c << ',' << max_re << '\n';
    std::cout << "theta=" << th << " dt_max=" << dt << " c_cfl=" << c << '\n';
  }
  write_manifest(dir, "dtmax", o, &element,
                 {{"nx", grid.nx()}, {"ny", grid.ny()}, {"increment", inc}, {"thetas", thetas}});
  return 0;
}

int cmd_cflmap(const Options& o) {
  const auto element = element_of(o);
  const auto grid = stability_grid(o);
  const auto dir = prepare_out_dir(o);
  if (!(o.cfl_step > 0.0) || !(o.cfl_max >= 0.0)) throw UsageError("invalid CFL lattice");
  std::vector<double> lattice;
  const int n = static_cast<int>(std::floor(o.cfl_max / o.cfl_step + 1e-9));
  for (int k = 0; k <= n; ++k) lattice.push_back(k * o.cfl_step);
  const auto map = gaf::cfl_region_scan(element, grid, lattice, lattice);
  auto os = open_csv(dir / "cflmap.csv");
  gaf::write_cfl_map_csv(os, map);
  write_manifest(dir, "cflmap", o, &element,
                 {{"nx", grid.nx()}, {"ny", grid.ny()}, {"cfl_max", o.cfl_max},
                  {"cfl_step", o.cfl_step}});
  return 0;
}

int cmd_element_dump(const Options& o) {
  const auto element = element_of(o);
  const auto dir = prepare_out_dir(o);
  {
    auto os = open_csv(dir / "element_dofs.csv");
    os << "index,kind,a,b,x,y\n" << std::setprecision(17);
    for (int r = 0; r < element.dof_count(); ++r) {
      const auto& d = element.dofs()[r];
      os << r << ',';
      std::visit(
          [&](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, gaf::NodeDof>)
              os << "node," << k.n << ",," << d.location.x << ',' << d.location.y;
            else if constexpr (std::is_same_v<K, gaf::EdgeDof>)
              os << "edge," << static_cast<int>(k.edge) << ',' << k.a << ',' << d.location.x << ','
                 << d.location.y;
            else
              os << "moment," << k.k << ',' << k.l << ",,";
          },
          d.kind);
      os << '\n';
    }
  }
  {
    auto os = open_csv(dir / "element_basis.csv");
    os << "index,px,py\n";
    for (std::size_t s = 0; s < element.basis().size(); ++s)
      os << s << ',' << element.basis()[s].px << ',' << element.basis()[s].py << '\n';
  }
  {
    auto os = open_csv(dir / "element_shape_coeffs.csv");
    os << std::setprecision(17);
    const auto& c = element.shape_coeffs();
    for (Eigen::Index i = 0; i < c.rows(); ++i) {
      for (Eigen::Index j = 0; j < c.cols(); ++j) os << (j ? "," : "") << c(i, j);
      os << '\n';
    }
  }
  write_manifest(dir, "element-dump", o, &element,
                 {{"duality_residual", element.duality_residual()}});
  std::cout << "dofs=" << element.dof_count() << " owned=" << element.owned_count()
            << " condition=" << element.condition_number() << '\n';
  return 0;
}

void print_error(const std::string& kind, const std::string& message, json extra = {}) {
  json e{{"error", kind}, {"message", message}};
  for (auto& [k, v] : extra.items()) e[k] = v;
  std::cerr << e.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Semi-discrete generalized Active Flux solver and stability analyzer"};
  app.set_config("--config", "", "Read options from a key=value file");
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--order", o.order, "Spatial order N+1 (3..7)")->check(CLI::Range(3, 7));
  app.add_option("--moments", o.moments, "Moment set")
      ->check(CLI::IsMember({"tri", "tensor"}));
  app.add_option("--edges", o.edges, "Edge-node placement")
      ->check(CLI::IsMember({"gauss", "lobatto", "uniform"}));
  app.add_option("--nx", o.nx, "Cells in x (0: problem default)")->check(CLI::NonNegativeNumber);
  app.add_option("--ny", o.ny, "Cells in y (0: same as nx)")->check(CLI::NonNegativeNumber);
  app.add_option("--problem", o.problem, "Benchmark problem")
      ->check(CLI::IsMember(gaf::problem_names()));
  app.add_option("--cfl", o.cfl, "Courant number (0: per-order default)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--t-end", o.t_end, "Final time (negative: problem default)");
  app.add_option("--out-dir", o.out_dir, "Output directory");

  auto* run = app.add_subcommand("run", "Run a benchmark problem");
  run->add_option("--snapshot-every", o.snapshot_every, "Write cell averages every k steps");
  run->add_flag("--full-dofs", o.full_dofs, "Also write every owned DOF");
  run->add_option("--radial-bins", o.radial_bins, "Bins of the Gresho radial profile")
      ->check(CLI::PositiveNumber);

  auto* converge = app.add_subcommand("converge", "Gaussian convergence study");
  converge->add_option("--cells", o.cells, "Cells per direction for each grid")
      ->check(CLI::PositiveNumber);

  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues of the advection operator");
  auto* dtmax = app.add_subcommand("dtmax", "Maximal stable RK3 time step");
  auto* cflmap = app.add_subcommand("cflmap", "Stability map over (cfl_x, cfl_y)");
  for (auto* sub : {spectrum, dtmax, cflmap})
    sub->add_option("--theta", o.theta, "Advection angle in radians");
  spectrum->add_flag("--no-vectors", o.no_vectors, "Skip the eigenvector checks");
  dtmax->add_option("--theta-steps", o.theta_steps, "Sweep theta over [0, pi/2] in k steps");
  dtmax->add_option("--increment", o.increment, "Time-step lattice (0: per-order default)");
  cflmap->add_option("--cfl-max", o.cfl_max, "Largest lattice Courant number");
  cflmap->add_option("--cfl-step", o.cfl_step, "Lattice spacing");

  auto* dump = app.add_subcommand("element-dump", "Write DOF layout, basis and shape functions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("UsageError", e.what());
    return 2;
  }

  try {
    if (*run) return cmd_run(o);
    if (*converge) return cmd_converge(o);
    if (*spectrum) return cmd_spectrum(o);
    if (*dtmax) return cmd_dtmax(o);
    if (*cflmap) return cmd_cflmap(o);
    if (*dump) return cmd_element_dump(o);
  } catch (const gaf::InadmissibleState& e) {
    json extra;
    if (e.cell_i()) extra["cell_i"] = *e.cell_i();
    if (e.cell_j()) extra["cell_j"] = *e.cell_j();
    if (e.time()) extra["time"] = *e.time();
    print_error(e.kind(), e.what(), extra);
    return 3;
  } catch (const gaf::Error& e) {
    print_error(e.kind(), e.what());
    return 3;
  } catch (const UsageError& e) {
    print_error("UsageError", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    print_error("InvalidArgument", e.what());
    return 2;
  } catch (const std::exception& e) {
    print_error("RuntimeError", e.what());
    return 1;
  }
  return 0;
}
