// reactwave: maps collinear A+BC reactions onto cold-atom waveguide
// potentials, runs the scaled wavepacket dynamics and reports design
// parameters and reaction outcomes.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "reactwave/analysis.hpp"
#include "reactwave/config.hpp"
#include "reactwave/constants.hpp"
#include "reactwave/fit.hpp"
#include "reactwave/io.hpp"
#include "reactwave/kernels.hpp"

namespace fs = std::filesystem;
using namespace reactwave;
using nlohmann::json;

namespace {

struct GlobalOpts {
  std::string config_path;
  std::string out_dir = "out";
  int threads = 1;
  long seed = 0;  // reserved; no stochastic components at present
  bool quiet = false;
  std::string kernels = "auto";
};

void apply_kernel_choice(const std::string& choice) {
  if (choice == "auto") return;
  kernels::Isa isa;
  if (choice == "scalar") isa = kernels::Isa::scalar;
  else if (choice == "avx2") isa = kernels::Isa::avx2;
  else if (choice == "neon") isa = kernels::Isa::neon;
  else throw validation_error("--kernels must be auto|scalar|avx2|neon");
  if (!kernels::select_isa(isa))
    throw validation_error("kernel variant '" + choice +
                           "' is not supported on this CPU");
}

void info(const GlobalOpts& g, const std::string& msg) {
  if (!g.quiet) std::cout << msg << "\n";
}

RunConfig load_config(const GlobalOpts& g) {
  if (g.config_path.empty())
    throw validation_error("--config <file> is required for this command");
  return parse_config_file(g.config_path);
}

struct RunSetup {
  RunConfig cfg;
  LepsSurface surface;
  ScalingParams scaling;
  MassFactors factors;
  SimChannelGeometry geom;
  Grid2D grid;
  WavePacketSpec packet;
  Schedule schedule;
  ChannelPartition partition;

  RunSetup(RunConfig c)
      : cfg(std::move(c)),
        surface(cfg.surface()),
        scaling(cfg.scaling()),
        factors(mass_factors(cfg.masses)),
        geom(channel_geometry(surface, cfg.masses, scaling)),
        grid(Grid2D::from_extents(cfg.grid_q1_min, cfg.grid_q1_max,
                                  cfg.grid_q2_min, cfg.grid_q2_max, cfg.grid_n1,
                                  cfg.grid_n2)),
        packet(cfg.packet),
        schedule(cfg.schedule),
        partition{cfg.reactant_line_q1, cfg.product_line_eta} {
    if (cfg.dt_auto) schedule.dt = Propagator::default_dt(geom);
    if (cfg.packet_velocity_auto) {
      if (packet.channel != Channel::reactant)
        throw validation_error(
            "packet.velocity auto is only defined for the reactant channel");
      packet.velocity =
          -initial_velocity(cfg.temperature, cfg.masses, factors, scaling).v_q1;
    }
    validate_geometry();
  }

  void validate_geometry() const {
    const double osc2 = geom.osc_len2();
    if (geom.chi20 + 8 * osc2 > grid.q2_max())
      throw validation_error(
          "grid: reactant channel not covered to 8 oscillator lengths");
    if (geom.chi20 - 8 * osc2 < grid.q2_min) {
      // acceptable only when the repulsive wall confines that side
      const ScaledSurface scaled(surface, factors, scaling);
      const double floor_v = scaled.energy(cfg.reactant_line_q1, geom.chi20);
      const double wall_v =
          scaled.energy(cfg.reactant_line_q1, grid.q2_min + 0.5 * grid.dx2);
      if (wall_v - floor_v < 15.0 * constants::hbar * geom.omega2())
        throw validation_error(
            "grid: reactant channel not covered to 8 oscillator lengths");
    }
    const double q1_cap = grid.q1_max() - cfg.cap.width;
    if (cfg.cap.enabled() && cfg.reactant_line_q1 >= q1_cap)
      throw validation_error("analysis.reactant_line lies inside the CAP zone");
    const double eta_exit =
        std::min((grid.q1_max() - geom.sin_beta * geom.chi10) / geom.cos_beta,
                 (grid.q2_max() + geom.cos_beta * geom.chi10) / geom.sin_beta);
    if (cfg.cap.enabled() && cfg.product_line_eta >= eta_exit - cfg.cap.width)
      throw validation_error("analysis.product_line lies inside the CAP zone");
  }

  double probe_halfwidth(Channel ch) const {
    if (cfg.probe_halfwidth > 0) return cfg.probe_halfwidth;
    return 8.0 * (ch == Channel::reactant ? geom.osc_len2() : geom.osc_len1());
  }
};

// ---------------- design ----------------

int cmd_design(const GlobalOpts& g) {
  RunConfig cfg = load_config(g);
  require_blocks(cfg, {"reaction", "simulator"});
  DesignInput input;
  input.l = cfg.l;
  if (cfg.target_nu_tilde) {
    input.l.reset();
    input.target_nu_tilde = cfg.target_nu_tilde;
    input.target_channel = cfg.target_channel;
  }
  input.temperature = cfg.temperature;
  const DesignReport report =
      design_report(cfg.surface(), cfg.masses, cfg.m_tilde, input);
  io::OutputDirLock lock(g.out_dir);
  io::write_text_file((fs::path(g.out_dir) / "design.json").string(),
                      io::design_report_json(report));
  if (!g.quiet) std::cout << io::design_report_table(report);
  info(g, "wrote " + (fs::path(g.out_dir) / "design.json").string());
  return exit_ok;
}

// ---------------- surface ----------------

int cmd_surface(const GlobalOpts& g, const std::string& frame, double q1_lo,
                double q1_hi, double q2_lo, double q2_hi, std::size_t n1,
                std::size_t n2, double clip) {
  RunConfig cfg = load_config(g);
  require_blocks(cfg, {"reaction"});
  if (!(q1_hi > q1_lo) || !(q2_hi > q2_lo))
    throw validation_error("surface: window is empty");
  if (n1 < 2 || n2 < 2) throw validation_error("surface: resolution too small");

  io::OutputDirLock lock(g.out_dir);
  std::ostringstream os;
  std::string name;
  if (frame == "chem") {
    const ContourWindow w{q1_lo * units::angstrom_to_m, q1_hi * units::angstrom_to_m,
                          q2_lo * units::angstrom_to_m, q2_hi * units::angstrom_to_m,
                          n1, n2};
    contour_raster_chem(os, cfg.surface(), w, clip);
    name = "surface_chem.csv";
  } else if (frame == "sim") {
    require_blocks(cfg, {"simulator"});
    const ScalingParams s = cfg.scaling();
    const MassFactors f = mass_factors(cfg.masses);
    const ScaledSurface scaled(cfg.surface(), f, s);
    const SimChannelGeometry geom = channel_geometry(cfg.surface(), cfg.masses, s);
    const ContourWindow w{q1_lo * 1e-6, q1_hi * 1e-6, q2_lo * 1e-6, q2_hi * 1e-6,
                          n1, n2};
    contour_raster_sim(os, scaled, geom, w, clip);
    name = "surface_sim.csv";
  } else {
    throw validation_error("surface: --frame must be chem or sim");
  }
  io::write_text_file((fs::path(g.out_dir) / name).string(), os.str());
  info(g, "wrote " + (fs::path(g.out_dir) / name).string());
  return exit_ok;
}

// ---------------- propagate ----------------

int cmd_propagate(const GlobalOpts& g, const std::string& resume_path) {
  RunConfig cfg = load_config(g);
  require_blocks(cfg, {"reaction", "simulator", "grid", "packet", "cap",
                       "schedule", "analysis"});
  RunSetup setup(std::move(cfg));
  io::OutputDirLock lock(!setup.cfg.output_dir.empty() && g.out_dir == "out"
                             ? setup.cfg.output_dir
                             : g.out_dir);
  const std::string dir = lock.dir();

  const ScaledSurface scaled(setup.surface, setup.factors, setup.scaling);
  Propagator prop(setup.grid, scaled, setup.geom, setup.cfg.cap,
                  setup.schedule.dt);

  long start_step = 0;
  std::optional<Wavefunction> psi;
  if (!resume_path.empty()) {
    const std::string base = fs::path(resume_path).filename().string();
    if (std::sscanf(base.c_str(), "snap_%08ld.csv", &start_step) != 1)
      throw validation_error("--resume expects a snap_<step>.csv file");
    psi = io::read_snapshot(resume_path, setup.grid,
                            double(start_step) * setup.schedule.dt);
    info(g, "resuming from step " + std::to_string(start_step));
  } else {
    psi = init_wavepacket(setup.packet, setup.grid, setup.geom, setup.cfg.cap,
                          &scaled);
  }

  std::vector<BasisSpec> bases{setup.cfg.basis};
  {
    BasisSpec other = setup.cfg.basis;
    other.kind = other.kind == VibBasis::harmonic ? VibBasis::morse
                                                  : VibBasis::harmonic;
    bases.push_back(other);
  }
  // reactant cut clipped at the wall-side grid edge
  const double hw_r = setup.probe_halfwidth(Channel::reactant);
  const double cut_lo_r = std::max(setup.geom.chi20 - hw_r,
                                   setup.grid.q2_min + 2.0 * setup.grid.dx2);
  FluxProbe reactant_probe(Channel::reactant, setup.cfg.reactant_line_q1,
                           setup.grid, setup.geom, bases, &scaled, cut_lo_r,
                           setup.geom.chi20 + hw_r, 160, setup.cfg.flux_stride);
  const double hw_p = setup.probe_halfwidth(Channel::product);
  FluxProbe product_probe(Channel::product, setup.cfg.product_line_eta,
                          setup.grid, setup.geom, bases, &scaled,
                          setup.geom.chi10 - hw_p, setup.geom.chi10 + hw_p, 160,
                          setup.cfg.flux_stride);

  Schedule sched = setup.schedule;
  sched.n_steps -= start_step;
  if (sched.n_steps < 0)
    throw validation_error("--resume: snapshot is beyond schedule.n_steps");

  auto on_snapshot = [&](const Wavefunction& w, long step) {
    io::write_snapshot((fs::path(dir) / io::snapshot_name(start_step + step)).string(), w);
  };
  auto per_step = [&](const Wavefunction& w, long step) {
    reactant_probe.observe(w, start_step + step);
    product_probe.observe(w, start_step + step);
  };
  reactant_probe.observe(*psi, start_step);
  product_probe.observe(*psi, start_step);

  const RunResult result = propagate(prop, *psi, sched, on_snapshot, per_step);

  io::RunSummaryInputs si{&result, &setup.schedule, &setup.grid,
                          &reactant_probe, &product_probe,
                          setup.packet.velocity};
  io::write_text_file((fs::path(dir) / "summary.json").string(),
                      io::run_summary_json(si));
  char line[160];
  std::snprintf(line, sizeof line,
                "steps %ld  norm %.8f  absorbed reactant %.8f  product %.8f",
                setup.schedule.n_steps, result.final_norm,
                result.ledger.absorbed_reactant, result.ledger.absorbed_product);
  info(g, line);
  info(g, "wrote " + (fs::path(dir) / "summary.json").string());
  return exit_ok;
}

// ---------------- analyze ----------------

int cmd_analyze(const GlobalOpts& g, const std::string& run_dir,
                const std::string& snapshot_path, double guess_q1_a,
                double guess_q2_a) {
  RunConfig cfg = load_config(g);
  require_blocks(cfg, {"reaction", "simulator", "grid", "analysis"});
  RunSetup setup(std::move(cfg));
  const ScaledSurface scaled(setup.surface, setup.factors, setup.scaling);

  io::OutputDirLock lock(g.out_dir);
  const fs::path out(g.out_dir);

  // saddle information is part of every analysis
  double g1 = guess_q1_a > 0 ? guess_q1_a * units::angstrom_to_m
                             : 1.6 * setup.surface.ab().equilibrium_distance;
  double g2 = guess_q2_a > 0 ? guess_q2_a * units::angstrom_to_m
                             : 1.05 * setup.surface.bc().equilibrium_distance;
  const SaddleInfo saddle =
      find_saddle(setup.surface, g1, g2, setup.factors, setup.scaling);
  io::write_text_file((out / "saddle.json").string(), io::saddle_json(saddle));

  Populations ledger_route{}, region_route{};
  std::optional<VibrationalDistribution> vib;
  std::vector<double> diagnostic;
  const char* diag_name = "";

  if (!run_dir.empty()) {
    const json summary = json::parse(io::read_text_file(
        (fs::path(run_dir) / "summary.json").string()));
    const long n_steps = summary["schedule"]["n_steps"].get<long>();
    const double dt = summary["schedule"]["dt_s"].get<double>();
    ledger_route.reactant = summary["absorbed"]["reactant"].get<double>();
    ledger_route.product = summary["absorbed"]["product"].get<double>();
    ledger_route.interaction = summary["final_norm"].get<double>();
    const Wavefunction psi = io::read_snapshot(
        (fs::path(run_dir) / io::snapshot_name(n_steps)).string(), setup.grid,
        double(n_steps) * dt);
    region_route = region_populations(psi, setup.partition, setup.geom);
    // flux-accumulated product distribution in the configured basis
    const char* primary =
        setup.cfg.basis.kind == VibBasis::harmonic ? "harmonic" : "morse";
    diag_name = setup.cfg.basis.kind == VibBasis::harmonic ? "morse" : "harmonic";
    const json& probe = summary["flux"]["product"]["populations"];
    VibrationalDistribution v;
    v.channel = Channel::product;
    v.basis = setup.cfg.basis.kind;
    v.populations = probe[primary].get<std::vector<double>>();
    if (probe.contains(diag_name))
      diagnostic = probe[diag_name].get<std::vector<double>>();
    const double total = summary["flux"]["product"]["total_flux"].get<double>();
    double captured = 0.0;
    for (double p : v.populations) captured += p;
    v.channel_population = total;
    v.residual = total - captured;
    vib = v;
  } else if (!snapshot_path.empty()) {
    const Wavefunction psi = io::read_snapshot(snapshot_path, setup.grid, 0.0);
    region_route = region_populations(psi, setup.partition, setup.geom);
    ledger_route = region_route;  // no ledger without a run
    vib = project_snapshot(psi, setup.partition, Channel::product,
                           setup.cfg.basis, setup.geom, &scaled);
  } else {
    throw validation_error("analyze: provide --run <dir> or --snapshot <file>");
  }

  io::write_text_file((out / "branching_ratios.json").string(),
                      io::branching_json(ledger_route, region_route));
  io::write_text_file((out / "vib_distribution.json").string(),
                      io::vib_distribution_json(*vib, diagnostic, diag_name));
  info(g, "wrote " + (out / "branching_ratios.json").string() + ", " +
              (out / "vib_distribution.json").string() + ", " +
              (out / "saddle.json").string());
  return exit_ok;
}

// ---------------- fit ----------------

int cmd_fit(const GlobalOpts& g, const std::string& problem_path) {
  RunConfig cfg = load_config(g);
  require_blocks(cfg, {"reaction"});
  const json spec = json::parse(io::read_text_file(problem_path));

  FitProblem problem{cfg.surface(), {}, {}};
  std::vector<double> start;
  for (const json& p : spec.at("parameters")) {
    const auto which = fit_parameter_from_name(p.at("name").get<std::string>());
    if (!which)
      throw validation_error("fit: unknown parameter '" +
                             p.at("name").get<std::string>() + "'");
    problem.params.push_back(
        {*which, p.at("lower").get<double>(), p.at("upper").get<double>()});
    start.push_back(p.at("start").get<double>());
  }
  for (const json& t : spec.at("objectives")) {
    const auto obs = observable_from_name(t.at("observable").get<std::string>());
    if (!obs)
      throw validation_error("fit: unknown observable '" +
                             t.at("observable").get<std::string>() + "'");
    problem.objective.push_back({*obs, t.at("target").get<double>(),
                                 t.value("weight", 1.0)});
  }
  if (spec.contains("saddle_guess_q1_m"))
    problem.saddle_guess_q1 = spec["saddle_guess_q1_m"].get<double>();
  if (spec.contains("saddle_guess_q2_m"))
    problem.saddle_guess_q2 = spec["saddle_guess_q2_m"].get<double>();
  if (spec.contains("branching_config")) {
    RunConfig bc = parse_config_file(spec["branching_config"].get<std::string>());
    require_blocks(bc, {"reaction", "simulator", "grid", "packet", "cap",
                        "schedule"});
    RunSetup bs(std::move(bc));
    problem.branching = BranchingPreset{bs.cfg.masses, bs.scaling, bs.grid,
                                        bs.packet, bs.cfg.cap, bs.schedule,
                                        problem.saddle_guess_q1,
                                        problem.saddle_guess_q2};
  }
  FitOptions opts;
  if (spec.contains("options")) {
    const json& o = spec["options"];
    opts.max_evaluations = o.value("max_evaluations", opts.max_evaluations);
    opts.simplex_tolerance = o.value("simplex_tolerance", opts.simplex_tolerance);
    opts.objective_tolerance =
        o.value("objective_tolerance", opts.objective_tolerance);
    opts.initial_step = o.value("initial_step", opts.initial_step);
  }

  const FitResult result = fit(problem, start, opts);

  json out;
  for (std::size_t i = 0; i < problem.params.size(); ++i)
    out["parameters"][fit_parameter_name(problem.params[i].which)] =
        result.parameters[i];
  out["objective"] = result.objective;
  out["evaluations"] = result.evaluations;
  out["converged"] = result.converged;
  out["penalty_hit"] = result.penalty_hit;
  if (!result.preset_note.empty()) out["preset"] = result.preset_note;

  io::OutputDirLock lock(g.out_dir);
  io::write_text_file((fs::path(g.out_dir) / "fit_result.json").string(),
                      out.dump(2) + "\n");
  info(g, "wrote " + (fs::path(g.out_dir) / "fit_result.json").string());
  if (!result.converged) {
    info(g, "fit did not converge within the evaluation budget");
    return exit_numerical;
  }
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"collinear reaction dynamics on cold-atom waveguides"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--config", g.config_path, "configuration file");
  app.add_option("--out", g.out_dir, "output directory")->capture_default_str();
  app.add_option("--threads", g.threads, "worker threads (reserved)")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "rng seed (reserved; runs are deterministic)");
  app.add_flag("--quiet", g.quiet, "suppress progress output");
  app.add_option("--kernels", g.kernels, "kernel variant: auto|scalar|avx2|neon")
      ->capture_default_str();

  auto* design = app.add_subcommand("design", "waveguide design report");

  auto* surface = app.add_subcommand("surface", "potential contour raster");
  std::string frame = "chem";
  double q1_lo = 0.5, q1_hi = 4.0, q2_lo = 0.5, q2_hi = 4.0, clip = -10.0;
  std::size_t rn1 = 401, rn2 = 401;
  surface->add_option("--frame", frame, "chem|sim")->capture_default_str();
  surface->add_option("--q1-lo", q1_lo, "window (angstrom for chem, um for sim)");
  surface->add_option("--q1-hi", q1_hi, "");
  surface->add_option("--q2-lo", q2_lo, "");
  surface->add_option("--q2-hi", q2_hi, "");
  surface->add_option("--n1", rn1, "raster resolution");
  surface->add_option("--n2", rn2, "");
  surface->add_option("--clip", clip, "clip level in zero-point units")
      ->capture_default_str();

  auto* propagate_cmd = app.add_subcommand("propagate", "run the wavepacket");
  std::string resume;
  propagate_cmd->add_option("--resume", resume, "snapshot file to continue from");

  auto* analyze = app.add_subcommand("analyze", "branching and vibrational analysis");
  std::string run_dir, snapshot;
  double sg1 = 0.0, sg2 = 0.0;
  analyze->add_option("--run", run_dir, "run directory with summary.json");
  analyze->add_option("--snapshot", snapshot, "single snapshot CSV");
  analyze->add_option("--saddle-guess-q1", sg1, "saddle guess, angstrom");
  analyze->add_option("--saddle-guess-q2", sg2, "saddle guess, angstrom");

  auto* fit_cmd = app.add_subcommand("fit", "inverse surface fit");
  std::string problem_path;
  fit_cmd->add_option("--problem", problem_path, "fit_problem.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_validation;
  }

  try {
    apply_kernel_choice(g.kernels);
    if (design->parsed()) return cmd_design(g);
    if (surface->parsed())
      return cmd_surface(g, frame, q1_lo, q1_hi, q2_lo, q2_hi, rn1, rn2, clip);
    if (propagate_cmd->parsed()) return cmd_propagate(g, resume);
    if (analyze->parsed()) return cmd_analyze(g, run_dir, snapshot, sg1, sg2);
    if (fit_cmd->parsed()) return cmd_fit(g, problem_path);
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_validation;
  } catch (const numerical_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_numerical;
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_io;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_numerical;
  }
  return exit_ok;
}
