#include "reactwave/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "reactwave/constants.hpp"

namespace reactwave::io {

namespace fs = std::filesystem;
using nlohmann::json;

std::string snapshot_name(long step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%08ld.csv", step);
  return buf;
}

void write_snapshot(const std::string& path, const Wavefunction& psi) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw io_error("cannot write snapshot '" + path + "'");
  std::fputs("Q1,Q2,re_psi,im_psi,abs2\n", f);
  const Grid2D& g = psi.grid;
  for (std::size_t i = 0; i < g.n1; ++i) {
    const double x1 = g.x1(i);
    for (std::size_t j = 0; j < g.n2; ++j) {
      const cdouble a = psi.at(i, j);
      std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g\n", x1, g.x2(j), a.real(),
                   a.imag(), std::norm(a));
    }
  }
  if (std::fclose(f) != 0) throw io_error("write failed for '" + path + "'");
}

Wavefunction read_snapshot(const std::string& path, const Grid2D& grid,
                           double time) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot read snapshot '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line.rfind("Q1,Q2,", 0) != 0)
    throw io_error("snapshot '" + path + "': bad header");
  Wavefunction psi(grid);
  std::size_t count = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double q1, q2, re, im, abs2;
    if (std::sscanf(line.c_str(), "%lg,%lg,%lg,%lg,%lg", &q1, &q2, &re, &im,
                    &abs2) != 5)
      throw io_error("snapshot '" + path + "': malformed row " +
                     std::to_string(count + 2));
    if (count >= grid.size())
      throw io_error("snapshot '" + path + "': more rows than grid cells");
    psi.amp[count++] = {re, im};
  }
  if (count != grid.size())
    throw io_error("snapshot '" + path + "': row count does not match grid");
  psi.time = time;
  return psi;
}

std::string design_report_json(const DesignReport& r) {
  json j;
  j["nu_tilde_1_hz"] = r.nu_tilde_1;
  j["nu_tilde_2_hz"] = r.nu_tilde_2;
  j["v_tilde_1_uK"] = r.v_tilde_1 * units::joule_to_microkelvin;
  j["v_tilde_2_uK"] = r.v_tilde_2 * units::joule_to_microkelvin;
  j["v_q1_mm_s"] = r.v_q1 * units::m_per_s_to_mm_per_s;
  j["l"] = r.l;
  j["m_tilde_kg"] = r.m_tilde;
  j["tau_scale"] = r.tau_scale;
  j["chi_10_m"] = r.chi_10;
  j["chi_20_m"] = r.chi_20;
  j["k_tilde_1_n_per_m"] = r.k_tilde_1;
  j["k_tilde_2_n_per_m"] = r.k_tilde_2;
  return j.dump(2) + "\n";
}

std::string design_report_table(const DesignReport& r) {
  std::ostringstream os;
  char buf[128];
  auto row = [&](const char* name, double value, const char* unit) {
    std::snprintf(buf, sizeof buf, "  %-28s %14.6g %s\n", name, value, unit);
    os << buf;
  };
  os << "waveguide design parameters\n";
  row("nu_tilde_1 (products)", r.nu_tilde_1 * units::hz_to_khz, "kHz");
  row("nu_tilde_2 (reactants)", r.nu_tilde_2 * units::hz_to_khz, "kHz");
  row("V_tilde_1 depth", r.v_tilde_1 * units::joule_to_microkelvin, "uK");
  row("V_tilde_2 depth", r.v_tilde_2 * units::joule_to_microkelvin, "uK");
  row("launch velocity v_Q1", r.v_q1 * units::m_per_s_to_mm_per_s, "mm/s");
  row("length scale (channel 1)", r.length_scale_1 * 1e-4, "um per angstrom");
  row("length scale (channel 2)", r.length_scale_2 * 1e-4, "um per angstrom");
  row("chi_10 offset", r.chi_10 * 1e6, "um");
  row("chi_20 offset", r.chi_20 * 1e6, "um");
  row("K_tilde_1", r.k_tilde_1, "N/m");
  row("K_tilde_2", r.k_tilde_2, "N/m");
  row("tau scale (t_sim/t_chem)", r.tau_scale, "");
  row("l", r.l, "");
  row("m_tilde", r.m_tilde, "kg");
  return os.str();
}

namespace {

json probe_json(const FluxProbe& probe) {
  json j;
  j["line_position_m"] = probe.line_position();
  j["stride"] = probe.stride();
  j["total_flux"] = probe.total_flux();
  for (std::size_t b = 0; b < probe.basis_count(); ++b) {
    const char* name =
        probe.basis(b).kind == VibBasis::harmonic ? "harmonic" : "morse";
    j["populations"][name] = probe.populations(b);
  }
  return j;
}

}  // namespace

std::string run_summary_json(const RunSummaryInputs& in) {
  json j;
  j["schedule"]["dt_s"] = in.schedule->dt;
  j["schedule"]["n_steps"] = in.schedule->n_steps;
  j["schedule"]["snapshot_stride"] = in.schedule->snapshot_stride;
  j["grid"]["n1"] = in.grid->n1;
  j["grid"]["n2"] = in.grid->n2;
  j["grid"]["q1_min_m"] = in.grid->q1_min;
  j["grid"]["q1_max_m"] = in.grid->q1_max();
  j["grid"]["q2_min_m"] = in.grid->q2_min;
  j["grid"]["q2_max_m"] = in.grid->q2_max();
  j["initial_velocity_m_s"] = in.initial_velocity;
  j["initial_norm"] = in.result->initial_norm;
  j["final_norm"] = in.result->final_norm;
  j["absorbed"]["reactant"] = in.result->ledger.absorbed_reactant;
  j["absorbed"]["product"] = in.result->ledger.absorbed_product;
  json series = json::array();
  for (const RunSeriesEntry& e : in.result->series)
    series.push_back({{"step", e.step},
                      {"time_s", e.time},
                      {"norm", e.norm},
                      {"absorbed_reactant", e.absorbed_reactant},
                      {"absorbed_product", e.absorbed_product}});
  j["series"] = series;
  if (in.reactant_probe) j["flux"]["reactant"] = probe_json(*in.reactant_probe);
  if (in.product_probe) j["flux"]["product"] = probe_json(*in.product_probe);
  return j.dump(2) + "\n";
}

std::string branching_json(const Populations& ledger_route,
                           const Populations& region_route) {
  json j;
  j["ledger"]["reactant"] = ledger_route.reactant;
  j["ledger"]["product"] = ledger_route.product;
  j["ledger"]["interaction"] = ledger_route.interaction;
  j["region"]["reactant"] = region_route.reactant;
  j["region"]["product"] = region_route.product;
  j["region"]["interaction"] = region_route.interaction;
  return j.dump(2) + "\n";
}

std::string vib_distribution_json(const VibrationalDistribution& primary,
                                  const std::vector<double>& diagnostic_other,
                                  const char* diagnostic_basis_name) {
  json j;
  j["channel"] = primary.channel == Channel::reactant ? "reactant" : "product";
  j["basis"] = primary.basis == VibBasis::harmonic ? "harmonic" : "morse";
  json dist = json::array();
  for (std::size_t n = 0; n < primary.populations.size(); ++n)
    dist.push_back({{"n", n}, {"p", primary.populations[n]}});
  j["populations"] = dist;
  j["residual"] = primary.residual;
  j["channel_population"] = primary.channel_population;
  j["truncated"] = primary.truncated;
  if (!diagnostic_other.empty()) {
    json d = json::array();
    for (std::size_t n = 0; n < diagnostic_other.size(); ++n)
      d.push_back({{"n", n}, {"p", diagnostic_other[n]}});
    j["diagnostic"][diagnostic_basis_name] = d;
  }
  return j.dump(2) + "\n";
}

std::string saddle_json(const SaddleInfo& info) {
  json j;
  j["q1_m"] = info.q1;
  j["q2_m"] = info.q2;
  j["energy_j"] = info.energy;
  j["barrier_j"] = info.barrier;
  j["hessian_eigs_j_m2"] = {info.hessian_eigs[0], info.hessian_eigs[1]};
  j["sim_q1_m"] = info.sim_q1;
  j["sim_q2_m"] = info.sim_q2;
  j["iterations"] = info.iterations;
  return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw io_error("write failed for '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

OutputDirLock::OutputDirLock(const std::string& dir) : dir_(dir) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw io_error("cannot create output directory '" + dir_ + "'");
  lock_path_ = (fs::path(dir_) / ".reactwave.lock").string();
  if (fs::exists(lock_path_))
    throw io_error("output directory '" + dir_ +
                   "' is locked by another run (remove " + lock_path_ +
                   " if stale)");
  std::ofstream lock(lock_path_);
  if (!lock) throw io_error("cannot create lock file in '" + dir_ + "'");
  lock << "locked\n";
}

OutputDirLock::~OutputDirLock() {
  std::error_code ec;
  fs::remove(lock_path_, ec);
}

}  // namespace reactwave::io
