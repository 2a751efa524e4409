#pragma once

#include <string>

#include "reactwave/analysis.hpp"
#include "reactwave/config.hpp"
#include "reactwave/frames.hpp"
#include "reactwave/grid.hpp"

namespace reactwave::io {

// snap_<step:08d>.csv inside the run directory
std::string snapshot_name(long step);

// CSV raster: Q1, Q2, Re psi, Im psi, |psi|^2, full double precision.
void write_snapshot(const std::string& path, const Wavefunction& psi);
// Reads a snapshot back onto the given grid (bit-exact round trip).
Wavefunction read_snapshot(const std::string& path, const Grid2D& grid,
                           double time);

std::string design_report_json(const DesignReport& report);
std::string design_report_table(const DesignReport& report);

struct RunSummaryInputs {
  const RunResult* result;
  const Schedule* schedule;
  const Grid2D* grid;
  const FluxProbe* reactant_probe;  // may be null
  const FluxProbe* product_probe;   // may be null
  double initial_velocity;
};

std::string run_summary_json(const RunSummaryInputs& in);

std::string branching_json(const Populations& ledger_route,
                           const Populations& region_route);
std::string vib_distribution_json(const VibrationalDistribution& primary,
                                  const std::vector<double>& diagnostic_other,
                                  const char* diagnostic_basis_name);
std::string saddle_json(const SaddleInfo& info);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// Creates <dir> if needed and takes an exclusive advisory lock file inside;
// refuses to start when another writer holds it. Removed on destruction.
class OutputDirLock {
 public:
  explicit OutputDirLock(const std::string& dir);
  ~OutputDirLock();
  OutputDirLock(const OutputDirLock&) = delete;
  OutputDirLock& operator=(const OutputDirLock&) = delete;
  const std::string& dir() const { return dir_; }

 private:
  std::string dir_;
  std::string lock_path_;
};

}  // namespace reactwave::io
