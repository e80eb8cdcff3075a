#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "cdlab/record.hpp"
#include "cdlab/solver.hpp"
#include "cdlab/torus.hpp"

namespace cdlab::csv {

/// Versions written into the leading comment line of every emitted file.
inline constexpr const char* kSnapshotsHeader = "# cdlab snapshots v1";
inline constexpr const char* kDiagnosticsHeader = "# cdlab diagnostics v1";
inline constexpr const char* kSweepHeader = "# cdlab sweep v1";

/// Reads (x, value) pairs. Lines starting with '#' and a non-numeric first line are skipped.
std::vector<std::pair<double, double>> read_xy(const std::string& path);

/// Periodic piecewise-linear interpolation of (x, value) samples onto the cell centers.
/// x is taken modulo 1; samples need not be sorted.
GridField resample_periodic(std::vector<std::pair<double, double>> samples, const Grid& grid);

void write_snapshots(std::ostream& os, const Trajectory& traj);
void write_diagnostics(std::ostream& os, const std::vector<DiagnosticsRecord>& records);

struct SweepRow {
  double eta = 0.0;
  double distance = 0.0;   // distance to the next rung; NaN on the last rung
  double ratio = 0.0;      // distance / previous distance; NaN when undefined
};
void write_sweep(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace cdlab::csv
