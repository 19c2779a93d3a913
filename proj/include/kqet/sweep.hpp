#pragma once

// Parameter-grid driver. Grid points are evaluated concurrently and
// assembled in row-major order (axis1 outer, axis2 inner), so output does
// not depend on the worker count.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kqet/model.hpp"

namespace kqet {

enum class SweepParam { kDelta, kB, kJk };

std::string_view param_name(SweepParam p) noexcept;
SweepParam parse_param(std::string_view name);

struct GridAxis {
  SweepParam param = SweepParam::kDelta;
  double lo = 0.0;
  double hi = 1.0;
  int steps = 2;

  /// Index-based linspace; value(0) == lo and value(steps-1) == hi exactly.
  double value(int i) const noexcept;
  friend bool operator==(const GridAxis&, const GridAxis&) = default;
};

struct SweepConfig {
  ModelParams base;
  GridAxis axis1;
  std::optional<GridAxis> axis2;
  /// Columns to render as heatmaps.
  std::vector<std::string> outputs = {"s_lr", "e_teleported"};
  bool emit_csv = true;
  bool emit_svg = false;
  /// 0 picks std::thread::hardware_concurrency().
  int workers = 0;

  friend bool operator==(const SweepConfig&, const SweepConfig&) = default;
};

/// Axis shapes, output names and worker count only.
void validate_grid(const SweepConfig& c);
/// validate_grid plus the protocol constraints on the base parameters.
void validate_sweep(const SweepConfig& c);

/// Default grid: Delta in [-2, 2] and B in [0, 1.5], 41 steps each.
SweepConfig default_sweep_config();

struct SweepRow {
  double delta, b, jk;
  int d;  // coupled_site - 1
  double e0, gap, m, s_lr;
  double xi, eta, theta;
  double e_b_closed, e_b_direct, e_teleported;
  double s_a_comp, bound_margin;
  bool degenerate;
  int i1 = 0, i2 = 0;
  /// Nonempty when the point failed; numeric fields are then NaN.
  std::string error;
};

struct SweepTable {
  GridAxis axis1;
  std::optional<GridAxis> axis2;
  std::vector<SweepRow> rows;
};

/// All observables at one parameter point. Failures are captured in-row.
SweepRow evaluate_point(const ModelParams& p);

SweepTable run_grid(const SweepConfig& config);

inline constexpr double kRydbergExponent = 6.0;

struct RydbergScan {
  double jk_d1, jk_d2;
  SweepTable d1;  // coupled_site = 2
  SweepTable d2;  // coupled_site = 3

  /// d = 1 rows followed by d = 2 rows.
  std::vector<SweepRow> rows() const;
};

/// N=8, n_A=5, n_B=8, J=0.5, Jk(d=1)=0.2, B in [0, 1.5] with 41 steps.
SweepConfig rydberg_defaults();

/// Two B scans with the impurity bonded at distance d = 1 and d = 2, the
/// latter with Jk scaled by 1/2^6. Uses base.jk as Jk(d=1).
RydbergScan rydberg_scan(const SweepConfig& config);

/// Fixed CSV column order.
const std::vector<std::string>& csv_columns();
double column_value(const SweepRow& row, std::string_view column);

std::string emit_csv(const std::vector<SweepRow>& rows);

/// Self-contained SVG heatmap of one column over a two-axis table.
std::string emit_heatmap(const SweepTable& table, std::string_view observable);

struct PeakAlignment {
  int slices = 0;
  int aligned = 0;
  double fraction = 0.0;
  /// Per axis1 slice, the axis2 argmax of each observable (-1 if all NaN).
  std::vector<std::pair<int, int>> peaks;
};

/// Relative tolerance under which two values tie for a slice maximum.
inline constexpr double kPeakTieTolerance = 1e-10;

PeakAlignment correlate_peaks(const SweepTable& table, std::string_view obs_a,
                              std::string_view obs_b);

/// Shortest round-trip decimal; NaN renders as "nan".
std::string format_double(double v);

}  // namespace kqet
