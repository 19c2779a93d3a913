#include "kqet/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "kqet/eigensolver.hpp"
#include "kqet/entanglement.hpp"
#include "kqet/error.hpp"
#include "kqet/protocol.hpp"

namespace kqet {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void set_param(ModelParams& p, SweepParam which, double v) {
  switch (which) {
    case SweepParam::kDelta:
      p.delta = v;
      break;
    case SweepParam::kB:
      p.b = v;
      break;
    case SweepParam::kJk:
      p.jk = v;
      break;
  }
}

SweepRow failed_row(const ModelParams& p, std::string error) {
  SweepRow r{};
  r.delta = p.delta;
  r.b = p.b;
  r.jk = p.jk;
  r.d = p.coupled_site - 1;
  for (double* f : {&r.e0, &r.gap, &r.m, &r.s_lr, &r.xi, &r.eta, &r.theta, &r.e_b_closed,
                    &r.e_b_direct, &r.e_teleported, &r.s_a_comp, &r.bound_margin}) {
    *f = kNaN;
  }
  r.error = std::move(error);
  return r;
}

}  // namespace

std::string_view param_name(SweepParam p) noexcept {
  switch (p) {
    case SweepParam::kDelta:
      return "Delta";
    case SweepParam::kB:
      return "B";
    case SweepParam::kJk:
      return "Jk";
  }
  return "?";
}

SweepParam parse_param(std::string_view name) {
  if (name == "Delta") return SweepParam::kDelta;
  if (name == "B") return SweepParam::kB;
  if (name == "Jk") return SweepParam::kJk;
  throw StructuralError("unknown sweep axis '" + std::string(name) +
                        "' (expected Delta, B or Jk)");
}

double GridAxis::value(int i) const noexcept {
  if (i <= 0) return lo;
  if (i >= steps - 1) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

void validate_grid(const SweepConfig& c) {
  auto check_axis = [](const GridAxis& a, const char* which) {
    if (a.steps < 2) {
      throw StructuralError(std::string(which) + " needs at least 2 steps");
    }
    if (!(a.lo < a.hi) || !std::isfinite(a.lo) || !std::isfinite(a.hi)) {
      throw StructuralError(std::string(which) + " needs finite lo < hi");
    }
  };
  check_axis(c.axis1, "axis1");
  if (c.axis2) {
    check_axis(*c.axis2, "axis2");
    if (c.axis2->param == c.axis1.param) {
      throw StructuralError("axis1 and axis2 sweep the same parameter");
    }
  }
  for (const auto& o : c.outputs) column_value(SweepRow{}, o);
  if (c.workers < 0) throw StructuralError("workers must be >= 0");
}

void validate_sweep(const SweepConfig& c) {
  validate_grid(c);
  validate_protocol(c.base);
}

SweepConfig default_sweep_config() {
  SweepConfig c;
  c.axis1 = {SweepParam::kDelta, -2.0, 2.0, 41};
  c.axis2 = GridAxis{SweepParam::kB, 0.0, 1.5, 41};
  return c;
}

SweepRow evaluate_point(const ModelParams& p) {
  try {
    validate_protocol(p);
    const OperatorSum h = build_hamiltonian(p);
    const GroundResult ground = ground_state(h, p.num_sites);
    const QetResult q = run_protocol(p, ground);
    const StateVector& g = ground.state;

    SweepRow r{};
    r.delta = p.delta;
    r.b = p.b;
    r.jk = p.jk;
    r.d = p.coupled_site - 1;
    r.e0 = ground.e0;
    r.gap = ground.gap;
    r.m = magnetization(g);
    r.s_lr = half_chain_entropy(g);
    r.xi = q.xi;
    r.eta = q.eta;
    r.theta = q.theta;
    r.e_b_closed = q.e_b_closed;
    r.e_b_direct = q.e_b_direct;
    r.e_teleported = q.e_teleported;
    r.s_a_comp = von_neumann_entropy(reduced_density(g, {p.n_a}));
    const double norm_b = operator_norm(incident_block(h, p.n_b, g).op);
    r.bound_margin = bound_eq10_margin(r.s_a_comp, r.e_teleported, norm_b);
    r.degenerate = ground.degenerate;
    return r;
  } catch (const Error& e) {
    return failed_row(p, e.what());
  }
}

SweepTable run_grid(const SweepConfig& config) {
  validate_sweep(config);
  const int n1 = config.axis1.steps;
  const int n2 = config.axis2 ? config.axis2->steps : 1;
  const std::size_t total = static_cast<std::size_t>(n1) * n2;

  std::vector<SweepRow> rows(total);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t idx = next++; idx < total; idx = next++) {
      const int i1 = static_cast<int>(idx / n2);
      const int i2 = static_cast<int>(idx % n2);
      ModelParams p = config.base;
      set_param(p, config.axis1.param, config.axis1.value(i1));
      if (config.axis2) set_param(p, config.axis2->param, config.axis2->value(i2));
      SweepRow r = evaluate_point(p);
      r.i1 = i1;
      r.i2 = i2;
      rows[idx] = std::move(r);
    }
  };

  unsigned workers = config.workers > 0 ? static_cast<unsigned>(config.workers)
                                        : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, total));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return {config.axis1, config.axis2, std::move(rows)};
}

std::vector<SweepRow> RydbergScan::rows() const {
  std::vector<SweepRow> out = d1.rows;
  out.insert(out.end(), d2.rows.begin(), d2.rows.end());
  return out;
}

SweepConfig rydberg_defaults() {
  SweepConfig c;
  c.base.num_sites = 8;
  c.base.n_a = 5;
  c.base.n_b = 8;
  c.base.coupled_site = 2;
  c.base.j = 0.5;
  c.base.jk = 0.2;
  c.axis1 = {SweepParam::kB, 0.0, 1.5, 41};
  c.axis2.reset();
  c.outputs = {"e_teleported"};
  return c;
}

RydbergScan rydberg_scan(const SweepConfig& config) {
  if (config.axis1.param != SweepParam::kB || config.axis2) {
    throw StructuralError("the Rydberg scan sweeps B along a single axis");
  }
  RydbergScan scan;
  scan.jk_d1 = config.base.jk;
  scan.jk_d2 = config.base.jk / std::pow(2.0, kRydbergExponent);

  SweepConfig near = config;
  near.base.coupled_site = 2;
  near.base.jk = scan.jk_d1;
  SweepConfig far = config;
  far.base.coupled_site = 3;
  far.base.jk = scan.jk_d2;
  scan.d1 = run_grid(near);
  scan.d2 = run_grid(far);
  return scan;
}

// ---------------------------------------------------------------------------
// Output

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {
      "delta", "b",          "jk",         "d",          "e0",           "gap",
      "m",     "s_lr",       "xi",         "eta",        "theta",        "e_b_closed",
      "e_b_direct", "e_teleported", "s_a_comp", "bound_margin", "degenerate"};
  return cols;
}

double column_value(const SweepRow& r, std::string_view c) {
  if (c == "delta") return r.delta;
  if (c == "b") return r.b;
  if (c == "jk") return r.jk;
  if (c == "d") return r.d;
  if (c == "e0") return r.e0;
  if (c == "gap") return r.gap;
  if (c == "m") return r.m;
  if (c == "s_lr") return r.s_lr;
  if (c == "xi") return r.xi;
  if (c == "eta") return r.eta;
  if (c == "theta") return r.theta;
  if (c == "e_b_closed") return r.e_b_closed;
  if (c == "e_b_direct") return r.e_b_direct;
  if (c == "e_teleported") return r.e_teleported;
  if (c == "s_a_comp") return r.s_a_comp;
  if (c == "bound_margin") return r.bound_margin;
  if (c == "degenerate") return r.degenerate ? 1.0 : 0.0;
  throw StructuralError("unknown column '" + std::string(c) + "'");
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string emit_csv(const std::vector<SweepRow>& rows) {
  if (rows.empty()) throw StructuralError("no rows to write");
  std::string out;
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out += ',';
    out += cols[i];
  }
  out += '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i) out += ',';
      if (cols[i] == "d") {
        out += std::to_string(r.d);
      } else if (cols[i] == "degenerate") {
        out += r.degenerate ? '1' : '0';
      } else {
        out += format_double(column_value(r, cols[i]));
      }
    }
    out += '\n';
  }
  return out;
}

namespace {

struct Rgb {
  int r, g, b;
};

constexpr Rgb kRampLow{68, 1, 84};
constexpr Rgb kRampHigh{253, 231, 37};
constexpr const char* kMissingFill = "#bdbdbd";

std::string hex(Rgb c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
  return buf;
}

Rgb ramp(double t) {
  t = std::clamp(t, 0.0, 1.0);
  auto lerp = [t](int a, int b) {
    return static_cast<int>(std::lround(a + (b - a) * t));
  };
  return {lerp(kRampLow.r, kRampHigh.r), lerp(kRampLow.g, kRampHigh.g),
          lerp(kRampLow.b, kRampHigh.b)};
}

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

}  // namespace

std::string emit_heatmap(const SweepTable& table, std::string_view observable) {
  if (!table.axis2) throw StructuralError("heatmap needs a two-axis sweep");
  const int n1 = table.axis1.steps;
  const int n2 = table.axis2->steps;
  if (table.rows.size() != static_cast<std::size_t>(n1) * n2) {
    throw StructuralError("row count does not match the grid shape");
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& r : table.rows) {
    const double v = column_value(r, observable);
    if (std::isnan(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const bool any = lo <= hi;

  constexpr int cell = 12, left = 70, top = 40, legend_w = 16, gap = 30;
  const int plot_w = n1 * cell, plot_h = n2 * cell;
  const int width = left + plot_w + gap + legend_w + 90;
  const int height = top + plot_h + 60;

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
     << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  os << "<defs><linearGradient id=\"ramp\" x1=\"0\" y1=\"1\" x2=\"0\" y2=\"0\">"
     << "<stop offset=\"0\" stop-color=\"" << hex(kRampLow) << "\"/>"
     << "<stop offset=\"1\" stop-color=\"" << hex(kRampHigh) << "\"/>"
     << "</linearGradient></defs>\n";
  os << "<text x=\"" << left << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">"
     << escape(observable) << "</text>\n";

  for (const auto& r : table.rows) {
    const double v = column_value(r, observable);
    std::string fill = kMissingFill;
    if (!std::isnan(v)) fill = hex(ramp(hi > lo ? (v - lo) / (hi - lo) : 0.0));
    // axis2 grows upward.
    const int x = left + r.i1 * cell;
    const int y = top + (n2 - 1 - r.i2) * cell;
    os << "<rect class=\"cell\" x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell
       << "\" height=\"" << cell << "\" fill=\"" << fill << "\"/>\n";
  }

  const auto axis_label = [](const GridAxis& a) {
    return std::string(param_name(a.param)) + " [" + format_double(a.lo) + ", " +
           format_double(a.hi) + "]";
  };
  os << "<text class=\"axis\" x=\"" << left + plot_w / 2 << "\" y=\"" << top + plot_h + 30
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
     << axis_label(table.axis1) << "</text>\n";
  os << "<text class=\"axis\" x=\"15\" y=\"" << top + plot_h / 2
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
     << "transform=\"rotate(-90 15 " << top + plot_h / 2 << ")\">"
     << axis_label(*table.axis2) << "</text>\n";

  const int lx = left + plot_w + gap;
  os << "<rect class=\"legend\" x=\"" << lx << "\" y=\"" << top << "\" width=\"" << legend_w
     << "\" height=\"" << plot_h << "\" fill=\"url(#ramp)\"/>\n";
  os << "<text class=\"legend-max\" x=\"" << lx + legend_w + 4 << "\" y=\"" << top + 10
     << "\" font-family=\"sans-serif\" font-size=\"11\">" << (any ? format_double(hi) : "nan")
     << "</text>\n";
  os << "<text class=\"legend-min\" x=\"" << lx + legend_w + 4 << "\" y=\"" << top + plot_h
     << "\" font-family=\"sans-serif\" font-size=\"11\">" << (any ? format_double(lo) : "nan")
     << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

PeakAlignment correlate_peaks(const SweepTable& table, std::string_view obs_a,
                              std::string_view obs_b) {
  if (!table.axis2) throw StructuralError("peak correlation needs a two-axis sweep");
  const int n1 = table.axis1.steps;
  const int n2 = table.axis2->steps;
  if (table.rows.size() != static_cast<std::size_t>(n1) * n2) {
    throw StructuralError("row count does not match the grid shape");
  }
  // Observables such as the half-chain entropy are flat across whole
  // plateaus; values within kPeakTieTolerance of the maximum count as ties and
  // the first index wins, so roundoff cannot move the peak.
  const auto argmax = [&](int i1, std::string_view col) {
    double best_v = -std::numeric_limits<double>::infinity();
    for (int i2 = 0; i2 < n2; ++i2) {
      const double v = column_value(table.rows[static_cast<std::size_t>(i1) * n2 + i2], col);
      if (!std::isnan(v)) best_v = std::max(best_v, v);
    }
    if (!std::isfinite(best_v)) return -1;
    const double floor = best_v - kPeakTieTolerance * std::max(1.0, std::abs(best_v));
    for (int i2 = 0; i2 < n2; ++i2) {
      const double v = column_value(table.rows[static_cast<std::size_t>(i1) * n2 + i2], col);
      if (!std::isnan(v) && v >= floor) return i2;
    }
    return -1;
  };
  PeakAlignment out;
  for (int i1 = 0; i1 < n1; ++i1) {
    const int a = argmax(i1, obs_a);
    const int b = argmax(i1, obs_b);
    out.peaks.emplace_back(a, b);
    ++out.slices;
    if (a >= 0 && b >= 0 && std::abs(a - b) <= 1) ++out.aligned;
  }
  out.fraction = out.slices ? static_cast<double>(out.aligned) / out.slices : 0.0;
  return out;
}

}  // namespace kqet
