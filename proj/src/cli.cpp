#include "kqet/cli.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kqet/config.hpp"
#include "kqet/eigensolver.hpp"
#include "kqet/entanglement.hpp"
#include "kqet/error.hpp"
#include "kqet/model.hpp"
#include "kqet/protocol.hpp"
#include "kqet/sweep.hpp"

namespace kqet {

namespace {

using nlohmann::ordered_json;

// Raised for bad flag values discovered after CLI11 parsing.
struct UsageError : Error {
  using Error::Error;
};

// Flag storage shared by every subcommand; only the selected one parses.
struct Flags {
  std::string config;
  std::string out;
  int n = 0, coupled_site = 0, na = 0, nb = 0, cut = 0, workers = 0;
  double j = 0, delta = 0, jk = 0, b = 0;
  std::string sigma_a, sigma_b;
  bool bulk_bond = false;
  std::string axis1, axis2, svg_prefix;
  std::vector<std::string> outputs;
  double lo = 0, hi = 0;
  int steps = 0;
};

// One subcommand plus the "was this flag given" hooks that overlay values.
struct Command {
  CLI::App* app = nullptr;
  std::vector<std::function<void(RunConfig&)>> overlays;

  template <class F>
  void overlay(CLI::Option* opt, F f) {
    overlays.push_back([opt, f](RunConfig& c) {
      if (opt->count() > 0) f(c);
    });
  }
  void apply(RunConfig& c) const {
    for (const auto& o : overlays) o(c);
  }
};

Axis axis_flag(const std::string& s, const char* flag) {
  try {
    return parse_axis(s);
  } catch (const StructuralError&) {
    throw UsageError(std::string(flag) + ": expected X, Y or Z, got '" + s + "'");
  }
}

GridAxis parse_axis_spec(const std::string& spec, const char* flag) {
  // name:lo:hi:steps
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  const auto bad = [&](const std::string& why) {
    return UsageError(std::string(flag) + " '" + spec + "': " + why +
                      " (expected name:lo:hi:steps)");
  };
  if (parts.size() != 4) throw bad("wrong field count");
  GridAxis a;
  try {
    a.param = parse_param(parts[0]);
  } catch (const StructuralError& e) {
    throw bad(e.what());
  }
  const auto num = [&](const std::string& s, auto& v) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw bad("bad number '" + s + "'");
  };
  num(parts[1], a.lo);
  num(parts[2], a.hi);
  num(parts[3], a.steps);
  return a;
}

void add_model_flags(Command& cmd, Flags& f) {
  CLI::App* app = cmd.app;
  cmd.overlay(app->add_option("--n", f.n, "Number of sites N including the impurity (2..12)"),
              [&f](RunConfig& c) { c.model.num_sites = f.n; });
  cmd.overlay(app->add_option("--j", f.j, "Bulk exchange J (energy units; default 0.5)"),
              [&f](RunConfig& c) { c.model.j = f.j; });
  cmd.overlay(app->add_option("--delta", f.delta, "XXZ anisotropy Delta (dimensionless)"),
              [&f](RunConfig& c) { c.model.delta = f.delta; });
  cmd.overlay(app->add_option("--jk", f.jk, "Impurity coupling Jk (energy units)"),
              [&f](RunConfig& c) { c.model.jk = f.jk; });
  cmd.overlay(app->add_option("--b", f.b, "Uniform field B (energy units)"),
              [&f](RunConfig& c) { c.model.b = f.b; });
  cmd.overlay(app->add_option("--coupled-site", f.coupled_site,
                              "Host site bonded to the impurity (site index, 1-based)"),
              [&f](RunConfig& c) { c.model.coupled_site = f.coupled_site; });
  cmd.overlay(app->add_option("--na", f.na, "Alice's site n_A (site index, 1-based)"),
              [&f](RunConfig& c) { c.model.n_a = f.na; });
  cmd.overlay(app->add_option("--nb", f.nb, "Bob's site n_B (site index, 1-based)"),
              [&f](RunConfig& c) { c.model.n_b = f.nb; });
  cmd.overlay(app->add_option("--sigma-a", f.sigma_a, "Alice's Pauli axis (X|Y|Z)"),
              [&f](RunConfig& c) { c.model.sigma_a = axis_flag(f.sigma_a, "--sigma-a"); });
  cmd.overlay(app->add_option("--sigma-b", f.sigma_b, "Bob's Pauli axis (X|Y|Z)"),
              [&f](RunConfig& c) { c.model.sigma_b = axis_flag(f.sigma_b, "--sigma-b"); });
  cmd.overlay(app->add_flag("--include-impurity-bulk-bond", f.bulk_bond,
                            "Add a J bond between sites 1 and 2 (flag)"),
              [&f](RunConfig& c) { c.model.include_impurity_bulk_bond = f.bulk_bond; });
}

void add_io_flags(Command& cmd, Flags& f) {
  cmd.app->add_option("--config", f.config, "JSON run configuration (path)");
  cmd.overlay(cmd.app->add_option("--out", f.out, "Output file (path; default stdout)"),
              [&f](RunConfig& c) { c.out_path = f.out; });
}

void add_grid_flags(Command& cmd, Flags& f) {
  cmd.overlay(cmd.app->add_option("--axis1", f.axis1,
                                  "Outer axis name:lo:hi:steps, name in Delta|B|Jk "
                                  "(parameter units)"),
              [&f](RunConfig& c) { c.sweep.axis1 = parse_axis_spec(f.axis1, "--axis1"); });
  cmd.overlay(cmd.app->add_option("--workers", f.workers,
                                  "Worker threads (count; 0 = hardware concurrency)"),
              [&f](RunConfig& c) { c.sweep.workers = f.workers; });
}

void write_output(const RunConfig& c, std::ostream& out, const std::string& text) {
  if (c.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(c.out_path, std::ios::binary);
  if (!file) throw Error("cannot open output file '" + c.out_path + "'");
  file << text;
  if (!file) throw Error("failed writing output file '" + c.out_path + "'");
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot open output file '" + path + "'");
  file << text;
  if (!file) throw Error("failed writing output file '" + path + "'");
}

// Non-finite numbers become JSON null.
ordered_json num(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

void validate_model(const ModelParams& p, bool protocol) {
  try {
    protocol ? validate_protocol(p) : validate_hamiltonian(p);
  } catch (const StructuralError& e) {
    throw UsageError(e.what());
  }
}

void validate_grid_usage(const SweepConfig& s) {
  try {
    validate_grid(s);
  } catch (const StructuralError& e) {
    throw UsageError(e.what());
  }
}

std::string run_ground(const RunConfig& c) {
  validate_model(c.model, false);
  const OperatorSum h = build_hamiltonian(c.model);
  const GroundResult g = ground_state(h, c.model.num_sites);
  ordered_json j;
  j["e0"] = num(g.e0);
  j["gap"] = num(g.gap);
  j["degenerate"] = g.degenerate;
  j["m"] = num(magnetization(g.state));
  j["s_lr"] = num(half_chain_entropy(g.state));
  return j.dump() + "\n";
}

std::string run_qet(const RunConfig& c) {
  validate_model(c.model, true);
  const QetResult r = run_protocol(c.model);
  ordered_json j;
  j["xi"] = num(r.xi);
  j["eta"] = num(r.eta);
  j["theta"] = num(r.theta);
  j["p_plus"] = num(r.p_plus);
  j["e_injected"] = num(r.e_injected);
  j["e_b_closed"] = num(r.e_b_closed);
  j["e_b_direct"] = num(r.e_b_direct);
  j["e_teleported"] = num(r.e_teleported);
  j["degenerate"] = r.degenerate;
  return j.dump() + "\n";
}

std::string run_spectrum(const RunConfig& c) {
  validate_model(c.model, false);
  const int n = c.model.num_sites;
  const int cut = c.cut == 0 ? n / 2 : c.cut;
  if (cut < 1 || cut > n - 1) {
    throw UsageError("--cut " + std::to_string(cut) + " outside [1, " + std::to_string(n - 1) +
                     "]");
  }
  const GroundResult g = ground_state(build_hamiltonian(c.model), n);
  const SchmidtSpectrum s = schmidt_coefficients(g.state, cut);
  ordered_json j;
  j["cut"] = cut;
  j["coefficients"] = s.coefficients;
  j["entropy"] = num(schmidt_entropy(s));
  return j.dump() + "\n";
}

void emit_svgs(const RunConfig& c, const SweepTable& table) {
  for (const std::string& obs : c.sweep.outputs) {
    write_file(c.svg_prefix + "_" + obs + ".svg", emit_heatmap(table, obs));
  }
}

std::string run_sweep(const RunConfig& c) {
  SweepConfig s = c.sweep;
  s.base = c.model;
  validate_grid_usage(s);
  validate_model(s.base, true);
  if (s.emit_svg) {
    if (!s.axis2) throw UsageError("svg output needs a second axis");
    if (c.svg_prefix.empty()) throw UsageError("svg output needs --svg-prefix");
  }
  const SweepTable table = run_grid(s);
  if (s.emit_svg) emit_svgs(c, table);
  return s.emit_csv ? emit_csv(table.rows) : std::string{};
}

std::string run_rydberg(const RunConfig& c) {
  SweepConfig s = c.sweep;
  s.base = c.model;
  s.axis2.reset();
  validate_grid_usage(s);
  if (s.axis1.param != SweepParam::kB) throw UsageError("rydberg scans B only (--axis1 B:lo:hi:steps)");
  validate_model(s.base, true);
  return emit_csv(rydberg_scan(s).rows());
}

std::string run_minimal(const RunConfig& c) {
  const MinimalGrid& g = c.minimal;
  if (!(g.lo > 0.0) || !(g.lo < g.hi) || g.steps < 2) {
    throw UsageError("minimal grid needs 0 < lo < hi and steps >= 2");
  }
  std::string csv = "h,k,lambda,delta_s,e_b,rhs,margin\n";
  for (int i = 0; i < g.steps; ++i) {
    for (int k = 0; k < g.steps; ++k) {
      const MinimalModelCase m = minimal_model_case(g.value(i), g.value(k));
      for (double v : {m.h, m.k, m.lambda, m.delta_s, m.e_b, m.rhs_eq9}) {
        csv += format_double(v);
        csv += ',';
      }
      csv += format_double(m.margin());
      csv += '\n';
    }
  }
  return csv;
}

}  // namespace

int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out,
                       std::ostream& err) {
  CLI::App app{"Energy teleportation in a Kondo-impurity XXZ chain"};
  app.require_subcommand(1);
  Flags f;

  struct Entry {
    std::string name;
    Command cmd;
    std::function<std::string(const RunConfig&)> run;
    bool rydberg_defaults = false;
  };
  std::vector<Entry> entries;
  entries.reserve(6);
  const auto add = [&](const std::string& name, const std::string& help, auto run,
                       bool model_flags = true) -> Command& {
    Entry& e = entries.emplace_back();
    e.name = name;
    e.cmd.app = app.add_subcommand(name, help);
    e.run = run;
    if (model_flags) add_model_flags(e.cmd, f);
    add_io_flags(e.cmd, f);
    return e.cmd;
  };

  add("ground", "Ground energy, gap, magnetization and half-chain entropy", run_ground);
  add("qet", "Full teleportation record for one parameter point", run_qet);
  Command& spectrum =
      add("spectrum", "Ground-state Schmidt coefficients at a cut", run_spectrum);
  spectrum.overlay(spectrum.app->add_option("--cut", f.cut,
                                            "Left block size (sites; 0 = N/2)"),
                   [&f](RunConfig& c) { c.cut = f.cut; });

  Command& sweep = add("sweep", "Parameter grid to CSV and SVG heatmaps", run_sweep);
  add_grid_flags(sweep, f);
  sweep.overlay(sweep.app->add_option("--axis2", f.axis2,
                                      "Inner axis name:lo:hi:steps, or 'none' "
                                      "(parameter units)"),
                [&f](RunConfig& c) {
                  if (f.axis2 == "none") {
                    c.sweep.axis2.reset();
                  } else {
                    c.sweep.axis2 = parse_axis_spec(f.axis2, "--axis2");
                  }
                });
  sweep.overlay(sweep.app->add_option("--outputs", f.outputs,
                                      "Columns rendered as heatmaps (column names)"),
                [&f](RunConfig& c) { c.sweep.outputs = f.outputs; });
  sweep.overlay(sweep.app->add_option("--svg-prefix", f.svg_prefix,
                                      "Write <prefix>_<column>.svg heatmaps (path prefix)"),
                [&f](RunConfig& c) {
                  c.svg_prefix = f.svg_prefix;
                  c.sweep.emit_svg = true;
                });

  Command& rydberg = add("rydberg", "B scan with the impurity at distance d = 1 and d = 2",
                         run_rydberg);
  entries.back().rydberg_defaults = true;
  add_grid_flags(rydberg, f);

  Command& minimal = add("minimal", "Two-qubit entanglement bound over an (h, k) grid",
                         run_minimal, false);
  minimal.overlay(minimal.app->add_option("--lo", f.lo, "Smallest h and k (energy units)"),
                  [&f](RunConfig& c) { c.minimal.lo = f.lo; });
  minimal.overlay(minimal.app->add_option("--hi", f.hi, "Largest h and k (energy units)"),
                  [&f](RunConfig& c) { c.minimal.hi = f.hi; });
  minimal.overlay(minimal.app->add_option("--steps", f.steps, "Log-spaced points per axis (count)"),
                  [&f](RunConfig& c) { c.minimal.steps = f.steps; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const Entry* chosen = nullptr;
  for (const Entry& e : entries) {
    if (e.cmd.app->parsed()) chosen = &e;
  }
  if (chosen == nullptr) {
    err << "error: no subcommand given\n";
    return kExitUsage;
  }

  RunConfig config;
  try {
    if (chosen->rydberg_defaults) {
      config.sweep = rydberg_defaults();
      config.model = config.sweep.base;
    }
    if (!f.config.empty()) {
      RunConfig loaded = load_config(f.config);
      if (chosen->rydberg_defaults) {
        // Only explicitly given model keys replace the scan defaults.
        ModelParams& m = config.model;
        const ModelParams& l = loaded.model;
        const auto has = [&](const char* k) { return loaded.present.count(k) > 0; };
        if (has("N")) m.num_sites = l.num_sites;
        if (has("J")) m.j = l.j;
        if (has("Delta")) m.delta = l.delta;
        if (has("Jk")) m.jk = l.jk;
        if (has("B")) m.b = l.b;
        if (has("coupled_site")) m.coupled_site = l.coupled_site;
        if (has("n_A")) m.n_a = l.n_a;
        if (has("n_B")) m.n_b = l.n_b;
        if (has("sigma_A")) m.sigma_a = l.sigma_a;
        if (has("sigma_B")) m.sigma_b = l.sigma_b;
        if (has("include_impurity_bulk_bond")) {
          m.include_impurity_bulk_bond = l.include_impurity_bulk_bond;
        }
        config.out_path = loaded.out_path;
        config.sweep.workers = loaded.sweep.workers;
      } else {
        config = std::move(loaded);
      }
    }
    chosen->cmd.apply(config);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    write_output(config, out, chosen->run(config));
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitCompute;
  }
  return kExitOk;
}

}  // namespace kqet
