#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "qlm/circuit_dynamics.hpp"
#include "qlm/io.hpp"
#include "qlm/oracles.hpp"
#include "qlm/readout.hpp"
#include "qlm/string_order.hpp"
#include "qlm/tuner.hpp"
#include "qlm/vortex.hpp"

namespace fs = std::filesystem;
using namespace qlm;
using json = nlohmann::json;

namespace {

constexpr const char* kVersion = "qlm 1.0.0";

const std::map<std::string, std::string> kHelp = {
    {"n", "number of sites (even, 2..24)"},
    {"m", "mass before the quench"},
    {"j", "coupling J"},
    {"jm", "J/m"},
    {"jmin", "smallest J/m"},
    {"jmax", "largest J/m"},
    {"jstep", "J/m step"},
    {"tmin", "first t*m"},
    {"tmax", "last time (t*m, or ns for circuit fidelity)"},
    {"tstep", "time step"},
    {"method", "auto, spectral or krylov"},
    {"threads", "worker threads, 0 = all cores"},
    {"nk", "points on the k grid over [0, pi]"},
    {"nzeros", "number of zeros to list"},
    {"ratio", "target J/m"},
    {"mass", "target mass in 2pi MHz"},
    {"alpha_min", "anharmonicity floor in 2pi MHz"},
    {"starts", "simplex starts"},
    {"budget", "evaluations per start"},
    {"polish", "polish rounds on the best start"},
    {"seed", "seed for the start jitter"},
    {"params", "circuit json (farads, GHz)"},
    {"levels", "levels per circuit mode"},
    {"g", "resonator coupling in 2pi MHz"},
    {"dmin", "smallest probe detuning in 2pi MHz"},
    {"dmax", "largest probe detuning in 2pi MHz"},
    {"dstep", "detuning step in 2pi MHz"},
    {"resolution", "resolvable shift difference in 2pi MHz"},
};

// flag value if given, else config file value, else default
struct Ctx {
  CLI::App* sub = nullptr;
  std::map<std::string, std::string> cli;
  std::set<std::string> keys{"out"};
  KeyValueConfig cfg;
  json inputs = json::object();

  void add(const std::string& name) {
    keys.insert(name);
    auto it = kHelp.find(name);
    sub->add_option("--" + name, cli[name], it == kHelp.end() ? "" : it->second);
  }
  bool given(const std::string& name) const { return sub->count("--" + name) > 0; }
  double num(const std::string& name, double def) {
    double v = given(name) ? KeyValueConfig(from_cli(name)).get(name, def) : cfg.get(name, def);
    inputs[name] = v;
    return v;
  }
  int integer(const std::string& name, int def) {
    int v = given(name) ? KeyValueConfig(from_cli(name)).get(name, def) : cfg.get(name, def);
    inputs[name] = v;
    return v;
  }
  std::string str(const std::string& name, const std::string& def) {
    std::string v = given(name) ? cli.at(name) : cfg.get(name, def);
    inputs[name] = v;
    return v;
  }

 private:
  KeyValueConfig from_cli(const std::string& name) const {
    KeyValueConfig k;
    k.set(name, cli.at(name));
    return k;
  }
};

struct Run {
  fs::path out;
  json manifest;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  std::ofstream file(const std::string& name) {
    std::ofstream f(out / name);
    if (!f) throw ConfigError("cannot write " + (out / name).string());
    manifest["outputs"].push_back(name);
    return f;
  }
  void finish(const std::string& command, const Ctx& ctx) {
    manifest["command"] = command;
    manifest["inputs"] = ctx.inputs;
    manifest["versions"] = {{"qlm", kVersion},
                            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                          std::to_string(EIGEN_MINOR_VERSION)}};
    manifest["timings"] = {{"wall_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}};
    std::ofstream f(out / "manifest.json");
    f << manifest.dump(2) << "\n";
  }
};

fs::path output_dir(const Ctx& ctx, const std::string& flag) {
  std::string d = ".";
  if (ctx.cfg.has("out")) d = ctx.cfg.get("out", d);
  if (const char* e = std::getenv("QLM_OUT_DIR")) d = e;
  if (!flag.empty()) d = flag;
  fs::create_directories(d);
  return d;
}

std::vector<double> grid(Ctx& c, const std::string& p, double lo, double hi, double step) {
  return linspace_step(c.num(p + "min", lo), c.num(p + "max", hi), c.num(p + "step", step));
}

CircuitParams load_params(Ctx& c) {
  const std::string path = c.str("params", "");
  if (path.empty()) throw ConfigError("--params <circuit.json> is required");
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open " + path);
  json j;
  try {
    j = json::parse(f);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad json: ") + e.what());
  }
  return circuit_from_json(j.contains("params") ? j["params"] : j);
}

json eff_json(const EffectiveParams& e) {
  const double u = kTwoPiMHz;
  return {{"units", "2pi MHz"}, {"delta_eff", e.delta_eff / u}, {"j_eff", e.j_eff / u},
          {"ratio_4J_over_Delta", 4 * e.j_eff / e.delta_eff}, {"fit_residual", e.fit_residual}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum link model toolkit: quench scans, vortices, oracles and circuit realisation"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path, out_flag;
  app.add_option("--config", config_path, "flat key=value config file");
  app.add_option("--out", out_flag, "output directory (env QLM_OUT_DIR also honoured)");

  std::map<std::string, Ctx> ctx;
  auto make = [&](CLI::App* parent, const std::string& name, const std::string& help) {
    Ctx& c = ctx[name];
    c.sub = parent->add_subcommand(name, help);
    return &c;
  };

  int basis_n = 0;
  Ctx* cb = make(&app, "basis", "enumerate the gauge-invariant basis");
  cb->sub->add_option("N", basis_n, "number of sites")->required();

  Ctx* cq = make(&app, "quench", "Loschmidt trace after m -> -m");
  for (auto k : {"n", "m", "j", "tmax", "tstep", "method"}) cq->add(k);

  Ctx* cl = make(&app, "loschmidt-scan", "Loschmidt amplitude over (J/m, t m)");
  for (auto k : {"n", "jmin", "jmax", "jstep", "tmin", "tmax", "tstep", "threads"}) cl->add(k);

  Ctx* co = make(&app, "order-scan", "string order parameter over (k, t m)");
  for (auto k : {"n", "jm", "nk", "tmin", "tmax", "tstep", "threads"}) co->add(k);

  std::string vgrid;
  Ctx* cv = make(&app, "vortices", "plaquette windings of a grid csv");
  cv->sub->add_option("grid", vgrid, "csv with x, y, re, im columns")->required();

  std::string which;
  bool list_zeros = false;
  Ctx* cor = make(&app, "oracle", "closed-form N=2 / N=4 solutions");
  cor->sub->add_option("which", which, "n2 or n4")->required()->check(CLI::IsMember({"n2", "n4"}));
  cor->sub->add_flag("--list-zeros", list_zeros, "print N=2 Loschmidt zeros");
  for (auto k : {"m", "j", "nzeros"}) cor->add(k);

  CLI::App* circ = app.add_subcommand("circuit", "superconducting circuit realisation");
  circ->require_subcommand(1);
  Ctx* cc = make(circ, "compile", "circuit params -> spin-model params");
  cc->add("params");
  Ctx* ct = make(circ, "tune", "tune circuit params to the target J/m");
  for (auto k : {"ratio", "mass", "alpha_min", "starts", "budget", "polish", "seed", "threads"}) ct->add(k);
  Ctx* ce = make(circ, "effective", "fit effective detuning and coupling");
  for (auto k : {"params", "levels"}) ce->add(k);
  Ctx* cf = make(circ, "fidelity", "average fidelity against the target evolution");
  for (auto k : {"params", "levels", "tmax", "tstep"}) cf->add(k);
  Ctx* cr = make(circ, "readout", "dispersive shifts and distinguishability windows");
  for (auto k : {"params", "g", "dmin", "dmax", "dstep", "resolution"}) cr->add(k);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    std::string name;
    for (auto& [n, c] : ctx)
      if (c.sub->parsed()) name = n;
    Ctx& c = ctx.at(name);
    if (!config_path.empty()) {
      c.cfg = KeyValueConfig::load(config_path);
      c.cfg.reject_unknown(c.keys);
    }
    Run run{output_dir(c, out_flag), json::object()};
    const double u = kTwoPiMHz;

    if (name == "basis") {
      c.inputs["N"] = basis_n;
      const GaugeBasis b(basis_n);
      run.file("basis.json") << basis_json(b).dump(1) << "\n";
      run.manifest["dimension"] = b.dim();
      run.manifest["transfer_matrix_count"] = transfer_matrix_count(basis_n);
      std::cout << "dimension " << b.dim() << "\n";
    } else if (name == "quench") {
      LatticeConfig lc{c.integer("n", 4), c.num("m", 1.0), c.num("j", 1.0)};
      const std::string m = c.str("method", "auto");
      const PropMethod pm = m == "spectral" ? PropMethod::Spectral : m == "krylov" ? PropMethod::Krylov : PropMethod::Auto;
      if (m != "auto" && m != "spectral" && m != "krylov") throw ConfigError("method must be auto, spectral or krylov");
      const auto tm = linspace_step(0.0, c.num("tmax", 10.0), c.num("tstep", 0.0125));
      const QuenchResult r = loschmidt_trace(lc, tm, pm);
      auto f = run.file("quench.csv");
      CsvWriter w(f, {"t_m", "re_G", "im_G", "L", "lambda", "sigma0z"});
      for (size_t i = 0; i < tm.size(); ++i) {
        w << r.times[i] << r.amplitude[i].real() << r.amplitude[i].imag() << r.echo[i] << r.rate[i] << r.sigma0z[i];
        w.end_row();
      }
    } else if (name == "loschmidt-scan") {
      const int n = c.integer("n", 4);
      const auto jm = grid(c, "j", 0.1, 5.0, 0.025);
      const auto tm = grid(c, "t", 0.0, 10.0, 0.0125);
      const ScanGrid g = loschmidt_scan(n, jm, tm, c.integer("threads", 0));
      auto f = run.file("loschmidt.csv");
      write_loschmidt_csv(f, g, n);
      const VortexScan v = plaquette_windings(g);
      run.manifest["vortices"] = vortex_summary(g, v);
    } else if (name == "order-scan") {
      LatticeConfig lc{c.integer("n", 4), 1.0, c.num("jm", 1.95)};
      const auto k = default_k_grid(c.integer("nk", 64));
      const auto tm = grid(c, "t", 0.0, 10.0, 0.0125);
      const ScanGrid g = order_param_scan(lc, k, tm, c.integer("threads", 0));
      auto f = run.file("order.csv");
      write_order_csv(f, g);
      run.manifest["vortices"] = vortex_summary(g, plaquette_windings(g));
    } else if (name == "vortices") {
      c.inputs["grid"] = vgrid;
      std::ifstream in(vgrid);
      if (!in) throw ConfigError("cannot open " + vgrid);
      const ScanGrid g = read_grid_csv(in);
      const VortexScan v = plaquette_windings(g);
      auto f = run.file("vortices.csv");
      write_vortex_csv(f, g, v);
      run.manifest["summary"] = vortex_summary(g, v);
      std::cout << run.manifest["summary"].dump() << "\n";
    } else if (name == "oracle") {
      c.inputs["which"] = which;
      const double m = c.num("m", 1.0), J = c.num("j", std::sqrt(2.0) * m);
      if (which == "n2") {
        const N2Solution s = n2_solution(m, J);
        auto f = run.file("n2_eigen.csv");
        CsvWriter w(f, {"label", "energy", "c1", "c2", "c3"});
        const Mat V = s.eigenvectors();
        const Vec E = s.energies();
        const char* lab[3] = {"psi1", "psi2", "psi_minus"};
        for (int k = 0; k < 3; ++k) {
          w << std::string(lab[k]) << E[k] << V(0, k) << V(1, k) << V(2, k);
          w.end_row();
        }
        if (list_zeros) {
          if (!(m > 0)) throw ConfigError("--list-zeros needs m > 0");
          auto z = run.file("n2_zeros.csv");
          CsvWriter wz(z, {"n", "J_over_m", "t_m"});
          for (const auto& e : n2_loschmidt_zeros(m, 1, c.integer("nzeros", 4))) {
            wz << double(e.n) << e.j_over_m << e.t * m;
            wz.end_row();
            std::cout << "(" << fmt(e.j_over_m) << ", " << fmt(e.t * m) << ")\n";
          }
        }
      } else {
        const N4Solution s = n4_solution(m, J);
        auto f = run.file("n4_eigen.csv");
        CsvWriter w(f, {"label", "energy", "c1", "c2", "c3", "c4", "c5", "c6", "c7"});
        const Mat V = s.eigenvectors();
        const Vec E = s.energies();
        const char* lab[7] = {"psi1", "psi2", "psi3", "psi_plus", "psi_minus", "psi1_prime", "psi2_prime"};
        for (int k = 0; k < 7; ++k) {
          w << std::string(lab[k]) << E[k];
          for (int r = 0; r < 7; ++r) w << V(r, k);
          w.end_row();
        }
        run.manifest["discriminant"] = s.D;
      }
    } else if (name == "compile") {
      const CircuitParams p = load_params(c);
      const SpinModelParams s = spin_params(p);
      const ModeScales ms = mode_scales(p);
      run.file("spin.json") << to_json(s).dump(2) << "\n";
      run.manifest["mode_scales"] = {{"r0", ms.r0}, {"rg", ms.rg}, {"r1", ms.r1}};
      run.manifest["omega_ppm_2pi_MHz"] = omega_prs(s, 1, 1, -1) / u;
      if (std::max({ms.r0, ms.rg, ms.r1}) / std::sqrt(2.0) >= 0.5) run.manifest["advisory"] = "outside the transmon regime r/sqrt2 < 0.5";
    } else if (name == "tune") {
      TuneSpec sp;
      sp.target_ratio = c.num("ratio", sp.target_ratio);
      sp.target_mass = c.num("mass", sp.target_mass / u) * u;
      sp.alpha_min = c.num("alpha_min", sp.alpha_min / u) * u;
      sp.starts = c.integer("starts", sp.starts);
      sp.budget = c.integer("budget", sp.budget);
      sp.polish_rounds = c.integer("polish", sp.polish_rounds);
      sp.seed = static_cast<unsigned>(c.integer("seed", int(sp.seed)));
      sp.threads = c.integer("threads", 0);
      const TuneResult r = tune(sp);
      run.file("tuned_params.json") << to_json(r.params).dump(2) << "\n";
      run.file("tune_report.json") << r.report(sp).dump(1) << "\n";
      run.manifest["feasible"] = r.feasible;
      run.manifest["verification"] = r.report(sp)["verification"];
      std::cout << "ratio " << fmt(4 * r.eff.j_eff / r.eff.delta_eff) << (r.feasible ? "" : " (infeasible)") << "\n";
    } else if (name == "effective") {
      const CircuitParams p = load_params(c);
      const int n = c.integer("levels", 4);
      const EffectiveParams e = extract_effective_params(p, n);
      const H0Eff h = extract_h0_eff(p, n);
      json j = eff_json(e);
      for (int s = 0; s < 8; ++s) j["h0_eff"][state_label(s)] = h.energies[s] / u;
      j["warnings"] = h.warnings;
      run.file("effective.json") << j.dump(2) << "\n";
      for (const auto& wmsg : h.warnings) std::cerr << "warning: " << wmsg << "\n";
    } else if (name == "fidelity") {
      const CircuitParams p = load_params(c);
      const int n = c.integer("levels", 4);
      const EffectiveParams e = extract_effective_params(p, n);
      const H0Eff h = extract_h0_eff(p, n);
      const auto ts = linspace_step(0.0, c.num("tmax", 100.0), c.num("tstep", 0.25));
      const FidelityTrace tr = average_fidelity(p, e, h, ts, n);
      auto f = run.file("fidelity.csv");
      CsvWriter w(f, {"t_ns", "avg_fidelity", "avg_fidelity_no_leakage"});
      double mn = 1;
      for (size_t i = 0; i < ts.size(); ++i) {
        w << ts[i] << tr.avg_fidelity[i] << tr.avg_fidelity_no_leakage[i];
        w.end_row();
        mn = std::min(mn, tr.avg_fidelity[i]);
      }
      run.manifest["effective"] = eff_json(e);
      run.manifest["min_avg_fidelity"] = mn;
    } else if (name == "readout") {
      const CircuitParams p = load_params(c);
      ReadoutConfig r0;
      r0.spin = spin_params(p);
      r0.g_r = c.num("g", 20.0) * u;
      r0.resolution = c.num("resolution", 1.0) * u;
      r0.detuning = linspace_step(c.num("dmin", -1500.0) * u, c.num("dmax", 1500.0) * u, c.num("dstep", 1.0) * u);
      ReadoutConfig r1 = r0;
      r1.probe = 1;
      for (const ReadoutConfig* rc : {&r0, &r1}) {
        const ShiftTable t = dispersive_shifts(*rc);
        auto f = run.file("shifts_probe" + std::to_string(rc->probe) + ".csv");
        std::vector<std::string> head{"delta_2piMHz"};
        for (int s = 0; s < 8; ++s) head.push_back("chi_" + state_label(s) + "_2piMHz");
        head.push_back("valid");
        CsvWriter w(f, head);
        for (size_t i = 0; i < t.detuning.size(); ++i) {
          w << t.detuning[i] / u;
          for (int s = 0; s < 8; ++s) w << (t.at_pole[i][s] ? std::string("pole") : fmt(t.chi[i][s] / u));
          w << std::string(t.valid[i] ? "1" : "0");
          w.end_row();
        }
      }
      const WindowScan ws = distinguishability_windows(r0, r1);
      auto f = run.file("windows.csv");
      CsvWriter w(f, {"delta0_lo_2piMHz", "delta0_hi_2piMHz", "delta1_lo_2piMHz", "delta1_hi_2piMHz"});
      for (const auto& win : ws.windows) {
        w << win.d0_lo / u << win.d0_hi / u << win.d1_lo / u << win.d1_hi / u;
        w.end_row();
      }
      run.manifest["windows"] = ws.windows.size();
      run.manifest["joint_cells"] = ws.joint_cells;
      run.manifest["single_probe_cells"] = {ws.single0_cells, ws.single1_cells};
    }
    run.finish(name, c);
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const FitError& e) {
    std::cerr << "numerical failure: " << e.what() << " (" << e.t.size() << " trace samples)\n";
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 3;
  }
}
