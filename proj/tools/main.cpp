// Configuration-driven front end: runs one of the experiment modes
// {noise-ensemble, jets-verify, iterate, holder-sweep, contraction-demo}
// described by a config file and writes deterministic JSON/CSV reports.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ci2d/config.hpp"
#include "ci2d/field_io.hpp"
#include "ci2d/holder.hpp"
#include "ci2d/iteration.hpp"
#include "ci2d/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ci2d;

namespace {

const std::vector<std::string> kKnownKeys = {
    "mode",
    "grid.n",
    "time.dt",
    "time.t_min",
    "noise.enabled",
    "noise.seed",
    "noise.cutoff",
    "noise.eps",
    "params.a",
    "params.b",
    "params.alpha",
    "params.beta",
    "params.gamma",
    "params.K",
    "params.L",
    "params.N",
    "params.p",
    "params.kappa",
    "params.R",
    "params.k_level",
    "params.ell_override",
    "params.fq_override",
    "jets.directions",
    "jets.mu0",
    "jets.band_cap",
    "jets.sigma",
    "jets.eta",
    "jets.nu",
    "jets.mu",
    "jets.theta",
    "iterate.q_max",
    "iterate.track_residual",
    "iterate.u0",
    "iterate.u0_amplitude",
    "targets.stress_decrease",
    "targets.identity_tol",
    "targets.divergence_tol",
    "ensemble.paths",
    "ensemble.horizon",
    "ensemble.kappa",
    "ensemble.p",
    "ensemble.L",
    "jets_verify.grid_n",
    "jets_verify.dt_fd",
    "jets_verify.spatial_tol",
    "jets_verify.xi_index",
    "holder.sigmas",
    "holder.p_values",
    "holder.slope_margin",
    "contraction.t_stars",
    "contraction.zeta",
    "contraction.kappa",
    "contraction.grid_n",
    "contraction.dt",
};

IterationParams params_from_config(const Config& cfg) {
  IterationParams ip;
  ip.a = cfg.get_int("params.a", 2);
  ip.b = cfg.get_int("params.b", 2);
  ip.alpha = cfg.get_real("params.alpha", 0.05);
  ip.beta = cfg.get_real("params.beta", 0.5);
  ip.gamma = cfg.get_real("params.gamma", 0.125);
  ip.energy_k = cfg.get_real("params.K", 2.0);
  ip.level_l = cfg.get_real("params.L", 2.5);
  ip.data_n = cfg.get_real("params.N", 2.0);
  ip.p = cfg.get_real("params.p", 1.5);
  ip.kappa = cfg.get_real("params.kappa", 0.15);
  ip.cutoff_r = cfg.get_int("params.R", 4);
  ip.k_level = cfg.get_int("params.k_level", 3);
  if (cfg.has("params.ell_override"))
    ip.ell_override = cfg.get_real("params.ell_override", 0);
  if (cfg.has("params.fq_override"))
    ip.fq_override = cfg.get_int("params.fq_override", 0);
  if (cfg.has("jets.sigma")) {
    JetParams jp;
    jp.sigma = cfg.get_int("jets.sigma", 2);
    jp.eta = cfg.get_int("jets.eta", 8);
    jp.nu = cfg.get_int("jets.nu", 11);
    jp.mu = cfg.get_int("jets.mu", 11);
    jp.theta = cfg.get_int("jets.theta", 36);
    ip.jet_override = {jp};
  }
  return ip;
}

IterationConfig iter_config_from_config(const Config& cfg, uint64_t seed_override,
                                        bool has_seed_override) {
  IterationConfig ic;
  ic.grid_n = cfg.get_int("grid.n", 64);
  ic.dt = cfg.get_real("time.dt", 1.0 / 128);
  ic.t_min = cfg.get_real("time.t_min", -1.0);
  ic.jet_directions = cfg.get_int("jets.directions", 6);
  ic.jet_mu0 = cfg.get_real("jets.mu0", 10.0);
  ic.jet_band_cap = cfg.get_int("jets.band_cap", 2);
  ic.noise_enabled = cfg.get_bool("noise.enabled", true);
  ic.noise_cutoff = cfg.get_int("noise.cutoff", 4);
  ic.noise_eps = cfg.get_real("noise.eps", 0.0);
  ic.seed = has_seed_override ? seed_override : cfg.get_u64("noise.seed", 1);
  ic.track_residual = cfg.get_bool("iterate.track_residual", false);
  return ic;
}

VectorField initial_data(const Config& cfg, const Grid& g) {
  std::string kind = cfg.get_string("iterate.u0", "zero");
  Real amp = cfg.get_real("iterate.u0_amplitude", 0.5);
  if (kind == "zero") return VectorField(g);
  if (kind == "perp_sin") {
    ScalarField f = sample_function(
        g, [amp](Real x1, Real) { return amp / kTwoPi * std::sin(kTwoPi * x1); });
    return perp_gradient(f);
  }
  if (kind == "random") {
    VectorField v = helmholtz_project(
        random_vector_field(g, 3, cfg.get_u64("noise.seed", 1) + 99));
    Real n = norm_lp(v, 2.0);
    return n > 0 ? (amp / n) * v : v;
  }
  throw ConfigError("unknown iterate.u0 kind " + kind, 0, 0);
}

int run_iterate(const Config& cfg, const fs::path& out, uint64_t seed,
                bool has_seed, const std::vector<Real>& dump_times) {
  IterationParams ip = params_from_config(cfg);
  IterationConfig ic = iter_config_from_config(cfg, seed, has_seed);
  int q_max = cfg.get_int("iterate.q_max", 2);

  ConvexIntegrator ci(ip, ic, initial_data(cfg, Grid(ic.grid_n)));
  auto states = ci.iterate(q_max);

  Ledger led;
  bool all_pass = true;
  Real ratio_target = cfg.get_real("targets.stress_decrease", 0.0);
  Real id_tol = cfg.get_real("targets.identity_tol", 0.0);
  Real div_tol = cfg.get_real("targets.divergence_tol", 0.0);
  for (const auto& st : states) {
    for (const auto& [name, value] : st.diag.values)
      led.add(st.q, "level", name, value);
  }
  for (size_t i = 1; i < states.size(); ++i) {
    const auto& prev = states[i - 1].diag.values;
    const auto& cur = states[i].diag.values;
    if (ratio_target > 0 && prev.count("stress_l1l1_late") &&
        cur.count("stress_l1l1_late")) {
      Real r = prev.at("stress_l1l1_late") > 0
                   ? cur.at("stress_l1l1_late") / prev.at("stress_l1l1_late")
                   : 0.0;
      bool pass = r <= ratio_target;
      all_pass = all_pass && pass;
      led.add_checked(states[i].q, "late", "stress_decrease_ratio", r,
                      ratio_target, pass);
    }
    if (id_tol > 0) {
      for (const char* key : {"identity_4_10", "identity_wp_wc"}) {
        if (!cur.count(key)) continue;
        bool pass = cur.at(key) <= id_tol;
        all_pass = all_pass && pass;
        led.add_checked(states[i].q, "level", std::string(key) + "_check",
                        cur.at(key), id_tol, pass);
      }
    }
    if (div_tol > 0 && cur.count("sup_divergence")) {
      bool pass = cur.at("sup_divergence") <= div_tol;
      all_pass = all_pass && pass;
      led.add_checked(states[i].q, "level", "divergence_check",
                      cur.at("sup_divergence"), div_tol, pass);
    }
  }

  ConstraintReport cr = check_constraints(ip, q_max);
  json rep;
  rep["mode"] = "iterate";
  rep["grid_n"] = ic.grid_n;
  rep["dt"] = ic.dt;
  rep["seed"] = ic.seed;
  rep["q_max"] = q_max;
  rep["t_l"] = ci.t_l();
  rep["implied_cutoff_constant"] = ip.implied_c();
  rep["violated_constraints"] = cr.violated;
  rep["constraint_notes"] = cr.notes;
  for (const auto& [key, value] : cfg.entries()) rep["config"][key] = value;
  rep["pass"] = all_pass;

  std::ofstream jf(out / "report.json");
  jf << rep.dump(2) << "\n";
  std::ofstream cf(out / "ledger.csv", std::ios::binary);
  write_csv(cf, led);
  write_table(std::cout, led);

  const auto& last = states.back();
  for (Real t : dump_times) {
    int i = ci.index_of(t);
    char name[64];
    std::snprintf(name, sizeof(name), "v2_q%d_t%.6f.field", last.q, t);
    dump_field_file((out / name).string(), last.v2.at(i), t);
  }
  return all_pass ? 0 : 1;
}

int run_noise_ensemble(const Config& cfg, const fs::path& out, uint64_t seed,
                       bool has_seed, int threads) {
  int paths = cfg.get_int("ensemble.paths", 16);
  Real horizon = cfg.get_real("ensemble.horizon", 1.0);
  NoiseConfig nc;
  nc.seed = has_seed ? seed : cfg.get_u64("noise.seed", 1);
  nc.grid_n = cfg.get_int("grid.n", 32);
  nc.mode_cutoff = cfg.get_int("noise.cutoff", 8);
  nc.dt = cfg.get_real("time.dt", 1.0 / 64);
  nc.mollifier_eps = cfg.get_real("noise.eps", 0.05);
  StoppingParams sp;
  sp.level_l = cfg.get_real("ensemble.L", 2.0);
  sp.kappa = cfg.get_real("ensemble.kappa", 0.15);
  sp.p = cfg.get_real("ensemble.p", 1.5);
  horizon = std::max(horizon, sp.level_l);

  struct Row {
    int path;
    Real t;
    std::string kind;
    Real value;
  };
  std::vector<std::vector<Row>> shards(static_cast<size_t>(paths));
  std::vector<Real> tl(static_cast<size_t>(paths));

  auto work = [&](int pid) {
    NoiseConfig local = nc;
    local.seed = nc.seed ^ (0x9E3779B97F4A7C15ull * (static_cast<uint64_t>(pid) + 1));
    NoisePath path = sample_z(local, horizon);
    wick_square(path);
    StoppingTimes st = stopping_time(path, sp);
    tl[static_cast<size_t>(pid)] = st.t_l;
    auto& rows = shards[static_cast<size_t>(pid)];
    for (int i = 0; i < path.z.steps(); i += 4) {
      Real t = path.z.time(i);
      rows.push_back({pid, t, "z_c_minus_kappa", holder_norm(path.z.at(i), -sp.kappa)});
      rows.push_back(
          {pid, t, "wick_c_minus_2kappa", holder_norm(path.wick.at(i), -2 * sp.kappa)});
    }
  };
  if (threads <= 1) {
    for (int pid = 0; pid < paths; ++pid) work(pid);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (int pid = next++; pid < paths; pid = next++) work(pid);
      });
    for (auto& th : pool) th.join();
  }

  std::ofstream cf(out / "ensemble.csv", std::ios::binary);
  cf << "path_id,t,norm_kind,value\r\n";
  for (const auto& shard : shards)
    for (const auto& r : shard)
      cf << r.path << ',' << format_real(r.t) << ',' << r.kind << ','
         << format_real(r.value) << "\r\n";

  json rep;
  rep["mode"] = "noise-ensemble";
  rep["paths"] = paths;
  rep["seed"] = nc.seed;
  std::vector<Real> tls(tl.begin(), tl.end());
  std::sort(tls.begin(), tls.end());
  rep["t_l_median"] = tls[tls.size() / 2];
  rep["t_l_min"] = tls.front();
  for (const auto& [key, value] : cfg.entries()) rep["config"][key] = value;
  std::ofstream jf(out / "report.json");
  jf << rep.dump(2) << "\n";
  return 0;
}

int run_jets_verify(const Config& cfg, const fs::path& out) {
  int grid_n = cfg.get_int("jets_verify.grid_n", 256);
  Real dt_fd = cfg.get_real("jets_verify.dt_fd", 1e-4);
  Real tol = cfg.get_real("jets_verify.spatial_tol", 1e-8);
  int xi = cfg.get_int("jets_verify.xi_index", 0);
  int dirs = cfg.get_int("jets.directions", 6);
  JetParams jp;
  jp.sigma = cfg.get_int("jets.sigma", 1);
  jp.eta = cfg.get_int("jets.eta", 8);
  jp.nu = cfg.get_int("jets.nu", 11);
  jp.mu = cfg.get_int("jets.mu", 11);
  jp.theta = cfg.get_int("jets.theta", 4);

  JetSystem js(build_direction_set(dirs, cfg.get_real("jets.mu0", 10.0)));
  std::vector<Real> sweep = {0.05, 0.21, 0.48, 0.77};
  auto rep = jet_identity_checks(js, jp, xi, sweep, Grid(grid_n), dt_fd);

  Ledger led;
  bool pass = rep.residual_grad_identity <= tol && rep.mean_w <= 1e-10;
  led.add_checked(0, "jets", "grad_identity", rep.residual_grad_identity, tol,
                  rep.residual_grad_identity <= tol);
  led.add(0, "jets", "transport_w", rep.residual_transport_w);
  led.add(0, "jets", "transport_psi", rep.residual_transport_psi);
  led.add(0, "jets", "normalization_gap", rep.normalization_gap);
  led.add(0, "jets", "c_gap", rep.c_gap);
  led.add(0, "jets", "truncation", rep.truncation);
  led.add(0, "jets", "mean_w", rep.mean_w);
  for (const auto& row : jet_scaling_table(js, jp, xi, Grid(grid_n))) {
    char name[64];
    std::snprintf(name, sizeof(name), "scaling_n%d_p%g", row.n_deriv, row.p);
    led.add(0, "jets", name, row.normalized);
  }
  std::ofstream cf(out / "ledger.csv", std::ios::binary);
  write_csv(cf, led);
  write_table(std::cout, led);

  json jrep;
  jrep["mode"] = "jets-verify";
  jrep["pass"] = pass;
  for (const auto& [key, value] : cfg.entries()) jrep["config"][key] = value;
  std::ofstream jf(out / "report.json");
  jf << jrep.dump(2) << "\n";
  return pass ? 0 : 1;
}

int run_holder_sweep(const Config& cfg, const fs::path& out) {
  std::vector<Real> sigmas = cfg.get_list("holder.sigmas");
  if (sigmas.empty()) sigmas = {4, 8, 16, 32, 64};
  std::vector<Real> ps = cfg.get_list("holder.p_values");
  if (ps.empty()) ps = {1.0, 2.0};
  Real margin = cfg.get_real("holder.slope_margin", 0.2);

  const int m = 512;
  std::vector<Real> f(m);
  for (int i = 0; i < m; ++i) {
    Real x = static_cast<Real>(i) / m;
    f[static_cast<size_t>(i)] = (x < 0.5 ? 1.0 : -1.0) + 0.3 * std::sin(kTwoPi * x);
  }
  auto a = [](Real t) { return std::sin(kTwoPi * t) + 1.3; };

  Ledger led;
  bool pass = true;
  for (Real p : ps) {
    std::vector<Real> gaps;
    for (Real s : sigmas) {
      auto rep = improved_holder_check(a, f, p, static_cast<int>(s), 0,
                                       static_cast<int>(s));
      gaps.push_back(rep.lhs_gap);
      char name[64];
      std::snprintf(name, sizeof(name), "gap_p%g_sigma%g", p, s);
      led.add(0, "holder", name, rep.lhs_gap);
    }
    Real slope = fitted_slope(sigmas, gaps);
    bool ok = slope <= -1.0 / p + margin;
    pass = pass && ok;
    char name[32];
    std::snprintf(name, sizeof(name), "slope_p%g", p);
    led.add_checked(0, "holder", name, slope, -1.0 / p + margin, ok);
  }
  std::ofstream cf(out / "ledger.csv", std::ios::binary);
  write_csv(cf, led);
  write_table(std::cout, led);
  json jrep;
  jrep["mode"] = "holder-sweep";
  jrep["pass"] = pass;
  for (const auto& [key, value] : cfg.entries()) jrep["config"][key] = value;
  std::ofstream jf(out / "report.json");
  jf << jrep.dump(2) << "\n";
  return pass ? 0 : 1;
}

int run_contraction_demo(const Config& cfg, const fs::path& out) {
  int n = cfg.get_int("contraction.grid_n", 32);
  Real dt = cfg.get_real("contraction.dt", 1.0 / 512);
  Real zeta = cfg.get_real("contraction.zeta", 0.4);
  Real kap = cfg.get_real("contraction.kappa", 0.1);
  std::vector<Real> tstars = cfg.get_list("contraction.t_stars");
  if (tstars.empty()) tstars = {0.04, 0.02, 0.01};

  Grid g(n);
  VectorSeries v1(0.0, dt), v2(0.0, dt), z(0.0, dt);
  int steps = static_cast<int>(std::lround(tstars.front() / dt));
  VectorField b1 = helmholtz_project(random_vector_field(g, 3, 11));
  VectorField b2 = helmholtz_project(random_vector_field(g, 3, 12));
  b1 = (0.2 / norm_lp(b1, 2.0)) * b1;
  b2 = (0.2 / norm_lp(b2, 2.0)) * b2;
  for (int i = 0; i <= steps; ++i) {
    Real damp = std::exp(-0.5 * i * dt);
    v1.values.push_back(damp * b1);
    v2.values.push_back(damp * b2);
    z.values.push_back(VectorField(g));
  }

  Ledger led;
  bool pass = true;
  Real previous = -1;
  for (Real ts : tstars) {
    Real f = contraction_factor(v1, v2, z, ts, zeta, kap);
    bool ok = f < 1.0 && (previous < 0 || f <= previous * 1.02);
    pass = pass && ok;
    char name[48];
    std::snprintf(name, sizeof(name), "factor_tstar%g", ts);
    led.add_checked(0, "contraction", name, f, 1.0, ok);
    previous = f;
  }
  std::ofstream cf(out / "ledger.csv", std::ios::binary);
  write_csv(cf, led);
  write_table(std::cout, led);
  json jrep;
  jrep["mode"] = "contraction-demo";
  jrep["pass"] = pass;
  for (const auto& [key, value] : cfg.entries()) jrep["config"][key] = value;
  std::ofstream jf(out / "report.json");
  jf << jrep.dump(2) << "\n";
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral convex-integration laboratory on T^2"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run an experiment described by a config");
  std::string config_path, out_dir = "out", dump_arg;
  uint64_t seed = 0;
  bool has_seed = false;
  int threads = 1;
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--out", out_dir, "output directory");
  auto* seed_opt = run->add_option("--seed", seed, "override the config seed");
  run->add_option("--dump-fields", dump_arg, "comma-separated dump times");
  run->add_option("--threads", threads, "ensemble shards");

  CLI11_PARSE(app, argc, argv);
  has_seed = seed_opt->count() > 0;

  try {
    Config cfg = Config::parse_file(config_path);
    cfg.require_known(kKnownKeys);
    std::string mode = cfg.get_string("mode", "");
    if (mode.empty()) throw ConfigError("missing mode", 0, 0);

    fs::create_directories(out_dir);
    std::vector<Real> dump_times;
    if (!dump_arg.empty()) {
      std::istringstream ss(dump_arg);
      std::string tok;
      while (std::getline(ss, tok, ',')) dump_times.push_back(std::stod(tok));
    }

    if (mode == "iterate")
      return run_iterate(cfg, out_dir, seed, has_seed, dump_times);
    if (mode == "noise-ensemble")
      return run_noise_ensemble(cfg, out_dir, seed, has_seed, threads);
    if (mode == "jets-verify") return run_jets_verify(cfg, out_dir);
    if (mode == "holder-sweep") return run_holder_sweep(cfg, out_dir);
    if (mode == "contraction-demo") return run_contraction_demo(cfg, out_dir);
    throw ConfigError("unknown mode " + mode, 0, 0);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  }
}
