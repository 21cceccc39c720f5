// Batch front end: analytic / characteristics / selfsim / simulate / validate
// subcommands over a shared flat config (defaults < config file < flags).
// Exit codes: 0 success, 1 validation failure, 2 usage or config error,
// 3 numeric failure inside the library.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gelfree/gelfree.hpp"
#include "gelfree/detail/parallel.hpp"

namespace {

struct SubFlags {
  std::string config_path;
  gelfree::RunConfig v;
  CLI::Option* k = nullptr;
  CLI::Option* measure = nullptr;
  CLI::Option* rate = nullptr;
  CLI::Option* cut = nullptr;
  CLI::Option* t_grid = nullptr;
  CLI::Option* s_grid = nullptr;
  CLI::Option* x_grid = nullptr;
  CLI::Option* observe_at = nullptr;
  CLI::Option* n_particles = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* replicates = nullptr;
  CLI::Option* t_end = nullptr;
  CLI::Option* event_cap = nullptr;
  CLI::Option* order = nullptr;
  CLI::Option* root_tol = nullptr;
  CLI::Option* residual_step = nullptr;
  CLI::Option* dt = nullptr;
  CLI::Option* out_dir = nullptr;
};

SubFlags* attach_flags(CLI::App* sub,
                       std::vector<std::unique_ptr<SubFlags>>& store) {
  store.push_back(std::make_unique<SubFlags>());
  SubFlags* f = store.back().get();
  sub->add_option("--config", f->config_path, "key=value config file");
  f->k = sub->add_option("--k", f->v.k, "fragmentation constant");
  f->measure = sub->add_option("--measure", f->v.measure,
                               "initial measure: mono|atomic|exp|powertail|triangle");
  f->rate = sub->add_option("--rate", f->v.rate, "exp family rate");
  f->cut = sub->add_option("--cut", f->v.cut, "powertail support start");
  f->t_grid = sub->add_option("--t-grid", f->v.t_grid, "time grid")->delimiter(',');
  f->s_grid = sub->add_option("--s-grid", f->v.s_grid, "transform-variable grid")
                  ->delimiter(',');
  f->x_grid = sub->add_option("--x-grid", f->v.x_grid, "mass grid")->delimiter(',');
  f->observe_at = sub->add_option("--observe-at", f->v.observe_at,
                                  "simulation observation times")
                      ->delimiter(',');
  f->n_particles =
      sub->add_option("--n-particles", f->v.n_particles, "particle count");
  f->seed = sub->add_option("--seed", f->v.seed, "RNG seed");
  f->replicates =
      sub->add_option("--replicates", f->v.replicates, "independent replicates");
  f->t_end = sub->add_option("--t-end", f->v.t_end, "simulation horizon");
  f->event_cap = sub->add_option("--event-cap", f->v.event_cap,
                                 "explosion guard: max jump events");
  f->order = sub->add_option("--order", f->v.inversion_order,
                             "Gaver-Stehfest inversion order (even, 8..18)");
  f->root_tol = sub->add_option("--root-tol", f->v.root_tol,
                                "root-finder relative tolerance");
  f->residual_step = sub->add_option("--residual-step", f->v.residual_step,
                                     "PDE residual step scale");
  f->dt = sub->add_option("--dt", f->v.dt, "oracle integration step");
  f->out_dir = sub->add_option("--out-dir", f->v.output_dir, "output directory");
  return f;
}

gelfree::RunConfig resolve(const SubFlags& f, const std::string& subname) {
  gelfree::RunConfig cfg;
  if (!f.config_path.empty()) cfg = gelfree::parse_config(f.config_path);
  cfg.subcommand = subname;
  if (f.k->count()) cfg.k = f.v.k;
  if (f.measure->count()) cfg.measure = f.v.measure;
  if (f.rate->count()) cfg.rate = f.v.rate;
  if (f.cut->count()) cfg.cut = f.v.cut;
  if (f.t_grid->count()) cfg.t_grid = f.v.t_grid;
  if (f.s_grid->count()) cfg.s_grid = f.v.s_grid;
  if (f.x_grid->count()) cfg.x_grid = f.v.x_grid;
  if (f.observe_at->count()) cfg.observe_at = f.v.observe_at;
  if (f.n_particles->count()) cfg.n_particles = f.v.n_particles;
  if (f.seed->count()) cfg.seed = f.v.seed;
  if (f.replicates->count()) cfg.replicates = f.v.replicates;
  if (f.t_end->count()) cfg.t_end = f.v.t_end;
  if (f.event_cap->count()) cfg.event_cap = f.v.event_cap;
  if (f.order->count()) cfg.inversion_order = f.v.inversion_order;
  if (f.root_tol->count()) cfg.root_tol = f.v.root_tol;
  if (f.residual_step->count()) cfg.residual_step = f.v.residual_step;
  if (f.dt->count()) cfg.dt = f.v.dt;
  if (f.out_dir->count()) cfg.output_dir = f.v.output_dir;
  gelfree::check_config(cfg);
  std::filesystem::create_directories(cfg.output_dir);
  return cfg;
}

std::string out_path(const gelfree::RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.output_dir) / name).string();
}

int run_analytic(const gelfree::RunConfig& cfg) {
  const gelfree::LaplaceEvaluator ev(gelfree::make_measure(cfg), cfg.k,
                                     cfg.root_tol, cfg.residual_step);
  gelfree::CsvTable tb;
  tb.header = {"t", "s", "L", "dL_ds_at_zero_if_s0"};
  for (double t : cfg.t_grid) {
    tb.rows.push_back({gelfree::format_double(t), gelfree::format_double(0.0),
                       gelfree::format_double(ev.L(t, 0.0)),
                       gelfree::format_double(ev.dL_ds_at_zero(t))});
    for (double s : cfg.s_grid) {
      if (!(s > 0.0)) continue;  // s = 0 row already emitted
      tb.rows.push_back({gelfree::format_double(t), gelfree::format_double(s),
                         gelfree::format_double(ev.L(t, s)), ""});
    }
  }
  gelfree::write_csv(out_path(cfg, "analytic.csv"), tb);
  return 0;
}

int run_characteristics(const gelfree::RunConfig& cfg) {
  const gelfree::MeasureSpec m = gelfree::make_measure(cfg);
  gelfree::CsvTable tb;
  tb.header = {"t", "Sigma", "ell"};
  // One path per s-grid entry, concatenated; a new path starts where the t
  // column returns to 0.
  for (double s : cfg.s_grid) {
    if (!(s > 0.0)) continue;
    const double T = gelfree::time_to_axis(s, cfg.k, m);
    const gelfree::CharacteristicPath path =
        gelfree::integrate_characteristics_oracle(s, cfg.k, m,
                                                  std::min(cfg.dt, T / 1e4));
    for (const gelfree::PathSample& ps : path.samples)
      tb.rows.push_back({gelfree::format_double(ps.t),
                         gelfree::format_double(ps.Sigma),
                         gelfree::format_double(ps.ell)});
  }
  gelfree::write_csv(out_path(cfg, "characteristics.csv"), tb);
  return 0;
}

int run_selfsim(const gelfree::RunConfig& cfg) {
  const gelfree::SelfSimilarProfile p(cfg.k, 1e-13, cfg.inversion_order);
  gelfree::CsvTable lt;
  lt.header = {"s", "L_star"};
  for (double s : cfg.s_grid)
    lt.rows.push_back({gelfree::format_double(s),
                       gelfree::format_double(gelfree::L_star(p, s))});
  gelfree::write_csv(out_path(cfg, "selfsim_L.csv"), lt);

  gelfree::CsvTable mt;
  mt.header = {"x", "M_star"};
  for (double x : cfg.x_grid)
    mt.rows.push_back({gelfree::format_double(x),
                       gelfree::format_double(gelfree::M_star(p, x))});
  gelfree::write_csv(out_path(cfg, "selfsim_M.csv"), mt);

  const gelfree::InversionDiagnostics diag =
      gelfree::inversion_diagnostics(p, cfg.x_grid);
  for (const std::string& w : diag.warnings) std::cerr << w << "\n";
  return 0;
}

int run_simulate(const gelfree::RunConfig& cfg) {
  const gelfree::MeasureSpec m = gelfree::make_measure(cfg);
  std::vector<gelfree::Observer> observers;
  observers.push_back({"mean", [](const gelfree::ParticleSystem& sys) {
                         return gelfree::mean_mass_observation(sys);
                       }});
  for (double s : cfg.s_grid) {
    if (!(s > 0.0)) continue;
    observers.push_back({"laplace_s" + gelfree::format_double(s, 6),
                         [s](const gelfree::ParticleSystem& sys) {
                           return gelfree::empirical_laplace_observation(sys, s);
                         }});
  }
  const std::size_t reps = static_cast<std::size_t>(cfg.replicates);
  std::vector<gelfree::ObservationLog> logs(reps);
  gelfree::RunCaps caps;
  caps.max_events = cfg.event_cap;
  gelfree::detail::parallel_for(reps, [&](std::size_t r) {
    gelfree::ParticleSystem sys = gelfree::init_from_measure(
        m, cfg.n_particles, gelfree::detail::derive_seed(cfg.seed, r), cfg.k);
    logs[r] = gelfree::run_until(sys, cfg.t_end, observers, cfg.observe_at, caps);
  });

  // Merge replicates: single replicate keeps its per-particle standard
  // error; multiple replicates report the spread of their estimates.
  for (std::size_t o = 0; o < observers.size(); ++o) {
    gelfree::CsvTable tb;
    tb.header = {"time", "estimate", "std_error"};
    for (std::size_t ti = 0; ti < logs[0].times.size(); ++ti) {
      double est, se;
      if (reps == 1) {
        est = logs[0].series[o][ti].estimate;
        se = logs[0].series[o][ti].std_error;
      } else {
        double mean = 0.0;
        for (std::size_t r = 0; r < reps; ++r)
          mean += logs[r].series[o][ti].estimate;
        mean /= static_cast<double>(reps);
        double var = 0.0;
        for (std::size_t r = 0; r < reps; ++r) {
          const double d = logs[r].series[o][ti].estimate - mean;
          var += d * d;
        }
        var /= static_cast<double>(reps - 1);
        est = mean;
        se = std::sqrt(var / static_cast<double>(reps));
      }
      tb.rows.push_back({gelfree::format_double(logs[0].times[ti]),
                         gelfree::format_double(est),
                         gelfree::format_double(se)});
    }
    gelfree::write_csv(out_path(cfg, "simulate_" + observers[o].name + ".csv"),
                       tb);
  }
  return 0;
}

int run_validate(const gelfree::RunConfig& cfg) {
  const gelfree::ValidationReport report = gelfree::validate(cfg);
  const std::string full = gelfree::render_report(report, cfg);
  gelfree::write_text_file(out_path(cfg, "report.txt"), full);
  std::cout << full;
  return report.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coagulation-fragmentation solver and validation suite"};
  app.require_subcommand(1);
  std::vector<std::unique_ptr<SubFlags>> store;
  CLI::App* analytic =
      app.add_subcommand("analytic", "exact transform solution on a grid");
  SubFlags* fa = attach_flags(analytic, store);
  CLI::App* characteristics = app.add_subcommand(
      "characteristics", "characteristic paths from the ODE oracle");
  SubFlags* fc = attach_flags(characteristics, store);
  CLI::App* selfsim =
      app.add_subcommand("selfsim", "self-similar limit profile and its CDF");
  SubFlags* fs = attach_flags(selfsim, store);
  CLI::App* simulate =
      app.add_subcommand("simulate", "stochastic particle simulation");
  SubFlags* fm = attach_flags(simulate, store);
  CLI::App* validate_cmd =
      app.add_subcommand("validate", "run the acceptance criteria suite");
  SubFlags* fv = attach_flags(validate_cmd, store);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*analytic) return run_analytic(resolve(*fa, "analytic"));
    if (*characteristics)
      return run_characteristics(resolve(*fc, "characteristics"));
    if (*selfsim) return run_selfsim(resolve(*fs, "selfsim"));
    if (*simulate) return run_simulate(resolve(*fm, "simulate"));
    if (*validate_cmd) return run_validate(resolve(*fv, "validate"));
  } catch (const gelfree::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const gelfree::ExplosionDetected& e) {
    std::cerr << "explosion detected: " << e.what()
              << " (t = " << e.sim_time << ", events = " << e.event_count
              << ", mean mass = " << e.mean_mass << ")\n";
    return 0;
  } catch (const gelfree::Error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
