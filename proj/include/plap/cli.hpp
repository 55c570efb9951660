#pragma once

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include "plap/io.hpp"
#include "plap/svg.hpp"

namespace plap {
namespace cli {

// exit codes
inline constexpr int exit_ok = 0;
inline constexpr int exit_config = 1;
inline constexpr int exit_hypothesis = 2;
inline constexpr int exit_convergence = 3;

namespace detail {

inline void run_profile_command(const io::RunConfig& cfg,
                                const std::filesystem::path& out, bool verbose) {
  const NonlinearitySpec& f = *cfg.f;
  Catalog cat = catalog(f, cfg.p);
  io::write_file(out / "classification.json",
                 io::classification_report(f, cfg.p, cat).dump(2) + "\n");
  int idx = 0;
  for (const auto& entry : cat.entries) {
    if (entry.kind == ProfileKind::Trivial) continue;
    ++idx;
    Profile prof = build_profile(f, cfg.p, entry, cfg.t_max, cfg.n);
    std::string stem = "profile_" + std::to_string(idx);
    io::write_file(out / (stem + ".csv"), io::profile_csv(prof));
    io::write_file(out / (stem + ".json"),
                   io::profile_sidecar(prof, cfg.t_max, cfg.n).dump(2) + "\n");
    svgplot::Series s;
    s.x = prof.t;
    s.y = prof.u;
    s.label = to_string(entry.kind);
    io::write_file(out / (stem + ".svg"),
                   svgplot::line_plot({s}, "profile (rho = " + io::fmt(entry.rho) + ")",
                                      "t", "u"));
    if (verbose)
      std::fprintf(stderr, "profile %d: kind=%s rho=%s residual=%g\n", idx,
                   to_string(entry.kind), io::fmt(entry.rho).c_str(),
                   prof.max_first_integral_residual);
  }
}

inline void run_ball_command(const io::RunConfig& cfg, const std::filesystem::path& out,
                             bool verbose) {
  const NonlinearitySpec& f = *cfg.f;
  ScanResult scan = sup_norm_scan(f, cfg.p, cfg.N, cfg.rho, cfg.eps, cfg.r_list, cfg.J);
  io::write_file(out / "ball_scan.csv", io::scan_csv(scan));
  io::json summary;
  summary["rho"] = cfg.rho;
  summary["eps"] = cfg.eps;
  summary["N"] = cfg.N;
  summary["p"] = cfg.p;
  summary["J"] = cfg.J;
  summary["R0"] = scan.R0;
  summary["sup_norm_monotone"] = scan.sup_norm_monotone;
  // hypothesis verdicts of the truncation
  io::json hyp;
  hyp["f0_nonnegative"] = f.eval(0.0) >= 0.0;
  hyp["f_rho_zero"] = std::abs(f.eval(cfg.rho)) <= 1e-10 * f.coefficient_scale(cfg.rho);
  hyp["F_rho_positive_below"] = true;  // truncate() would have refused otherwise
  summary["hypotheses"] = hyp;
  io::write_file(out / "ball_summary.json", summary.dump(2) + "\n");
  if (verbose) std::fprintf(stderr, "ball scan: R0 = %s\n", io::fmt(scan.R0).c_str());
}

inline void run_strip_command(const io::RunConfig& cfg, const std::filesystem::path& out,
                              bool verbose) {
  const NonlinearitySpec& f = *cfg.f;
  GridSolution sol =
      solve_strip(f, cfg.p, cfg.rho, cfg.W, cfg.H, cfg.nx, cfg.ny, cfg.init, cfg.seed);
  io::write_file(out / "strip_field.csv", io::field_csv(sol));
  io::json summary;
  summary["p"] = cfg.p;
  summary["rho"] = cfg.rho;
  summary["W"] = cfg.W;
  summary["H"] = cfg.H;
  summary["nx"] = cfg.nx;
  summary["ny"] = cfg.ny;
  summary["seed"] = cfg.seed;
  summary["energy"] = sol.energy;
  summary["iterations"] = sol.iterations;
  summary["symmetry_deviation"] = sol.symmetry_deviation;
  summary["profile_mismatch"] = sol.profile_mismatch;
  io::write_file(out / "strip_summary.json", summary.dump(2) + "\n");

  double hy = sol.H / (sol.ny - 1);
  svgplot::Series means, oscs;
  means.label = "row mean";
  oscs.label = "row oscillation";
  oscs.stroke = "#b23a1f";
  for (int j = 0; j < sol.ny; ++j) {
    double lo = sol.at(0, j), hi = lo, sum = 0.0;
    for (int i = 0; i < sol.nx; ++i) {
      double v = sol.at(i, j);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      sum += v;
    }
    means.x.push_back(hy * j);
    means.y.push_back(sum / sol.nx);
    oscs.x.push_back(hy * j);
    oscs.y.push_back(hi - lo);
  }
  io::write_file(out / "strip_rows.svg",
                 svgplot::line_plot({means, oscs}, "strip rows", "height", "value"));
  if (verbose)
    std::fprintf(stderr, "strip: deviation=%g mismatch=%g iters=%ld\n",
                 sol.symmetry_deviation, sol.profile_mismatch, sol.iterations);
}

}  // namespace detail

/// Dispatch one parsed run configuration, writing all artifacts under
/// out_dir.  Returns the process exit code.
inline int run(const io::RunConfig& cfg, const std::string& out_dir,
               std::optional<std::uint64_t> seed_override = std::nullopt,
               bool verbose = false) {
  try {
    io::RunConfig local = cfg;
    if (seed_override) local.seed = *seed_override;
    std::filesystem::path out(out_dir);
    std::filesystem::create_directories(out);

    if (local.command == "audit") {
      io::write_file(out / "audit.json",
                     io::audit_report(*local.f, local.p, local.N).dump(2) + "\n");
    } else if (local.command == "classify") {
      Catalog cat = catalog(*local.f, local.p);
      io::write_file(out / "classification.json",
                     io::classification_report(*local.f, local.p, cat).dump(2) + "\n");
    } else if (local.command == "profile") {
      detail::run_profile_command(local, out, verbose);
    } else if (local.command == "ball") {
      detail::run_ball_command(local, out, verbose);
    } else if (local.command == "strip") {
      detail::run_strip_command(local, out, verbose);
    } else {
      std::fprintf(stderr, "error: unknown command %s\n", local.command.c_str());
      return exit_config;
    }
    return exit_ok;
  } catch (const hypothesis_error& e) {
    std::fprintf(stderr, "hypothesis refusal: %s\n", e.what());
    return exit_hypothesis;
  } catch (const convergence_error& e) {
    std::fprintf(stderr, "non-convergence: %s\n", e.what());
    return exit_convergence;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_config;
  }
}

}  // namespace cli
}  // namespace plap
