#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "plap/ball.hpp"
#include "plap/classification.hpp"
#include "plap/errors.hpp"
#include "plap/nonlinearity.hpp"
#include "plap/profile.hpp"
#include "plap/strip.hpp"

namespace plap {
namespace io {

using json = nlohmann::ordered_json;

/// 17 significant digits: round-trips doubles exactly and reproducibly.
inline std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline NonlinearitySpec parse_nonlinearity(const json& j) {
  if (!j.is_object() || !j.contains("breakpoints") || !j.contains("pieces") ||
      !j.contains("cap"))
    throw config_error("nonlinearity needs fields breakpoints, pieces, cap");
  std::vector<double> bp = j.at("breakpoints").get<std::vector<double>>();
  std::vector<std::vector<double>> pieces =
      j.at("pieces").get<std::vector<std::vector<double>>>();
  double cap = j.at("cap").get<double>();
  try {
    return NonlinearitySpec::create(std::move(bp), std::move(pieces), cap);
  } catch (const argument_error& e) {
    throw config_error(std::string("bad nonlinearity: ") + e.what());
  }
}

struct RunConfig {
  std::string command;
  double p = 2.0;
  int N = 2;
  std::optional<NonlinearitySpec> f;
  double rho = 0.0;
  double t_max = 8.0;
  int n = 4097;
  std::vector<double> r_list;
  int J = 1024;
  double eps = 0.05;
  double W = 8.0, H = 12.0;
  int nx = 65, ny = 129;
  std::uint64_t seed = 0;
  StripInit init = StripInit::PerturbedProfile;
};

inline RunConfig parse_config(const json& j) {
  RunConfig cfg;
  if (!j.contains("command")) throw config_error("config lacks a command");
  cfg.command = j.at("command").get<std::string>();
  if (cfg.command != "audit" && cfg.command != "classify" && cfg.command != "profile" &&
      cfg.command != "ball" && cfg.command != "strip")
    throw config_error("unknown command: " + cfg.command);
  if (!j.contains("p")) throw config_error("config lacks p");
  cfg.p = j.at("p").get<double>();
  if (!(cfg.p > 1.0)) throw config_error("p must exceed 1, got " + fmt(cfg.p));
  if (!j.contains("nonlinearity")) throw config_error("config lacks the nonlinearity");
  cfg.f = parse_nonlinearity(j.at("nonlinearity"));

  auto need = [&](const char* field) -> const json& {
    if (!j.contains(field))
      throw config_error(std::string("command ") + cfg.command + " needs field " + field);
    return j.at(field);
  };

  if (cfg.command == "audit" || cfg.command == "ball") {
    cfg.N = need("N").get<int>();
    if (cfg.N < 2) throw config_error("N must be at least 2");
  }
  if (cfg.command == "profile") {
    if (j.contains("t_max")) cfg.t_max = j.at("t_max").get<double>();
    if (j.contains("n")) cfg.n = j.at("n").get<int>();
    if (!(cfg.t_max > 0.0)) throw config_error("t_max must be positive");
    if (cfg.n < 257) throw config_error("n must be at least 257");
  }
  if (cfg.command == "ball" || cfg.command == "strip") {
    cfg.rho = need("rho").get<double>();
    if (!(cfg.rho > 0.0)) throw config_error("rho must be positive");
    if (cfg.rho > cfg.f->cap())
      throw config_error("analysis window cap " + fmt(cfg.f->cap()) +
                         " is below rho = " + fmt(cfg.rho));
  }
  if (cfg.command == "ball") {
    cfg.eps = need("eps").get<double>();
    if (!(cfg.eps > 0.0)) throw config_error("eps must be positive");
    cfg.r_list = need("r_list").get<std::vector<double>>();
    if (cfg.r_list.empty()) throw config_error("r_list must be nonempty");
    if (j.contains("J")) cfg.J = j.at("J").get<int>();
    if (cfg.J < 128) throw config_error("J must be at least 128");
  }
  if (cfg.command == "strip") {
    cfg.W = need("W").get<double>();
    cfg.H = need("H").get<double>();
    cfg.nx = need("nx").get<int>();
    cfg.ny = need("ny").get<int>();
    if (!(cfg.W > 0.0) || !(cfg.H > 0.0)) throw config_error("W and H must be positive");
    if (cfg.nx < 33 || cfg.ny < 33) throw config_error("nx and ny must be at least 33");
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    std::string init = j.contains("init") ? j.at("init").get<std::string>()
                                          : std::string("perturbed-profile");
    if (init == "perturbed-profile")
      cfg.init = StripInit::PerturbedProfile;
    else if (init == "random")
      cfg.init = StripInit::Random;
    else if (init == "zero")
      cfg.init = StripInit::Zero;
    else
      throw config_error("unknown init mode: " + init);
  }
  return cfg;
}

// ---- report documents -----------------------------------------------------

inline json zero_info_json(const ZeroInfo& z) {
  json o;
  o["z"] = z.z;
  if (z.order_right) {
    o["order_right"] = *z.order_right;
    o["lead_right"] = *z.lead_right;
  }
  if (z.order_left) {
    o["order_left"] = *z.order_left;
    o["lead_left"] = *z.lead_left;
  }
  o["isolated"] = z.isolated;
  if (z.continuum_hi) o["continuum_hi"] = *z.continuum_hi;
  return o;
}

inline json classification_report(const NonlinearitySpec& f, double p,
                                  const Catalog& cat) {
  json rep;
  rep["p"] = p;
  json zs = json::array();
  for (const auto& z : cat.report.zf) {
    json o = zero_info_json(z);
    auto v = check_smp(f, p, z);
    o["smp_holds_right"] = v.holds_right;
    o["smp_holds_left"] = v.holds_left;
    zs.push_back(o);
  }
  rep["zeros"] = zs;
  rep["zf_star"] = cat.report.zf_star;
  rep["zf0"] = cat.report.zf0 ? json(*cat.report.zf0) : json(nullptr);
  rep["pf"] = cat.report.pf ? json(*cat.report.pf) : json(nullptr);
  rep["smp_all"] = cat.report.smp_all;
  rep["outside_hypotheses"] = cat.outside_hypotheses;
  json entries = json::array();
  for (const auto& e : cat.entries) {
    json o;
    o["kind"] = to_string(e.kind);
    o["rho"] = e.rho;
    o["slope0"] = e.slope0;
    if (e.half_period) o["half_period"] = *e.half_period;
    entries.push_back(o);
  }
  rep["catalog"] = entries;
  return rep;
}

inline json audit_report(const NonlinearitySpec& f, double p, int N) {
  json rep;
  rep["p"] = p;
  rep["N"] = N;
  json zs = json::array();
  for (const auto& z : isolate_zeros(f)) {
    json o = zero_info_json(z);
    if (z.isolated) {
      auto v = check_smp(f, p, z);
      o["smp_holds_right"] = v.holds_right;
      o["smp_holds_left"] = v.holds_left;
    }
    zs.push_back(o);
  }
  rep["zeros"] = zs;
  HypothesisReport hr = check_rigidity_hypotheses(f, p, N);
  json verdicts;
  for (const auto& [name, entry] : hr.verdicts) {
    json o;
    o["verdict"] = to_string(entry.verdict);
    if (!entry.witness.empty()) o["witness"] = entry.witness;
    verdicts[name] = o;
  }
  rep["verdicts"] = verdicts;
  if (hr.gamma) rep["gamma"] = *hr.gamma;
  rep["leading_order_at_zero"] = {{"order", hr.order_at_zero}, {"lead", hr.lead_at_zero}};
  if (hr.rho) rep["rho"] = *hr.rho;
  return rep;
}

inline std::string profile_csv(const Profile& prof) {
  std::string out = "t,u,du\n";
  for (std::size_t i = 0; i < prof.t.size(); ++i)
    out += fmt(prof.t[i]) + "," + fmt(prof.u[i]) + "," + fmt(prof.du[i]) + "\n";
  return out;
}

inline json profile_sidecar(const Profile& prof, double t_max, int n) {
  json o;
  o["kind"] = to_string(prof.entry.kind);
  o["rho"] = prof.entry.rho;
  o["slope0"] = prof.entry.slope0;
  if (prof.entry.half_period) o["half_period"] = *prof.entry.half_period;
  o["t_max"] = t_max;
  o["n"] = n;
  o["max_first_integral_residual"] = prof.max_first_integral_residual;
  o["max_ode_residual"] = prof.max_ode_residual;
  return o;
}

inline std::string scan_csv(const ScanResult& scan) {
  std::string out = "r,J,sup_norm,energy\n";
  for (const auto& row : scan.table)
    out += fmt(row.r) + "," + std::to_string(row.J) + "," + fmt(row.sup_norm) + "," +
           fmt(row.energy) + "\n";
  return out;
}

inline std::string field_csv(const GridSolution& sol) {
  std::string out = "i,j,x,y,u\n";
  double hx = sol.W / sol.nx, hy = sol.H / (sol.ny - 1);
  for (int j = 0; j < sol.ny; ++j)
    for (int i = 0; i < sol.nx; ++i)
      out += std::to_string(i) + "," + std::to_string(j) + "," + fmt(hx * i) + "," +
             fmt(hy * j) + "," + fmt(sol.at(i, j)) + "\n";
  return out;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw config_error("cannot write " + path.string());
  os << content;
}

}  // namespace io
}  // namespace plap
