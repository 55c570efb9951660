#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "plap/errors.hpp"
#include "plap/nonlinearity.hpp"
#include "plap/time_map.hpp"

namespace plap {

/// The zero set of f with the derived special sets.  zf_star lists the
/// limits rho > 0 of increasing bounded profiles (it contains zf0 when that
/// is present); pf, when present, is the maximum of the unique periodic
/// profile.  zf0 and pf require f(0) < 0 and each holds at most one value.
struct ZeroSetReport {
  std::vector<ZeroInfo> zf;
  std::vector<double> zf_star;
  std::optional<double> zf0;
  std::optional<double> pf;
  bool smp_all = true;
};

namespace detail {

inline void require_isolated(const std::vector<ZeroInfo>& zeros) {
  for (const auto& z : zeros)
    if (!z.isolated)
      throw hypothesis_error(
          "f vanishes identically near t = " + std::to_string(z.z) +
          ": classification requires isolated zeros");
}

}  // namespace detail

/// Decide Z_f*, Z_f0 and P_f exactly.  Maxima of F over [0, z) are taken
/// over the critical points of F (the zeros of f) plus t = 0, which is exact
/// for piecewise polynomials; ties count as failure of the strict
/// inequality.  Candidates for Z_f0 and P_f are the roots of F itself.
inline ZeroSetReport special_zero_sets(const NonlinearitySpec& f, double p) {
  ZeroSetReport rep;
  rep.zf = isolate_zeros(f);
  detail::require_isolated(rep.zf);

  for (const auto& z : rep.zf) {
    auto v = check_smp(f, p, z);
    rep.smp_all = rep.smp_all && v.holds();
  }

  // Z_f* proper: F(t) < F(z) for all t in [0, z), tested at t = 0 and at
  // every critical point below z.
  for (const auto& z : rep.zf) {
    if (!(z.z > 0.0)) continue;
    double Fz = f.primitive(z.z);
    bool pass = 0.0 < Fz;
    for (const auto& other : rep.zf) {
      if (!pass) break;
      if (other.z > 0.0 && other.z < z.z) pass = f.primitive(other.z) < Fz;
    }
    if (pass) rep.zf_star.push_back(z.z);
  }

  if (f.eval(0.0) < 0.0) {
    // roots of F in (0, M]
    std::vector<double> froots;
    const auto& bp = f.breakpoints();
    for (std::size_t k = 0; k < f.piece_count(); ++k) {
      std::vector<double> prim = poly::antiderivative(f.pieces()[k]);
      prim[0] = f.primitive(bp[k]);
      for (double x : poly::real_roots_in(prim, 0.0, bp[k + 1] - bp[k])) {
        double t = bp[k] + x;
        if (t > 1e-11) froots.push_back(t);
      }
    }
    std::sort(froots.begin(), froots.end());

    int qualifying = 0;
    for (double zf : froots) {
      bool negative_below = true;
      for (const auto& z : rep.zf)
        if (z.z > 1e-12 && z.z < zf - 1e-11) negative_below &= f.primitive(z.z) < 0.0;
      // also reject if an earlier F-root lies strictly inside (0, zf)
      for (double other : froots)
        if (other < zf - 1e-11 * std::max(1.0, zf)) negative_below = false;
      if (!negative_below) continue;
      ++qualifying;
      // is zf a zero of f, or a crossing with f > 0?
      const ZeroInfo* match = nullptr;
      for (const auto& z : rep.zf)
        if (std::abs(z.z - zf) <= 1e-9 * std::max(1.0, zf)) match = &z;
      if (match) {
        rep.zf0 = match->z;
      } else {
        if (!(f.eval(zf) > 0.0))
          throw internal_error("F returns to zero with f <= 0 at a non-zero of f");
        rep.pf = zf;
      }
    }
    if (qualifying > 1)
      throw internal_error("more than one first return of F to zero");
  }

  if (rep.zf0) {
    rep.zf_star.push_back(*rep.zf0);
    std::sort(rep.zf_star.begin(), rep.zf_star.end());
    rep.zf_star.erase(std::unique(rep.zf_star.begin(), rep.zf_star.end()),
                      rep.zf_star.end());
  }
  return rep;
}

/// u'(0) of the increasing profile with limit rho.
inline double boundary_slope(const NonlinearitySpec& f, double p, double rho) {
  if (!(p > 1.0)) throw argument_error("p must exceed 1");
  double Frho = f.primitive(rho);
  double scale = std::max(1.0, std::abs(Frho));
  if (Frho < -1e-12 * scale)
    throw argument_error("F(rho) < 0: no admissible increasing profile");
  Frho = std::max(Frho, 0.0);
  return std::pow(p / (p - 1.0) * Frho, 1.0 / p);
}

/// Half-period t* of the periodic profile; rho must be the element of P_f.
inline double half_period(const NonlinearitySpec& f, double p, double rho) {
  auto rep = special_zero_sets(f, p);
  if (!rep.pf || std::abs(*rep.pf - rho) > 1e-9 * std::max(1.0, rho))
    throw argument_error("rho is not the periodic level of f");
  return time_of_level(f, p, *rep.pf, *rep.pf);
}

enum class ProfileKind { Trivial, Increasing, Periodic };

inline const char* to_string(ProfileKind k) {
  switch (k) {
    case ProfileKind::Trivial: return "trivial";
    case ProfileKind::Increasing: return "increasing";
    default: return "periodic";
  }
}

struct ProfileEntry {
  ProfileKind kind = ProfileKind::Trivial;
  double rho = 0.0;
  double slope0 = 0.0;
  std::optional<double> half_period;
};

/// The full catalog of bounded nonnegative profiles for (f, p): the trivial
/// profile, one increasing entry per element of zf_star (ascending), and the
/// periodic entry when P_f is nonempty.  When the growth condition fails at
/// some zero the catalog is still emitted but flagged as lying outside the
/// hypotheses of the classification.
struct Catalog {
  std::vector<ProfileEntry> entries;
  bool outside_hypotheses = false;
  ZeroSetReport report;
};

inline Catalog catalog(const NonlinearitySpec& f, double p) {
  Catalog cat;
  cat.report = special_zero_sets(f, p);
  cat.outside_hypotheses = !cat.report.smp_all;
  cat.entries.push_back({ProfileKind::Trivial, 0.0, 0.0, std::nullopt});
  for (double rho : cat.report.zf_star) {
    bool is_zf0 = cat.report.zf0 && std::abs(*cat.report.zf0 - rho) <= 1e-12;
    double slope = is_zf0 ? 0.0 : boundary_slope(f, p, rho);
    cat.entries.push_back({ProfileKind::Increasing, rho, slope, std::nullopt});
  }
  if (cat.report.pf) {
    double rho = *cat.report.pf;
    cat.entries.push_back(
        {ProfileKind::Periodic, rho, 0.0, time_of_level(f, p, rho, rho)});
  }
  return cat;
}

}  // namespace plap
