#pragma once

#include <cmath>
#include <vector>

#include "plap/errors.hpp"
#include "plap/fastmath.hpp"
#include "plap/nonlinearity.hpp"
#include "plap/quadrature.hpp"

namespace plap {

/// Precomputed structure of the level-time integrand
///     w(s) = [F(rho) - F(s)]^{-1/p}  on [0, rho].
/// The radicand vanishes at rho (always) and at 0 when F(rho) = 0; near those
/// endpoints it is evaluated from exact local polynomials so there is no
/// cancellation, and its vanishing orders k0, k1 are read off the local
/// coefficients.  Integrals are computed with the substitution
/// s = e +/- sigma^{p/(p-k)} at an endpoint of order k < p, which removes the
/// singularity entirely.
class LevelMap {
public:
  LevelMap(const NonlinearitySpec& f, double p, double rho)
      : f_(&f), p_(p), rho_(rho) {
    if (!(p > 1.0)) throw argument_error("p must exceed 1");
    if (!(rho > 0.0) || rho > f.cap() * (1.0 + 1e-12))
      throw argument_error("rho must lie in (0, M]");
    rho_ = std::min(rho, f.cap());
    Frho_ = f.primitive(rho_);

    const auto& bp = f.breakpoints();
    // piece covering s just below rho
    std::size_t kr = f.piece_index(rho_);
    if (kr > 0 && rho_ == bp[kr]) kr = kr - 1;
    upper_valid_lo_ = bp[kr];
    // F(rho) - F(rho - d) as a polynomial in d >= 0
    std::vector<double> prim = poly::antiderivative(f.pieces()[kr]);
    // recover the accumulated constant so values match f.primitive exactly
    double x0 = rho_ - bp[kr];
    std::vector<double> shifted = poly::taylor_shift(prim, x0);
    upper_local_.assign(shifted.size(), 0.0);
    for (std::size_t i = 1; i < shifted.size(); ++i)
      upper_local_[i] = ((i % 2 == 0) ? -1.0 : 1.0) * shifted[i];
    upper_local_[0] = 0.0;

    auto [k1_idx, k1_lead] = detail::leading_term(upper_local_);
    k1_ = (k1_idx <= 0) ? std::numeric_limits<double>::infinity()
                        : static_cast<double>(k1_idx);
    k1_lead_ = k1_lead;

    // F(rho) - F(s) on the first piece, as a polynomial in s
    lower_valid_hi_ = bp[1];
    const auto& p0 = f.pieces().front();
    std::vector<double> prim0 = poly::antiderivative(p0);
    lower_local_.assign(prim0.size(), 0.0);
    lower_local_[0] = Frho_;
    for (std::size_t i = 1; i < prim0.size(); ++i) lower_local_[i] = -prim0[i];

    double fscale = std::max(1.0, poly::eval_abs(lower_local_, lower_valid_hi_));
    lower_singular_ = std::abs(Frho_) <= 1e-10 * fscale;
    if (lower_singular_) {
      std::vector<double> tmp = lower_local_;
      tmp[0] = 0.0;
      auto [k0_idx, k0_lead] = detail::leading_term(tmp);
      k0_ = (k0_idx <= 0) ? std::numeric_limits<double>::infinity()
                          : static_cast<double>(k0_idx);
      k0_lead_ = k0_lead;
    }
  }

  double p() const { return p_; }
  double rho() const { return rho_; }
  double level_integral_upper_bound() const { return Frho_; }
  bool lower_singular() const { return lower_singular_; }
  /// Vanishing order of F(rho) - F(s) at s = rho-.
  double upper_order() const { return k1_; }
  /// T(rho) is finite iff the upper order is below p.
  bool upper_integrable() const { return k1_ < p_; }

  /// F(rho) - F(s), evaluated without cancellation near the endpoints.
  double radicand(double s) const {
    double r;
    if (s >= upper_valid_lo_ && rho_ - s <= 0.5 * rho_) {
      r = poly::eval(upper_local_, rho_ - s);
    } else if (s <= lower_valid_hi_ && s <= 0.5 * rho_) {
      r = poly::eval(lower_local_, s);
    } else {
      r = Frho_ - f_->primitive(s);
    }
    return guard(r);
  }

  /// Radicand as a function of the distance d = rho - s; avoids the
  /// cancellation of reconstructing s when d is far below rounding scale.
  double radicand_from_top(double d) const { return guard(poly::eval(upper_local_, d)); }

  /// Radicand as a function of s within the first piece.
  double radicand_from_bottom(double s) const {
    return guard(poly::eval(lower_local_, s));
  }

  double integrand(double s) const { return detail::pow_neg_inv(radicand(s), p_); }

  /// d/dv of the unscaled level integral, i.e. the integrand at v.
  double derivative_at(double v) const { return integrand(v); }

  /// integral of radicand^{-1/p} over [a, b] subset of [0, rho].
  double segment(double a, double b, double abs_tol) const {
    if (!(b > a)) return 0.0;
    double total = 0.0;
    double seg_a = a, seg_b = b;

    if (lower_singular_ && a < 0.25 * rho_) {
      if (k0_ >= p_ && a <= 0.0)
        throw divergence_error("level integral diverges at s = 0");
      double m = std::min(b, std::min(lower_valid_hi_, 0.25 * rho_));
      if (m > a) {
        total += substituted_lower(a, m, abs_tol);
        seg_a = m;
      }
    }
    double hi_start = std::max({0.75 * rho_, upper_valid_lo_, seg_a});
    if (upper_integrable() && b > hi_start) {
      total += substituted_upper(std::max(seg_a, hi_start), b, abs_tol);
      seg_b = std::max(seg_a, hi_start);
    }
    if (seg_b > seg_a) {
      // split at breakpoints: the radicand is only C^1 across them, which
      // can silence the Gauss-Kronrod error estimate on a straddling panel
      double lo = seg_a;
      for (double b_k : f_->breakpoints()) {
        if (b_k <= lo || b_k >= seg_b) continue;
        total += quad::integrate([this](double s) { return integrand(s); }, lo, b_k,
                                 abs_tol, 6000)
                     .value;
        lo = b_k;
      }
      total += quad::integrate([this](double s) { return integrand(s); }, lo, seg_b,
                               abs_tol, 6000)
                   .value;
    }
    return total;
  }

private:
  double guard(double r) const {
    if (r <= 0.0) {
      if (r < -1e-9 * std::max(1.0, std::abs(Frho_)))
        throw internal_error("negative radicand: F(s) exceeds F(rho) inside the range");
      r = 1e-280;
    }
    return r;
  }

  double substituted_lower(double a, double b, double abs_tol) const {
    double q = p_ / (p_ - k0_);
    double sa = std::pow(a, 1.0 / q), sb = std::pow(b, 1.0 / q);
    auto r = quad::integrate(
        [this, q](double sigma) {
          return q * detail::pow_abs(sigma, q - 1.0) *
                 detail::pow_neg_inv(radicand_from_bottom(detail::pow_abs(sigma, q)), p_);
        },
        sa, sb, abs_tol, 4000);
    return r.value;
  }

  double substituted_upper(double a, double b, double abs_tol) const {
    double q = p_ / (p_ - k1_);
    double sa = std::pow(rho_ - a, 1.0 / q), sb = std::pow(rho_ - b, 1.0 / q);
    auto r = quad::integrate(
        [this, q](double sigma) {
          return q * detail::pow_abs(sigma, q - 1.0) *
                 detail::pow_neg_inv(radicand_from_top(detail::pow_abs(sigma, q)), p_);
        },
        sb, sa, abs_tol, 4000);
    return r.value;
  }

  const NonlinearitySpec* f_;
  double p_, rho_, Frho_;
  bool lower_singular_ = false;
  double k0_ = 0.0, k0_lead_ = 0.0;
  double k1_ = 0.0, k1_lead_ = 0.0;
  double upper_valid_lo_ = 0.0, lower_valid_hi_ = 0.0;
  std::vector<double> upper_local_, lower_local_;
};

inline double time_prefactor(double p) { return std::pow((p - 1.0) / p, 1.0 / p); }

/// T(v): the time at which the monotone profile toward rho reaches level v.
/// Diverges (error) at v = rho when the endpoint order is at least p.
inline double time_of_level(const NonlinearitySpec& f, double p, double rho, double v) {
  if (!(v >= 0.0)) throw argument_error("level must be nonnegative");
  if (v > rho * (1.0 + 1e-12)) throw argument_error("level exceeds rho");
  if (v == 0.0) return 0.0;
  LevelMap lm(f, p, rho);
  bool at_top = v >= rho * (1.0 - 1e-14);
  if (at_top && !lm.upper_integrable())
    throw divergence_error("time-of-level integral diverges at v = rho");
  return time_prefactor(p) * lm.segment(0.0, at_top ? rho : v, 1e-12);
}

}  // namespace plap
