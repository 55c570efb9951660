#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "plap/errors.hpp"
#include "plap/polynomial.hpp"

namespace plap {

/// A zero of f in [0, M] together with its one-sided local structure:
/// f(t) ~ lead_right * (t - z)^order_right as t -> z+ (and analogously on
/// the left).  Sides that fall outside [0, M] are absent.
struct ZeroInfo {
  double z = 0.0;
  std::optional<int> order_right;
  std::optional<double> lead_right;
  std::optional<int> order_left;
  std::optional<double> lead_left;
  bool isolated = true;
  /// Set when the zero is a whole interval [z, continuum_hi] (f vanishes
  /// identically on a piece).
  std::optional<double> continuum_hi;
};

/// Piecewise-polynomial nonlinearity on [0, M].  Piece k is a polynomial in
/// (t - b_k) valid on [b_k, b_{k+1}]; continuity at interior breakpoints is
/// exact by construction (piece k+1's constant coefficient is overwritten
/// with the value of piece k at the shared breakpoint).  The primitive
/// F(t) = integral of f from 0 to t is carried exactly as the piecewise
/// antiderivative with accumulated constants, so F' = f and F(0) = 0.
class NonlinearitySpec {
public:
  static NonlinearitySpec create(std::vector<double> breakpoints,
                                 std::vector<std::vector<double>> pieces,
                                 double cap) {
    if (breakpoints.size() < 2) throw argument_error("need at least two breakpoints");
    if (pieces.size() + 1 != breakpoints.size())
      throw argument_error("pieces/breakpoints size mismatch");
    if (breakpoints.front() != 0.0) throw argument_error("first breakpoint must be 0");
    for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k)
      if (!(breakpoints[k] < breakpoints[k + 1]))
        throw argument_error("breakpoints must be strictly ascending");
    if (!(cap > 0.0)) throw argument_error("cap M must be positive");
    if (breakpoints.back() != cap)
      throw argument_error("cap must equal the last breakpoint");
    for (auto& piece : pieces)
      if (piece.empty()) piece.push_back(0.0);

    // Stitch continuity: the constant term of piece k+1 is piece k's value
    // at the shared breakpoint.  Reject inputs that disagree materially.
    for (std::size_t k = 0; k + 1 < pieces.size(); ++k) {
      double len = breakpoints[k + 1] - breakpoints[k];
      double v = poly::eval(pieces[k], len);
      double scale = std::max(1.0, poly::eval_abs(pieces[k], len));
      if (std::abs(pieces[k + 1][0] - v) > 1e-9 * scale) {
        std::ostringstream os;
        os << "pieces disagree at breakpoint " << breakpoints[k + 1] << ": " << v
           << " vs " << pieces[k + 1][0];
        throw argument_error(os.str());
      }
      pieces[k + 1][0] = v;
    }

    NonlinearitySpec f;
    f.breakpoints_ = std::move(breakpoints);
    f.pieces_ = std::move(pieces);
    double accum = 0.0;
    for (std::size_t k = 0; k < f.pieces_.size(); ++k) {
      f.primitives_.push_back(poly::antiderivative(f.pieces_[k], accum));
      double len = f.breakpoints_[k + 1] - f.breakpoints_[k];
      accum = poly::eval(f.primitives_[k], len);
    }
    return f;
  }

  double cap() const { return breakpoints_.back(); }
  std::size_t piece_count() const { return pieces_.size(); }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<std::vector<double>>& pieces() const { return pieces_; }

  std::size_t piece_index(double t) const {
    // rightmost piece whose interval contains t; t == M maps to the last
    std::size_t lo = 0, hi = pieces_.size() - 1;
    while (lo < hi) {
      std::size_t mid = (lo + hi + 1) / 2;
      if (breakpoints_[mid] <= t)
        lo = mid;
      else
        hi = mid - 1;
    }
    return lo;
  }

  double operator()(double t) const { return eval(t); }

  double eval(double t) const {
    check_domain(t);
    std::size_t k = piece_index(t);
    return poly::eval(pieces_[k], t - breakpoints_[k]);
  }

  /// F(t), the exact piecewise antiderivative with F(0) = 0.
  double primitive(double t) const {
    check_domain(t);
    std::size_t k = piece_index(t);
    return poly::eval(primitives_[k], t - breakpoints_[k]);
  }

  /// Local coefficient magnitude around t; zero-location certificates are
  /// relative to this.
  double coefficient_scale(double t) const {
    std::size_t k = piece_index(std::clamp(t, 0.0, cap()));
    double s = 0.0;
    for (double c : pieces_[k]) s = std::max(s, std::abs(c));
    return std::max(s, 1e-30);
  }

private:
  void check_domain(double t) const {
    if (!(t >= 0.0) || !(t <= cap())) {
      std::ostringstream os;
      os << "argument " << t << " outside the analysis window [0, " << cap() << "]";
      throw domain_error(os.str());
    }
  }

  std::vector<double> breakpoints_;
  std::vector<std::vector<double>> pieces_;
  std::vector<std::vector<double>> primitives_;
};

namespace detail {

/// Lowest index with a coefficient that stands above shift rounding noise.
inline std::pair<int, double> leading_term(const std::vector<double>& shifted) {
  double scale = 0.0;
  for (double c : shifted) scale = std::max(scale, std::abs(c));
  double tol = 1e-9 * std::max(scale, 1e-30);
  for (std::size_t i = 0; i < shifted.size(); ++i)
    if (std::abs(shifted[i]) > tol) return {static_cast<int>(i), shifted[i]};
  return {-1, 0.0};
}

}  // namespace detail

/// Every zero of f in [0, M], each reported once, ascending.  Locations of
/// breakpoint and rational roots of linear pieces are exact; other roots are
/// bisection enclosures of width well below 1e-12.  One-sided orders and
/// leading coefficients come from Taylor shifts of the adjacent pieces.
/// A piece on which f vanishes identically is reported as a single
/// non-isolated entry covering its interval.
inline std::vector<ZeroInfo> isolate_zeros(const NonlinearitySpec& f) {
  const auto& bp = f.breakpoints();
  const auto& pieces = f.pieces();

  struct RawZero {
    double z;
    bool continuum;
    double hi;
  };
  std::vector<RawZero> raw;
  auto push = [&raw](double z, bool continuum, double hi) {
    for (auto& r : raw)
      if (!r.continuum && !continuum && std::abs(r.z - z) <= 1e-11 * std::max(1.0, std::abs(z)))
        return;
    raw.push_back({z, continuum, hi});
  };

  for (std::size_t k = 0; k < pieces.size(); ++k) {
    double len = bp[k + 1] - bp[k];
    if (poly::identically_zero(pieces[k])) {
      push(bp[k], true, bp[k + 1]);
      continue;
    }
    for (double x : poly::real_roots_in(pieces[k], 0.0, len)) {
      double z = bp[k] + x;
      // snap enclosure roots that are really breakpoint roots
      for (double b : bp)
        if (std::abs(z - b) <= 1e-11 * std::max(1.0, std::abs(b))) z = b;
      push(z, false, 0.0);
    }
  }
  std::sort(raw.begin(), raw.end(), [](const RawZero& a, const RawZero& b) { return a.z < b.z; });

  std::vector<ZeroInfo> zeros;
  for (const auto& r : raw) {
    ZeroInfo info;
    info.z = r.z;
    if (r.continuum) {
      info.isolated = false;
      info.continuum_hi = r.hi;
      zeros.push_back(info);
      continue;
    }
    std::size_t k = f.piece_index(r.z);
    bool at_left_bp = (r.z == bp[k]);

    if (r.z < f.cap()) {
      if (poly::identically_zero(pieces[k])) {
        info.isolated = false;
      } else {
        auto [m, c] = detail::leading_term(poly::taylor_shift(pieces[k], r.z - bp[k]));
        info.order_right = m;
        info.lead_right = c;
      }
    }
    if (r.z > 0.0) {
      std::size_t kl = (at_left_bp && k > 0) ? k - 1 : k;
      if (poly::identically_zero(pieces[kl])) {
        info.isolated = false;
      } else {
        auto [m, c] = detail::leading_term(poly::taylor_shift(pieces[kl], r.z - bp[kl]));
        info.order_left = m;
        info.lead_left = c;
      }
    }
    zeros.push_back(info);
  }
  return zeros;
}

struct SmpVerdict {
  bool holds_right = true;
  bool holds_left = true;
  bool holds() const { return holds_right && holds_left; }
};

/// Leading-order decision rule for the one-sided growth condition of f near
/// a zero z relative to |t - z|^{p-1}:
///   right: liminf f(t)/(t-z)^{p-1} > -inf   iff  m+ >= p-1 or c+ > 0,
///   left : limsup f(t)/(z-t)^{p-1} < +inf   iff  m- >= p-1 or c-(-1)^{m-} < 0.
/// Sides at the domain endpoints are not applicable and report as holding.
inline SmpVerdict check_smp(const NonlinearitySpec& /*f*/, double p, const ZeroInfo& z) {
  if (!(p > 1.0)) throw argument_error("p must exceed 1");
  if (!z.isolated) throw hypothesis_error("non-isolated zero: the growth test is undefined");
  SmpVerdict v;
  if (z.order_right) {
    double m = static_cast<double>(*z.order_right);
    v.holds_right = (m >= p - 1.0) || (*z.lead_right > 0.0);
  }
  if (z.order_left) {
    double m = static_cast<double>(*z.order_left);
    double signed_limit = *z.lead_left * ((*z.order_left % 2 == 0) ? 1.0 : -1.0);
    v.holds_left = (m >= p - 1.0) || (signed_limit < 0.0);
  }
  return v;
}

struct NoZeroLeft {
  bool holds = false;
  double epsilon = 0.0;
};

/// Largest eps with no zero of f in (rho - eps, rho); rho must be a zero.
inline NoZeroLeft check_no_zero_left_of(const NonlinearitySpec& f, double rho) {
  auto zeros = isolate_zeros(f);
  const double tol = 1e-9 * std::max(1.0, std::abs(rho));
  bool rho_is_zero = false;
  for (const auto& z : zeros) {
    if (z.continuum_hi)
      rho_is_zero |= (rho >= z.z - tol && rho <= *z.continuum_hi + tol);
    else
      rho_is_zero |= (std::abs(z.z - rho) <= tol);
  }
  if (!rho_is_zero) throw argument_error("rho is not a zero of f");

  double below = 0.0;
  for (const auto& z : zeros) {
    if (z.continuum_hi) {
      if (z.z < rho - tol && *z.continuum_hi >= rho - tol) return {false, 0.0};
      if (*z.continuum_hi < rho - tol) below = std::max(below, *z.continuum_hi);
    } else if (z.z < rho - tol) {
      below = std::max(below, z.z);
    }
  }
  return {true, rho - below};
}

enum class Verdict { Holds, Fails, NotApplicable };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    default: return "not-applicable";
  }
}

struct HypothesisReport {
  struct Entry {
    Verdict verdict = Verdict::NotApplicable;
    std::string witness;
  };
  std::map<std::string, Entry> verdicts;
  std::optional<double> gamma;           // present only when N > p+1
  int order_at_zero = 0;                 // f(t) ~ lead * t^order as t -> 0+
  double lead_at_zero = 0.0;
  std::optional<double> rho;             // the positive zero when (i) holds

  bool all_hold() const {
    for (const auto& [k, e] : verdicts)
      if (e.verdict == Verdict::Fails) return false;
    return true;
  }
};

/// Hypotheses under which bounded half-space solutions are rigid (depend on
/// the height alone): the sign pattern of f around its positive zero, the
/// growth condition there, a subcritical vanishing order at 0 relative to
/// the gamma exponent when N > p+1, the ratio-limit condition that enters
/// for p >= 2, and the dimensional constraint N(p-2)+2 >= 0.
inline HypothesisReport check_rigidity_hypotheses(const NonlinearitySpec& f, double p, int N) {
  if (!(p > 1.0)) throw argument_error("p must exceed 1");
  if (N < 2) throw argument_error("N must be at least 2");
  HypothesisReport rep;
  auto zeros = isolate_zeros(f);
  for (const auto& z : zeros)
    if (!z.isolated)
      throw hypothesis_error("zero continuum starting at t = " + std::to_string(z.z));

  const double Np = static_cast<double>(N);
  if (Np > p + 1.0) {
    rep.gamma = (p - 1.0) * (Np - 1.0) / (Np - p - 1.0);
    rep.verdicts["dimension_constraint"] = {
        Np * (p - 2.0) + 2.0 >= 0.0 ? Verdict::Holds : Verdict::Fails,
        "N(p-2)+2 = " + std::to_string(Np * (p - 2.0) + 2.0)};
  }

  // leading order of f at 0+
  if (f.eval(0.0) != 0.0) {
    rep.order_at_zero = 0;
    rep.lead_at_zero = f.eval(0.0);
  } else {
    auto [m, c] = detail::leading_term(f.pieces().front());
    rep.order_at_zero = m;
    rep.lead_at_zero = c;
  }

  // (i) sign pattern: a single zero rho in (0, M], f > 0 before, f < 0 after
  std::vector<const ZeroInfo*> interior;
  for (const auto& z : zeros)
    if (z.z > 1e-12) interior.push_back(&z);
  auto& sign_entry = rep.verdicts["sign_pattern"];
  if (interior.empty()) {
    sign_entry = {Verdict::Fails, "f has no positive zero"};
  } else if (interior.size() > 1) {
    sign_entry = {Verdict::Fails,
                  "extra zero at t = " + std::to_string(interior[1]->z)};
  } else {
    double r = interior[0]->z;
    double before = f.eval(0.5 * r);
    bool ok = before > 0.0;
    std::string wit;
    if (!ok) wit = "f(" + std::to_string(0.5 * r) + ") = " + std::to_string(before);
    if (ok && r < f.cap()) {
      double mid = 0.5 * (r + f.cap());
      if (!(f.eval(mid) < 0.0)) {
        ok = false;
        wit = "f(" + std::to_string(mid) + ") = " + std::to_string(f.eval(mid));
      } else if (!(f.eval(f.cap()) < 0.0)) {
        ok = false;
        wit = "f(M) = " + std::to_string(f.eval(f.cap()));
      }
    }
    sign_entry = {ok ? Verdict::Holds : Verdict::Fails, wit};
    if (ok) rep.rho = r;
  }

  // (ii) growth condition at rho
  if (rep.rho) {
    for (const auto& z : zeros)
      if (std::abs(z.z - *rep.rho) < 1e-11) {
        auto v = check_smp(f, p, z);
        rep.verdicts["smp_at_rho"] = {v.holds() ? Verdict::Holds : Verdict::Fails,
                                      v.holds() ? "" : "growth test fails at rho"};
      }
  } else {
    rep.verdicts["smp_at_rho"] = {Verdict::NotApplicable, "no admissible rho"};
  }

  // (iii) f(t) > c0 t^gamma near 0.  With f ~ c t^m this is satisfiable iff
  // c > 0 and, when N > p+1 pins gamma, m <= gamma; for N <= p+1 any
  // gamma >= max(m, 1) works.
  {
    bool ok = rep.lead_at_zero > 0.0;
    std::string wit;
    if (!ok) {
      wit = "leading coefficient at 0 is " + std::to_string(rep.lead_at_zero);
    } else if (rep.gamma && static_cast<double>(rep.order_at_zero) > *rep.gamma) {
      ok = false;
      wit = "vanishing order " + std::to_string(rep.order_at_zero) +
            " exceeds gamma = " + std::to_string(*rep.gamma);
    }
    rep.verdicts["subcritical_growth"] = {ok ? Verdict::Holds : Verdict::Fails, wit};
  }

  // extra condition for p >= 2: f(t)/t^{p-1} tends to 0 or has positive liminf
  if (p >= 2.0) {
    double m = static_cast<double>(rep.order_at_zero);
    bool ok = (m > p - 1.0) || (rep.lead_at_zero > 0.0);
    rep.verdicts["p_ge_2_limit"] = {
        ok ? Verdict::Holds : Verdict::Fails,
        ok ? (m > p - 1.0 ? "limit 0" : "liminf positive")
           : "ratio diverges to -infinity"};
  } else {
    rep.verdicts["p_ge_2_limit"] = {Verdict::NotApplicable, "p < 2"};
  }
  return rep;
}

}  // namespace plap
