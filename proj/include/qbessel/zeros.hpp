#pragma once

// Positive zeros of J_nu(.; q^2) and of D_q J_nu(.; q^2), the Fourier-Bessel
// q-integrals built on them, and the interlacing checks.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qbessel/hahn_exton.hpp"

namespace qbessel {

enum class ZeroKind { Bessel, QDerivative };

template <typename Scalar = double>
struct ZeroRecord {
  std::size_t n = 0;
  Scalar location{0};
  /// location^2 = (q^2)^{-anchor} (1 + offset). For Bessel tables the zero is
  /// refined in these coordinates; zeros of neighbouring orders can agree in
  /// every digit of `location` and still be ordered by `offset`.
  long anchor = 0;
  Scalar offset{0};
  Scalar bracket_lo{0};
  Scalar bracket_hi{0};
  /// The final bracket in offset coordinates. Far out the two x ends above
  /// can round to the same double while these still differ.
  Scalar offset_lo{0};
  Scalar offset_hi{0};
  /// |f(location)| for the tabulated function f.
  Scalar residual{0};
  /// f'(location): J_nu' for Bessel tables, (D_q J_nu)' for q-derivative tables.
  Scalar derivative{0};
  /// Series scale of f at the zero; residuals are judged relative to it.
  Scalar scale{0};
  /// int_0^1 x J_nu(a q x; q^2)^2 d_qx by direct summation, and the closed
  /// form that the table kind predicts for it.
  Scalar norm_direct{0};
  Scalar norm_closed{0};

  AnchoredArg<Scalar> point() const { return {anchor, offset}; }
};

template <typename Scalar = double>
struct ZeroOptions {
  Scalar tol_x{1e-12};      // bracket width target, relative (see find_zeros)
  Scalar tol_resid{1e-9};   // residual bound, relative to the series scale
  std::size_t max_bisect = 400;
  std::size_t max_scan_steps = 100000;
};

template <typename Scalar = double>
struct ZeroTable {
  Order<Scalar> nu{Scalar(0)};
  Scalar q{0.5};
  ZeroKind kind = ZeroKind::Bessel;
  Scalar tol_resid{1e-9};
  std::vector<ZeroRecord<Scalar>> zeros;

  /// Ordering, residual, simplicity and (for Bessel tables) the first-zero
  /// bound. Returns an empty string when every invariant holds.
  std::string validate() const;
};

template <typename Scalar>
Scalar first_zero_bound(const Order<Scalar>& nu, std::type_identity_t<Scalar> q) {
  using std::pow;
  using std::sqrt;
  if (!(nu.nu() > Scalar(-1))) fail(ErrorKind::OrderOutOfRange, "zeros need nu > -1");
  require_base(q);
  return sqrt(Scalar(1) + pow(q, Scalar(2) * nu.nu())) / q;
}

/// Strict order of two points given in anchored coordinates.
template <typename Scalar>
bool anchored_less(const AnchoredArg<Scalar>& a, const AnchoredArg<Scalar>& b, const Scalar& base) {
  if (a.n == b.n) return a.delta < b.delta;
  return a.square(base) < b.square(base);
}

namespace detail {

/// (D_q J_nu(.; q^2))'(x) = (J'(x) - q J'(qx)) / ((1-q)x) - D_q J_nu(x) / x.
/// Lattice point x^2 = q^{-2n}(1 + delta) shifted by q^k.
template <typename Scalar>
AnchoredArg<Scalar> lattice(const AnchoredArg<Scalar>& a, std::size_t k) {
  return {a.n - static_cast<long>(k), a.delta};
}

template <typename Scalar>
Scalar dq_jq_slope(const Order<Scalar>& nu, const AnchoredArg<Scalar>& at,
                   const QContext<Scalar>& ctx) {
  const Scalar q = ctx.q();
  const Scalar base = q * q;
  const Scalar x = at.x(base);
  const Scalar d0 = jq_deriv(nu, at, base, ctx).value;
  const Scalar d1 = jq_deriv(nu, lattice(at, 1), base, ctx).value;
  return (d0 - q * d1) / ((Scalar(1) - q) * x) - dq_jq_eval(nu, at, ctx).value / x;
}

/// int_0^1 x J_nu(aqx; q^2) J_nu(bqx; q^2) d_qx. On the lattice x = q^k the
/// argument a q^{k+1} has anchor n_a - k - 1 and the offset of a.
template <typename Scalar>
Scalar lattice_product_integral(const Order<Scalar>& nu, const AnchoredArg<Scalar>& a,
                                const AnchoredArg<Scalar>& b, const QContext<Scalar>& ctx) {
  const Scalar q = ctx.q();
  const Scalar base = q * q;
  auto integrand = [&](std::size_t k, const Scalar& x) {
    return x * jq(nu, lattice(a, k + 1), base, ctx).value * jq(nu, lattice(b, k + 1), base, ctx).value;
  };
  return q_integral_indexed(integrand, Scalar(1), ctx).value;
}

template <typename Scalar>
bool sign_differs(const Scalar& a, const Scalar& b) {
  return (a < Scalar(0)) != (b < Scalar(0));
}

/// Brackets of the first n_max sign changes of f on the grid x0 rho^k.
template <typename Scalar, typename F>
std::vector<std::array<Scalar, 2>> scan(F&& f, Scalar x0, Scalar rho, std::size_t n_max,
                                        const ZeroOptions<Scalar>& opt) {
  std::vector<std::array<Scalar, 2>> out;
  Scalar x = x0;
  Scalar fx = f(x);
  for (std::size_t step = 0; out.size() < n_max; ++step) {
    if (step >= opt.max_scan_steps) {
      fail(ErrorKind::BracketingFailed,
           "scan budget exhausted after " + std::to_string(out.size()) + " of " +
               std::to_string(n_max) + " zeros");
    }
    const Scalar x2 = x * rho;
    const Scalar f2 = f(x2);
    // A zero landing exactly on a grid point is bracketed once, as [x, x2].
    if (f2 == Scalar(0) || (fx != Scalar(0) && sign_differs(fx, f2))) out.push_back({x, x2});
    x = x2;
    fx = f2;
  }
  return out;
}

/// Bisection of a sign change of g on [lo, hi]; stops once the width is
/// below `width(lo, hi)`.
template <typename Scalar, typename G, typename W>
std::array<Scalar, 2> bisect(G&& g, Scalar lo, Scalar hi, W&& width, std::size_t max_iter) {
  Scalar glo = g(lo);
  if (glo == Scalar(0)) return {lo, lo};
  if (g(hi) == Scalar(0)) return {hi, hi};
  for (std::size_t it = 0; it < max_iter; ++it) {
    if (hi - lo <= width(lo, hi)) break;
    const Scalar mid = lo + (hi - lo) / Scalar(2);
    if (mid <= lo || mid >= hi) break;
    const Scalar gm = g(mid);
    if (gm == Scalar(0)) return {mid, mid};
    if (sign_differs(gm, glo)) {
      hi = mid;
    } else {
      lo = mid;
      glo = gm;
    }
  }
  return {lo, hi};
}

template <typename Scalar>
Scalar scan_ratio(const Scalar& q) {
  return Scalar(1) + (Scalar(1) - q) / Scalar(8);
}

}  // namespace detail

/// First n_max positive zeros of x -> J_nu(x; q^2). Sign changes of the
/// regular part are located on a geometric grid, then each zero is bisected
/// in the offset coordinate of the nearest anchor q^{-n} until the offset is
/// known to relative precision tol_x (or absolute tol_x when it is not small).
template <typename Scalar>
ZeroTable<Scalar> find_zeros(const Order<Scalar>& nu, std::size_t n_max,
                             const QContext<Scalar>& ctx,
                             const ZeroOptions<Scalar>& opt = {}) {
  using std::abs;
  using std::pow;
  const Scalar q = ctx.q();
  const Scalar bound = first_zero_bound(nu, q);
  if (n_max < 1) fail(ErrorKind::DomainError, "n_max must be >= 1");
  const Scalar base = q * q;
  auto f = [&](const Scalar& x) { return jq_regular(nu, x, base, ctx).value; };
  const auto brackets = detail::scan(f, Scalar(1e-3) * bound, detail::scan_ratio(q), n_max, opt);

  ZeroTable<Scalar> table;
  table.nu = nu;
  table.q = q;
  table.kind = ZeroKind::Bessel;
  table.tol_resid = opt.tol_resid;
  for (const auto& br : brackets) {
    const auto anchor = AnchoredArg<Scalar>::nearest(std::sqrt(br[0] * br[1]), base);
    auto g = [&](const Scalar& delta) {
      return jq_regular(nu, AnchoredArg<Scalar>{anchor.n, delta}, base, ctx).value;
    };
    auto width = [&](const Scalar& lo, const Scalar& hi) {
      return opt.tol_x * std::min(Scalar(1), std::max(abs(lo), abs(hi)));
    };
    const Scalar d_lo = br[0] * br[0] * pow(base, Scalar(anchor.n)) - Scalar(1);
    const Scalar d_hi = br[1] * br[1] * pow(base, Scalar(anchor.n)) - Scalar(1);
    const auto d = detail::bisect(g, d_lo, d_hi, width, opt.max_bisect);

    ZeroRecord<Scalar> z;
    z.n = table.zeros.size() + 1;
    z.anchor = anchor.n;
    z.offset = d[0] + (d[1] - d[0]) / Scalar(2);
    z.location = z.point().x(base);
    z.bracket_lo = AnchoredArg<Scalar>{anchor.n, d[0]}.x(base);
    z.bracket_hi = AnchoredArg<Scalar>{anchor.n, d[1]}.x(base);
    z.offset_lo = d[0];
    z.offset_hi = d[1];
    const auto at = jq_regular(nu, z.point(), base, ctx);
    const Scalar power = pow(z.location, nu.nu());
    z.residual = abs(at.value) * power;
    z.scale = at.scale * power;
    z.derivative = jq_deriv(nu, z.point(), base, ctx).value;
    z.norm_direct = detail::lattice_product_integral(nu, z.point(), z.point(), ctx);
    z.norm_closed = -(Scalar(1) - q) * pow(q, nu.nu() - Scalar(1)) / Scalar(2) *
                    jq(nu.shifted(Scalar(1)), detail::lattice(z.point(), 1), base, ctx).value *
                    z.derivative;
    table.zeros.push_back(z);
  }
  return table;
}

/// Positive zeros of x -> D_q J_nu(.; q^2)(x) for nu > 0, refined in anchored
/// coordinates as in find_zeros. Each record also carries both sides of the norm
/// identity obtained from the a = b limit of the Fourier-Bessel cross integral.
template <typename Scalar>
ZeroTable<Scalar> dq_zero_table(const Order<Scalar>& nu, std::size_t n_max,
                                const QContext<Scalar>& ctx,
                                const ZeroOptions<Scalar>& opt = {}) {
  using std::abs;
  using std::pow;
  if (!(nu.nu() > Scalar(0))) fail(ErrorKind::OrderOutOfRange, "D_q zeros need nu > 0");
  if (n_max < 1) fail(ErrorKind::DomainError, "n_max must be >= 1");
  const Scalar q = ctx.q();
  const Scalar base = q * q;
  auto f = [&](const Scalar& x) { return dq_jq(nu, x, ctx); };
  const Scalar start = Scalar(1e-3) * first_zero_bound(nu, q);
  const auto brackets = detail::scan(f, start, detail::scan_ratio(q), n_max, opt);
  auto width = [&](const Scalar& lo, const Scalar& hi) {
    return opt.tol_x * std::min(Scalar(1), std::max(abs(lo), abs(hi)));
  };

  ZeroTable<Scalar> table;
  table.nu = nu;
  table.q = q;
  table.kind = ZeroKind::QDerivative;
  table.tol_resid = opt.tol_resid;
  for (const auto& br : brackets) {
    const auto anchor = AnchoredArg<Scalar>::nearest(std::sqrt(br[0] * br[1]), base);
    auto g = [&](const Scalar& delta) {
      return dq_jq_eval(nu, AnchoredArg<Scalar>{anchor.n, delta}, ctx).value;
    };
    const Scalar d_lo = br[0] * br[0] * pow(base, Scalar(anchor.n)) - Scalar(1);
    const Scalar d_hi = br[1] * br[1] * pow(base, Scalar(anchor.n)) - Scalar(1);
    const auto d = detail::bisect(g, d_lo, d_hi, width, opt.max_bisect);
    ZeroRecord<Scalar> z;
    z.n = table.zeros.size() + 1;
    z.anchor = anchor.n;
    z.offset = d[0] + (d[1] - d[0]) / Scalar(2);
    z.location = z.point().x(base);
    z.bracket_lo = AnchoredArg<Scalar>{anchor.n, d[0]}.x(base);
    z.bracket_hi = AnchoredArg<Scalar>{anchor.n, d[1]}.x(base);
    z.offset_lo = d[0];
    z.offset_hi = d[1];
    const auto at = dq_jq_eval(nu, z.point(), ctx);
    z.residual = abs(at.value);
    z.scale = at.scale;
    z.derivative = detail::dq_jq_slope(nu, z.point(), ctx);
    z.norm_direct = detail::lattice_product_integral(nu, z.point(), z.point(), ctx);
    z.norm_closed = -(Scalar(1) - q) * (Scalar(1) - q) * pow(q, nu.nu() - Scalar(2)) / Scalar(2) *
                    jq(nu, z.point(), base, ctx).value * z.derivative;
    table.zeros.push_back(z);
  }
  return table;
}

template <typename Scalar>
std::string ZeroTable<Scalar>::validate() const {
  using std::abs;
  const Scalar base = q * q;
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    const auto& z = zeros[i];
    const std::string tag = "zero " + std::to_string(z.n);
    if (!(z.location > Scalar(0))) return tag + ": not positive";
    if (i > 0 && !anchored_less(zeros[i - 1].point(), z.point(), base)) {
      return tag + ": not increasing";
    }
    if (!(z.residual <= tol_resid * z.scale)) return tag + ": residual above tolerance";
    if (!(abs(z.derivative) > Scalar(0))) return tag + ": derivative vanishes";
    if (i > 0 && (z.derivative < Scalar(0)) == (zeros[i - 1].derivative < Scalar(0))) {
      return tag + ": derivative sign does not alternate";
    }
  }
  if (kind == ZeroKind::Bessel && !zeros.empty() &&
      !(zeros.front().location < first_zero_bound(nu, q))) {
    return "first zero above q^{-1} sqrt(1 + q^{2 nu})";
  }
  return {};
}

// ---------------------------------------------------------------------------
// Fourier-Bessel q-integrals

template <typename Scalar = double>
struct CrossIntegral {
  Scalar lhs{0};
  Scalar rhs{0};
  /// Largest magnitude among the unsubtracted pieces of either side.
  Scalar scale{0};
};

/// Both sides of
///   (a^2 - b^2) int_0^z x J_nu(aqx) J_nu(bqx) d_qx
///     = (1-q) q^{nu-1} z (a J_{nu+1}(aqz) J_nu(bz) - b J_{nu+1}(bqz) J_nu(az)),
/// all in base q^2.
template <typename Scalar>
CrossIntegral<Scalar> cross_integral(const Order<Scalar>& nu, std::type_identity_t<Scalar> a,
                                     std::type_identity_t<Scalar> b,
                                     std::type_identity_t<Scalar> z,
                                     const QContext<Scalar>& ctx) {
  using std::pow;
  if (!(nu.nu() > Scalar(-1))) fail(ErrorKind::OrderOutOfRange, "cross integral needs nu > -1");
  if (!(z > Scalar(0))) fail(ErrorKind::DomainError, "upper limit z must be positive");
  if (a == Scalar(0) || b == Scalar(0)) fail(ErrorKind::DomainError, "a and b must be non-zero");
  const Scalar q = ctx.q();
  const Scalar base = q * q;
  auto integrand = [&](const Scalar& x) {
    return x * jq(nu, a * q * x, base, ctx).value * jq(nu, b * q * x, base, ctx).value;
  };
  using std::abs;
  CrossIntegral<Scalar> out;
  const Scalar integral = q_integral(integrand, z, ctx).value;
  out.lhs = (a * a - b * b) * integral;
  const Order<Scalar> up = nu.shifted(Scalar(1));
  const Scalar c = (Scalar(1) - q) * pow(q, nu.nu() - Scalar(1)) * z;
  const Scalar t1 = c * a * jq(up, a * q * z, base, ctx).value * jq(nu, b * z, base, ctx).value;
  const Scalar t2 = c * b * jq(up, b * q * z, base, ctx).value * jq(nu, a * z, base, ctx).value;
  out.rhs = t1 - t2;
  out.scale = std::max({abs(a * a * integral), abs(b * b * integral), abs(t1), abs(t2)});
  return out;
}

/// The four closed forms of int_0^1 x J_nu(q j_n x; q^2)^2 d_qx at a zero j_n:
/// via J_{nu+1}(q j_n), via D_q J_nu(j_n), via J_nu(q j_n), via J_{nu+1}(j_n).
template <typename Scalar>
std::array<Scalar, 4> norm_forms(const Order<Scalar>& nu, const AnchoredArg<Scalar>& j_n,
                                 const QContext<Scalar>& ctx, Scalar tol_resid = Scalar(1e-9)) {
  using std::abs;
  using std::pow;
  const Scalar q = ctx.q();
  const Scalar base = q * q;
  const auto at = jq(nu, j_n, base, ctx);
  if (!(abs(at.value) <= tol_resid * at.scale)) {
    fail(ErrorKind::NotAZero, "J_nu(j_n) is not small relative to its series scale");
  }
  const Order<Scalar> up = nu.shifted(Scalar(1));
  const Scalar v = nu.nu();
  const auto inner = detail::lattice(j_n, 1);
  const Scalar half_slope = jq_deriv(nu, j_n, base, ctx).value / Scalar(2);
  const Scalar one_q = Scalar(1) - q;
  return {
      -one_q * pow(q, v - Scalar(1)) * jq(up, inner, base, ctx).value * half_slope,
      one_q * one_q * pow(q, v - Scalar(2)) * dq_jq_eval(nu, j_n, ctx).value * half_slope,
      -one_q * pow(q, v - Scalar(2)) / j_n.x(base) * jq(nu, inner, base, ctx).value * half_slope,
      -one_q / (q * q) * jq(up, j_n, base, ctx).value * half_slope,
  };
}

template <typename Scalar = double>
struct OrthoReport {
  ZeroTable<Scalar> zeros;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> gram;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 4> diag_forms;
  Scalar max_offdiag{0};
  /// Largest relative spread among the four closed forms of one diagonal entry.
  Scalar max_diag_spread{0};
  /// Largest relative distance between a closed form and the direct q-integral.
  Scalar max_diag_mismatch{0};
};

template <typename Scalar>
OrthoReport<Scalar> ortho_report(const Order<Scalar>& nu, std::size_t n, const QContext<Scalar>& ctx,
                                 const ZeroOptions<Scalar>& opt = {}) {
  using std::abs;
  OrthoReport<Scalar> rep;
  rep.zeros = find_zeros(nu, n, ctx, opt);
  rep.gram.resize(n, n);
  rep.diag_forms.resize(n, 4);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i; k < n; ++k) {
      const Scalar g = detail::lattice_product_integral(nu, rep.zeros.zeros[i].point(),
                                                        rep.zeros.zeros[k].point(), ctx);
      rep.gram(i, k) = g;
      rep.gram(k, i) = g;
      if (i != k) rep.max_offdiag = std::max(rep.max_offdiag, abs(g));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto forms = norm_forms(nu, rep.zeros.zeros[i].point(), ctx, opt.tol_resid);
    Scalar lo = forms[0];
    Scalar hi = forms[0];
    for (int c = 0; c < 4; ++c) {
      rep.diag_forms(i, c) = forms[c];
      lo = std::min(lo, forms[c]);
      hi = std::max(hi, forms[c]);
      rep.max_diag_mismatch =
          std::max(rep.max_diag_mismatch, abs(forms[c] - rep.gram(i, i)) / abs(rep.gram(i, i)));
    }
    rep.max_diag_spread = std::max(rep.max_diag_spread, (hi - lo) / abs(hi));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Interlacing

template <typename Scalar = double>
struct InterlacingReport {
  ZeroTable<Scalar> zeros_nu;
  ZeroTable<Scalar> zeros_next;     // order nu + 1
  ZeroTable<Scalar> zeros_prev;     // order nu - 1, only when nu - 1 > -1
  bool chain_ok = true;             // 0 < j_1^nu < j_1^{nu+1} < j_2^nu < ...
  bool prev_chain_ok = true;        // same chain for orders nu - 1 and nu
  bool sign_changes_ok = true;      // J_{nu-1} and J_{nu+1} change sign between zeros of J_nu
  bool passed() const { return chain_ok && prev_chain_ok && sign_changes_ok; }
};

namespace detail {

/// Zeros far out in the table sit within (q^2)^{n^2} of the anchors q^{-n},
/// so the chain is compared in anchored coordinates rather than in x.
template <typename Scalar>
bool strict_chain(const ZeroTable<Scalar>& lower, const ZeroTable<Scalar>& upper) {
  const Scalar base = lower.q * lower.q;
  const std::size_t n = std::min(lower.zeros.size(), upper.zeros.size());
  if (n == 0 || !(lower.zeros[0].location > Scalar(0))) return n == 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!anchored_less(lower.zeros[i].point(), upper.zeros[i].point(), base)) return false;
    if (i + 1 < lower.zeros.size() &&
        !anchored_less(upper.zeros[i].point(), lower.zeros[i + 1].point(), base)) {
      return false;
    }
  }
  return true;
}

/// Sign of J_mu at a tabulated zero; x^mu > 0 so the regular part decides.
template <typename Scalar>
bool negative_at(const Order<Scalar>& mu, const ZeroRecord<Scalar>& z, const Scalar& base,
                 const QContext<Scalar>& ctx) {
  return jq_regular(mu, z.point(), base, ctx).value < Scalar(0);
}

}  // namespace detail

/// Through index n: the chain j_k^nu < j_k^{nu+1} < j_{k+1}^nu for k <= n
/// (the last link needs zero n+1 of order nu, which is computed as well),
/// the same chain one order lower when nu - 1 > -1, and a sign change of
/// J_{nu-1} and J_{nu+1} between consecutive zeros of J_nu.
template <typename Scalar>
InterlacingReport<Scalar> interlacing_check(const Order<Scalar>& nu, std::size_t n,
                                            const QContext<Scalar>& ctx,
                                            const ZeroOptions<Scalar>& opt = {}) {
  const Scalar base = ctx.q() * ctx.q();
  InterlacingReport<Scalar> rep;
  rep.zeros_nu = find_zeros(nu, n + 1, ctx, opt);
  rep.zeros_next = find_zeros(nu.shifted(Scalar(1)), n, ctx, opt);
  rep.chain_ok = detail::strict_chain(rep.zeros_nu, rep.zeros_next);
  if (nu.nu() - Scalar(1) > Scalar(-1)) {
    rep.zeros_prev = find_zeros(nu.shifted(Scalar(-1)), n + 1, ctx, opt);
    ZeroTable<Scalar> head = rep.zeros_nu;
    head.zeros.resize(n);
    rep.prev_chain_ok = detail::strict_chain(rep.zeros_prev, head);
  }
  const Order<Scalar> lower = nu.shifted(Scalar(-1));
  const Order<Scalar> upper = nu.shifted(Scalar(1));
  const auto& z = rep.zeros_nu.zeros;
  for (std::size_t i = 0; i + 1 < z.size(); ++i) {
    const bool lower_flips = detail::negative_at(lower, z[i], base, ctx) !=
                             detail::negative_at(lower, z[i + 1], base, ctx);
    const bool upper_flips = detail::negative_at(upper, z[i], base, ctx) !=
                             detail::negative_at(upper, z[i + 1], base, ctx);
    if (!lower_flips || !upper_flips) rep.sign_changes_ok = false;
  }
  return rep;
}

template <typename Scalar = double>
struct CommonZeroReport {
  ZeroTable<Scalar> zeros;
  std::vector<Scalar> next_values;  // J_{nu+1}(j_n; q^2)
  std::vector<Scalar> margins;
  /// |J_{nu+1}(j_n) - q^{nu+1} J_{nu+1}(q j_n)| relative to the larger side.
  Scalar max_shift_residual{0};
  bool first_positive = false;
  bool passed() const {
    for (std::size_t i = 0; i < next_values.size(); ++i) {
      if (!(std::abs(next_values[i]) > margins[i])) return false;
    }
    return first_positive;
  }
};

/// J_{nu+1} at each of the first n zeros of J_nu, against a margin of
/// 10^3 tol_resid times the series scale of J_{nu+1} there.
template <typename Scalar>
CommonZeroReport<Scalar> no_common_zero_check(const Order<Scalar>& nu, std::size_t n,
                                              const QContext<Scalar>& ctx,
                                              const ZeroOptions<Scalar>& opt = {}) {
  using std::abs;
  using std::pow;
  const Scalar q = ctx.q();
  const Scalar base = q * q;
  const Order<Scalar> up = nu.shifted(Scalar(1));
  CommonZeroReport<Scalar> rep;
  rep.zeros = find_zeros(nu, n, ctx, opt);
  for (const auto& z : rep.zeros.zeros) {
    const Scalar power = pow(z.location, up.nu());
    const auto here = jq_regular(up, z.point(), base, ctx);
    // q j_n has anchor n - 1 and the same offset.
    const AnchoredArg<Scalar> inner{z.anchor - 1, z.offset};
    const Scalar shifted = pow(q, up.nu()) * pow(q * z.location, up.nu()) *
                           jq_regular(up, inner, base, ctx).value;
    const Scalar value = here.value * power;
    rep.next_values.push_back(value);
    rep.margins.push_back(Scalar(1e3) * opt.tol_resid * here.scale * power);
    const Scalar size = std::max(abs(value), abs(shifted));
    rep.max_shift_residual = std::max(rep.max_shift_residual, abs(value - shifted) / size);
  }
  rep.first_positive = !rep.next_values.empty() && rep.next_values.front() > Scalar(0);
  return rep;
}

}  // namespace qbessel
