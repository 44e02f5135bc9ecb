#pragma once

// Hahn-Exton q-Bessel function
//
//   J_nu(x; p) = x^nu (p^{nu+1}; p)_inf / (p; p)_inf * 1phi1(0; p^{nu+1}; p, p x^2)
//
// and its companion solution
//
//   calJ_nu(x; p) = e^{i nu pi} p^{-nu/2} J_{-nu}(x p^{-nu/2}; p).
//
// The k-th coefficient of the 1phi1 is written as
//   (p^{nu+1+k}; p)_inf / ((p; p)_inf (p; p)_k)
// which is entire in nu: for nu = -n the first n coefficients vanish instead
// of producing 0/0, so J_{-n} is evaluated directly.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <type_traits>
#include <vector>

#include "qbessel/qcalc.hpp"

namespace qbessel {

template <typename Scalar = double>
class Order {
 public:
  explicit Order(Scalar nu) : nu_(nu) {
    using std::isfinite;
    if (!isfinite(nu)) fail(ErrorKind::InvalidOrder, "order must be finite");
  }

  Scalar nu() const { return nu_; }
  Order shifted(Scalar delta) const { return Order(nu_ + delta); }
  Order negated() const { return Order(-nu_); }
  bool is_integer() const { return is_integer_order(nu_); }

 private:
  Scalar nu_;
};

Order(double) -> Order<double>;

template <typename T>
using BesselEval = SeriesResult<T>;

/// A positive argument given through its square, x^2 = base^{-n} (1 + delta).
/// Near x = base^{-n/2} the factor 1 - base^n x^2 of (base x^2; base)_inf is
/// exactly -delta, so points closer together than the floating-point spacing
/// of x stay distinguishable.
template <typename Scalar = double>
struct AnchoredArg {
  long n = 0;
  Scalar delta{0};

  static AnchoredArg nearest(const Scalar& x, const Scalar& base) {
    using std::log;
    using std::pow;
    AnchoredArg a;
    a.n = nearest_integer(Scalar(2) * log(x) / -log(base));
    a.delta = x * x * pow(base, Scalar(a.n)) - Scalar(1);
    return a;
  }
  Scalar square(const Scalar& base) const {
    using std::pow;
    return pow(base, Scalar(-n)) * (Scalar(1) + delta);
  }
  Scalar x(const Scalar& base) const {
    using std::sqrt;
    return sqrt(square(base));
  }
  /// 1 - base^i x^2.
  Scalar factor(long i, const Scalar& base) const {
    using std::pow;
    if (i == n) return -delta;
    const Scalar t = pow(base, Scalar(i - n));
    return (Scalar(1) - t) - t * delta;
  }
};

namespace detail {

template <typename Scalar>
Scalar cos_pi(const Scalar& nu) {
  using std::cos;
  using std::floor;
  Scalar r = nu - Scalar(2) * floor(nu / Scalar(2));
  const Scalar twice = Scalar(2) * r;
  if (is_integer_order(twice)) {
    switch (nearest_integer(twice) % 4) {
      case 0: return Scalar(1);
      case 1: return Scalar(0);
      case 2: return Scalar(-1);
      default: return Scalar(0);
    }
  }
  return cos(r * acos(Scalar(-1)));
}

template <typename Scalar>
Scalar sin_pi(const Scalar& nu) {
  using std::floor;
  using std::sin;
  Scalar r = nu - Scalar(2) * floor(nu / Scalar(2));
  const Scalar twice = Scalar(2) * r;
  if (is_integer_order(twice)) {
    switch (nearest_integer(twice) % 4) {
      case 0: return Scalar(0);
      case 1: return Scalar(1);
      case 2: return Scalar(0);
      default: return Scalar(-1);
    }
  }
  return sin(r * acos(Scalar(-1)));
}

/// e^{i nu pi}, principal branch, exact at half-integers.
template <typename Scalar>
std::complex<Scalar> unit_phase(const Scalar& nu) {
  return {cos_pi(nu), sin_pi(nu)};
}

template <typename Scalar>
Scalar signed_power(const Scalar& x, const Scalar& nu) {
  using std::pow;
  if (is_integer_order(nu)) return pow(x, static_cast<int>(nearest_integer(nu)));
  return pow(x, nu);
}

/// Sum of c_k (-1)^k base^{k(k+1)/2} y^k with y = x^2, optionally weighted by
/// (nu + 2k) for the derivative. Returns the regular part x^{-nu} J_nu(x)
/// (or the matching weighted sum).
template <typename Scalar>
SeriesResult<Scalar> regular_series(const Scalar& nu, const Scalar& x, const Scalar& base,
                                    const QContext<Scalar>& ctx, bool derivative_weights) {
  using std::abs;
  using std::ceil;
  using std::pow;
  require_base(base);
  const Scalar s0 = nu + Scalar(1);
  const Scalar y = x * x;

  // Below kstar the exponent s0 + k can be non-positive and rho_k may vanish;
  // from kstar on rho_{k+1} = rho_k / (1 - base^{s0+k}) is safe.
  std::size_t kstar = 0;
  if (s0 <= Scalar(0.5)) kstar = static_cast<std::size_t>(ceil(Scalar(0.5) - s0)) + 1;

  SeriesResult<Scalar> head_ratio;
  Scalar rho(0);
  Scalar rho_rel_err(0);
  CompensatedSum<Scalar> sum;
  Scalar u(1);          // (-1)^k base^{k(k+1)/2} y^k / (base; base)_k
  Scalar base_k1 = base;  // base^{k+1}
  Scalar base_sk = pow(base, s0);  // base^{s0+k}

  for (std::size_t k = 0; k < ctx.max_terms(); ++k) {
    if (k <= kstar) {
      head_ratio = qpochhammer_inf_ratio(s0 + Scalar(k), Scalar(1), base, machine_precision(ctx));
      rho = head_ratio.value;
      if (head_ratio.value != Scalar(0)) {
        rho_rel_err = std::max(rho_rel_err, head_ratio.tail_bound / abs(head_ratio.value));
      }
    } else {
      rho /= (Scalar(1) - base_sk / base);
    }
    const Scalar magnitude = abs(rho * u);
    const Scalar weight = derivative_weights ? (nu + Scalar(2 * k)) : Scalar(1);
    sum += rho * u * weight;

    // Every later ratio |t_{j+1} / t_j| is at most r: both the u-ratio and
    // 1 / (1 - base^{s0+j}) decrease in j.
    const Scalar u_ratio = base_k1 * y / (Scalar(1) - base_k1);
    u *= -u_ratio;
    base_k1 *= base;
    base_sk *= base;

    if (k >= kstar) {
      const Scalar r = u_ratio / (Scalar(1) - base_sk / base);
      // Derivative weights |nu + 2j| grow by at most `growth` per step past k.
      Scalar next = magnitude * r;
      Scalar growth(1);
      if (derivative_weights) {
        const Scalar w_next = abs(nu) + Scalar(2 * k + 2);
        next *= w_next;
        growth = (w_next + Scalar(2)) / w_next;
      }
      if (r * growth < Scalar(0.5)) {
        const Scalar tail = next / (Scalar(1) - r * growth);
        if (sum.converged(tail, ctx.eps())) {
          SeriesResult<Scalar> out;
          out.value = sum.value();
          out.scale = sum.abs_sum();
          out.tail_bound = tail + rho_rel_err * sum.abs_sum();
          out.terms_used = k + 1;
          return out;
        }
      }
    }
  }
  fail(ErrorKind::TruncationBudgetExceeded, "q-Bessel series did not converge within max_terms");
}

template <typename Scalar>
void require_positive_or_integer(const Order<Scalar>& nu, const Scalar& x) {
  if (x > Scalar(0)) return;
  if (nu.is_integer() && x != Scalar(0)) return;
  fail(ErrorKind::DomainError, "J_nu(x) needs x > 0 for non-integer order");
}

/// The regular part through the symmetric form
///   (base^{nu+1}; base)_inf 1phi1(0; base^{nu+1}; base, base x^2)
///     = (base x^2; base)_inf 1phi1(0; base x^2; base, base^{nu+1}),
/// i.e. sum_k (-1)^k base^{k(k-1)/2} base^{(nu+1)k} (base^{k+1} x^2; base)_inf / (base; base)_k,
/// divided by (base; base)_inf. For base x^2 >= 1 its terms barely cancel, where
/// the power series in x^2 loses digits. With d_ds set the same sum is
/// differentiated termwise in s = x^2.
template <typename Scalar>
SeriesResult<Scalar> symmetric_series(const Scalar& nu, const AnchoredArg<Scalar>& arg,
                                      const Scalar& base, const QContext<Scalar>& ctx,
                                      bool d_ds = false) {
  using std::abs;
  using std::pow;
  require_base(base);
  const Scalar x2 = arg.square(base);
  if (!(x2 >= Scalar(0))) fail(ErrorKind::DomainError, "squared argument must be non-negative");

  // Factors 1 - base^i x^2 with base^i x^2 >= 1/2 are kept individually, as
  // one of them may vanish; the remaining tail product is well conditioned.
  std::vector<Scalar> big{Scalar(0)};  // big[i] = 1 - base^i x^2, i = 1..L
  Scalar t = base * x2;
  while (t >= Scalar(0.5)) {
    big.push_back(arg.factor(static_cast<long>(big.size()), base));
    t *= base;
  }
  const std::size_t L = big.size() - 1;
  const auto tail_product = qpochhammer_inf(t, base, machine_precision(ctx));  // (base^{L+1} x^2; base)_inf
  std::vector<Scalar> suffix(L + 1, Scalar(1));             // prod_{i=k+1}^{L} big[i]
  std::vector<Scalar> d_suffix(L + 1, Scalar(0));           // its s-derivative
  for (std::size_t k = L; k-- > 0;) {
    const Scalar base_i = pow(base, Scalar(k + 1));
    suffix[k] = big[k + 1] * suffix[k + 1];
    d_suffix[k] = big[k + 1] * d_suffix[k + 1] - base_i * suffix[k + 1];
  }
  // log-derivative of (base^{k+1} x^2; base)_inf, starting at k = L:
  // sum_{i > L} -base^i / (1 - base^i x^2).
  Scalar log_slope(0);
  if (d_ds) {
    Scalar base_i = pow(base, Scalar(L + 1));
    for (std::size_t i = 0; i < ctx.max_terms(); ++i) {
      const Scalar term = base_i / (Scalar(1) - base_i * x2);
      log_slope -= term;
      if (term <= std::numeric_limits<Scalar>::epsilon() * abs(log_slope)) break;
      base_i *= base;
    }
  }

  const auto norm = qpochhammer_inf(base, base, machine_precision(ctx));
  const Scalar w = pow(base, nu + Scalar(1));
  Scalar rel_err = (tail_product.value != Scalar(0) ? tail_product.tail_bound / abs(tail_product.value)
                                                    : Scalar(0)) +
                   norm.tail_bound / norm.value;

  CompensatedSum<Scalar> sum;
  Scalar c(1);               // (-1)^k base^{k(k-1)/2} w^k / (base; base)_k
  Scalar base_k(1);          // base^k
  Scalar product = tail_product.value;  // (base^{k+1} x^2; base)_inf once k >= L
  Scalar next_factor = Scalar(1) - t;   // 1 - base^{k+2} x^2 once k >= L
  for (std::size_t k = 0; k < ctx.max_terms(); ++k) {
    Scalar p_k;
    if (k < L) {
      p_k = d_ds ? d_suffix[k] * tail_product.value + suffix[k] * tail_product.value * log_slope
                 : suffix[k] * tail_product.value;
    } else {
      if (k > L) {
        product /= next_factor;
        log_slope += base_k / next_factor;
        next_factor = Scalar(1) - (Scalar(1) - next_factor) * base;
      }
      p_k = d_ds ? product * log_slope : product;
    }
    const Scalar term = c * p_k;
    sum += term;
    const Scalar ratio = base_k * w / (Scalar(1) - base_k * base);
    c *= -ratio;
    base_k *= base;
    if (k >= L) {
      // Later term ratios are base^j w / ((1 - base^{j+1}) (1 - base^{j+1} x^2)),
      // decreasing in j.
      const Scalar r = ratio / next_factor;
      if (r < Scalar(0.5)) {
        const Scalar tail = abs(term) * r / (Scalar(1) - r);
        if (sum.converged(tail, ctx.eps())) {
          SeriesResult<Scalar> out;
          out.value = sum.value() / norm.value;
          out.scale = sum.abs_sum() / norm.value;
          out.tail_bound = tail / norm.value + rel_err * out.scale;
          out.terms_used = k + 1;
          return out;
        }
      }
    }
  }
  fail(ErrorKind::TruncationBudgetExceeded, "q-Bessel series did not converge within max_terms");
}

/// Picks the better conditioned of the two series for the regular part.
/// For nu + 1 < 0 the symmetric form carries weights base^{(nu+1)k} > 1 and can
/// cancel worse than the power series even where base x^2 >= 1; there both
/// are summed and the one with the smaller error bound wins.
template <typename Scalar>
SeriesResult<Scalar> regular_part(const Scalar& nu, const AnchoredArg<Scalar>& arg,
                                  const Scalar& base, const QContext<Scalar>& ctx) {
  if (arg.n >= 1 || base * arg.square(base) >= Scalar(1)) {
    auto sym = symmetric_series(nu, arg, base, ctx);
    if (nu + Scalar(1) < Scalar(0)) {
      auto power = regular_series(nu, arg.x(base), base, ctx, false);
      if (power.tail_bound < sym.tail_bound) return power;
    }
    return sym;
  }
  return regular_series(nu, arg.x(base), base, ctx, false);
}

template <typename Scalar>
SeriesResult<Scalar> regular_part(const Scalar& nu, const Scalar& x, const Scalar& base,
                                  const QContext<Scalar>& ctx) {
  if (base * x * x >= Scalar(1)) {
    AnchoredArg<Scalar> arg;
    arg.delta = x * x - Scalar(1);
    return regular_part(nu, arg, base, ctx);
  }
  return regular_series(nu, x, base, ctx, false);
}

}  // namespace detail

/// x^{-nu} J_nu(x; base): entire and even in x, defined for every real x.
template <typename Scalar>
BesselEval<Scalar> jq_regular(const Order<Scalar>& nu, std::type_identity_t<Scalar> x,
                              std::type_identity_t<Scalar> base, const QContext<Scalar>& ctx) {
  return detail::regular_part(nu.nu(), x, base, ctx);
}

/// x^{-nu} J_nu(x; base) at x^2 = base^{-n} (1 + delta).
template <typename Scalar>
BesselEval<Scalar> jq_regular(const Order<Scalar>& nu, const AnchoredArg<Scalar>& arg,
                              std::type_identity_t<Scalar> base, const QContext<Scalar>& ctx) {
  return detail::regular_part(nu.nu(), arg, base, ctx);
}

template <typename Scalar>
BesselEval<Scalar> jq(const Order<Scalar>& nu, std::type_identity_t<Scalar> x,
                      std::type_identity_t<Scalar> base, const QContext<Scalar>& ctx) {
  using std::abs;
  detail::require_positive_or_integer(nu, x);
  auto out = detail::regular_part(nu.nu(), x, base, ctx);
  const Scalar power = detail::signed_power(x, nu.nu());
  out.value *= power;
  out.tail_bound *= abs(power);
  out.scale *= abs(power);
  return out;
}

template <typename Scalar>
BesselEval<Scalar> jq(const Order<Scalar>& nu, const AnchoredArg<Scalar>& arg,
                      std::type_identity_t<Scalar> base, const QContext<Scalar>& ctx) {
  using std::abs;
  auto out = detail::regular_part(nu.nu(), arg, base, ctx);
  const Scalar power = detail::signed_power(arg.x(base), nu.nu());
  out.value *= power;
  out.tail_bound *= abs(power);
  out.scale *= abs(power);
  return out;
}

/// d/dx J_nu at x^2 = base^{-n} (1 + delta): x^{nu-1} (nu g + 2 s g'(s)) with
/// g the regular part and s = x^2, where the symmetric form applies.
template <typename Scalar>
BesselEval<Scalar> jq_deriv(const Order<Scalar>& nu, const AnchoredArg<Scalar>& arg,
                            std::type_identity_t<Scalar> base, const QContext<Scalar>& ctx);

/// d/dx J_nu(x; base) by termwise differentiation of x^{nu+2k}.
template <typename Scalar>
BesselEval<Scalar> jq_deriv(const Order<Scalar>& nu, std::type_identity_t<Scalar> x,
                            std::type_identity_t<Scalar> base, const QContext<Scalar>& ctx) {
  using std::abs;
  if (!(x > Scalar(0))) fail(ErrorKind::DomainError, "J_nu'(x) needs x > 0");
  if (base * x * x >= Scalar(1)) return jq_deriv(nu, AnchoredArg<Scalar>::nearest(x, base), base, ctx);
  auto out = detail::regular_series(nu.nu(), x, base, ctx, true);
  const Scalar power = detail::signed_power(x, nu.nu() - Scalar(1));
  out.value *= power;
  out.tail_bound *= abs(power);
  out.scale *= abs(power);
  return out;
}

template <typename Scalar>
BesselEval<Scalar> jq_deriv(const Order<Scalar>& nu, const AnchoredArg<Scalar>& arg,
                            std::type_identity_t<Scalar> base, const QContext<Scalar>& ctx) {
  using std::abs;
  using std::pow;
  const Scalar s = arg.square(base);
  const Scalar x = arg.x(base);
  if (!(arg.n >= 1 || base * s >= Scalar(1))) {
    auto out = detail::regular_series(nu.nu(), x, base, ctx, true);
    const Scalar power = detail::signed_power(x, nu.nu() - Scalar(1));
    out.value *= power;
    out.tail_bound *= abs(power);
    out.scale *= abs(power);
    return out;
  }
  const auto g = detail::symmetric_series(nu.nu(), arg, base, ctx);
  const auto dg = detail::symmetric_series(nu.nu(), arg, base, ctx, true);
  const Scalar power = pow(x, nu.nu() - Scalar(1));
  BesselEval<Scalar> out;
  out.value = power * (nu.nu() * g.value + Scalar(2) * s * dg.value);
  out.tail_bound = power * (abs(nu.nu()) * g.tail_bound + Scalar(2) * s * dg.tail_bound);
  out.scale = power * (abs(nu.nu()) * g.scale + Scalar(2) * s * dg.scale);
  out.terms_used = std::max(g.terms_used, dg.terms_used);
  return out;
}

/// Second solution calJ_nu(x; base). Integer orders use calJ_n = J_n, since
/// the defining expression degenerates there.
template <typename Scalar>
BesselEval<std::complex<Scalar>> jq_second(const Order<Scalar>& nu,
                                           std::type_identity_t<Scalar> x,
                                           std::type_identity_t<Scalar> base,
                                           const QContext<Scalar>& ctx) {
  using std::pow;
  if (!(x > Scalar(0))) fail(ErrorKind::DomainError, "calJ_nu(x) needs x > 0");
  BesselEval<std::complex<Scalar>> out;
  if (nu.is_integer()) {
    const auto j = jq(Order<Scalar>(Scalar(nearest_integer(nu.nu()))), x, base, ctx);
    out.value = std::complex<Scalar>(j.value, Scalar(0));
    out.tail_bound = j.tail_bound;
    out.scale = j.scale;
    out.terms_used = j.terms_used;
    return out;
  }
  const Scalar stretch = pow(base, -nu.nu() / Scalar(2));
  const auto j = jq(nu.negated(), x * stretch, base, ctx);
  const auto phase = detail::unit_phase(nu.nu());
  out.value = phase * (stretch * j.value);
  out.tail_bound = stretch * j.tail_bound;
  out.scale = stretch * j.scale;
  out.terms_used = j.terms_used;
  return out;
}

/// D_q J_nu(.; q^2)(x) in closed form:
///   -q/(1-q) J_{nu+1}(xq; q^2) + (1 - q^nu)/(x(1-q)) J_nu(x; q^2).
template <typename Scalar>
BesselEval<Scalar> dq_jq_eval(const Order<Scalar>& nu, std::type_identity_t<Scalar> x,
                              const QContext<Scalar>& ctx) {
  using std::abs;
  using std::pow;
  if (!(x > Scalar(0))) fail(ErrorKind::DomainError, "D_q J_nu(x) needs x > 0");
  const Scalar q = ctx.q();
  const Scalar base = q * q;
  const auto upper = jq(nu.shifted(Scalar(1)), x * q, base, ctx);
  const auto same = jq(nu, x, base, ctx);
  const Scalar c_upper = -q / (Scalar(1) - q);
  const Scalar c_same = (Scalar(1) - pow(q, nu.nu())) / (x * (Scalar(1) - q));
  BesselEval<Scalar> out;
  out.value = c_upper * upper.value + c_same * same.value;
  out.tail_bound = abs(c_upper) * upper.tail_bound + abs(c_same) * same.tail_bound;
  out.scale = abs(c_upper) * upper.scale + abs(c_same) * same.scale;
  out.terms_used = std::max(upper.terms_used, same.terms_used);
  return out;
}

/// The same at x^2 = q^{-2n} (1 + delta); q x then has anchor n - 1.
template <typename Scalar>
BesselEval<Scalar> dq_jq_eval(const Order<Scalar>& nu, const AnchoredArg<Scalar>& arg,
                              const QContext<Scalar>& ctx) {
  using std::abs;
  using std::pow;
  const Scalar q = ctx.q();
  const Scalar base = q * q;
  const Scalar x = arg.x(base);
  const auto upper = jq(nu.shifted(Scalar(1)), AnchoredArg<Scalar>{arg.n - 1, arg.delta}, base, ctx);
  const auto same = jq(nu, arg, base, ctx);
  const Scalar c_upper = -q / (Scalar(1) - q);
  const Scalar c_same = (Scalar(1) - pow(q, nu.nu())) / (x * (Scalar(1) - q));
  BesselEval<Scalar> out;
  out.value = c_upper * upper.value + c_same * same.value;
  out.tail_bound = abs(c_upper) * upper.tail_bound + abs(c_same) * same.tail_bound;
  out.scale = abs(c_upper) * upper.scale + abs(c_same) * same.scale;
  out.terms_used = std::max(upper.terms_used, same.terms_used);
  return out;
}

template <typename Scalar>
Scalar dq_jq(const Order<Scalar>& nu, std::type_identity_t<Scalar> x, const QContext<Scalar>& ctx) {
  return dq_jq_eval(nu, x, ctx).value;
}

/// Left side of the Wronskian-type identity
///   J_nu(x) calJ_nu(x p^{1/2}) - calJ_nu(x) J_nu(x p^{1/2}),  all in base p.
template <typename Scalar>
std::complex<Scalar> wronskian(const Order<Scalar>& nu, std::type_identity_t<Scalar> x,
                               std::type_identity_t<Scalar> base, const QContext<Scalar>& ctx) {
  using std::sqrt;
  const Scalar shifted = x * sqrt(base);
  const Scalar j0 = jq(nu, x, base, ctx).value;
  const Scalar j1 = jq(nu, shifted, base, ctx).value;
  const auto c0 = jq_second(nu, x, base, ctx).value;
  const auto c1 = jq_second(nu, shifted, base, ctx).value;
  return j0 * c1 - c0 * j1;
}

/// p^{nu(nu-2)/2} e^{i nu pi} (p^nu; p)_inf (p^{1-nu}; p)_inf / (p; p)_inf^2.
template <typename Scalar>
std::complex<Scalar> wronskian_closed_form(const Order<Scalar>& nu,
                                           std::type_identity_t<Scalar> base,
                                           const QContext<Scalar>& ctx) {
  using std::pow;
  const Scalar v = nu.nu();
  const Scalar ratio = qpochhammer_inf_ratio(v, Scalar(1), base, ctx).value *
                       qpochhammer_inf_ratio(Scalar(1) - v, Scalar(1), base, ctx).value;
  return detail::unit_phase(v) * (pow(base, v * (v - Scalar(2)) / Scalar(2)) * ratio);
}

}  // namespace qbessel
