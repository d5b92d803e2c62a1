#include "ptsusy/analytic_ref.hpp"

#include "ptsusy/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace ptsusy {

namespace {

double sech(double x) { return 1.0 / std::cosh(x); }

// atan(e^t) without overflow for large t.
double atan_exp(double t) {
  if (t > 0.0)
    return std::numbers::pi / 2.0 - std::atan(std::exp(-t));
  return std::atan(std::exp(t));
}

bool is_nonpositive_integer(double v) {
  return v <= 0.0 && std::nearbyint(v) == v;
}

bool is_integer(double v, double tol = 1e-9) {
  return std::abs(v - std::nearbyint(v)) <= tol;
}

// 2F1 power series at argument w, truncated at 200 terms or once the
// remaining tail (bounded geometrically by |term| |w| / (1 - |w|)) drops
// below 1e-12 of the partial sum. A nonpositive-integer a or b terminates
// the sum exactly.
double gauss_series(double a, double b, double c, double w) {
  const bool terminating =
      is_nonpositive_integer(a) || is_nonpositive_integer(b);
  long k_stop = 200;
  if (is_nonpositive_integer(a))
    k_stop = static_cast<long>(-a);
  if (is_nonpositive_integer(b))
    k_stop = std::min(k_stop, static_cast<long>(-b));

  const double r = std::abs(w);
  const double tail_factor = (r < 1.0) ? std::max(1.0, r / (1.0 - r)) : -1.0;

  double term = 1.0;
  double sum = 1.0;
  for (long k = 0; k < k_stop; ++k) {
    term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * w;
    sum += term;
    if (!terminating && tail_factor > 0.0 &&
        std::abs(term) * tail_factor <= 1e-12 * std::abs(sum))
      return sum;
  }
  if (terminating)
    return sum; // exact polynomial
  throw SolverError("hyp2f1: series failed to reach 1e-12 in 200 terms");
}

} // namespace

double hyp2f1(double a, double b, double c, double z) {
  if (is_nonpositive_integer(c))
    throw std::invalid_argument("hyp2f1: c is a nonpositive integer (pole)");
  if (z > 0.0)
    throw std::invalid_argument("hyp2f1: only z <= 0 is supported");
  if (z == 0.0)
    return 1.0;
  if (is_nonpositive_integer(a) || is_nonpositive_integer(b))
    return gauss_series(a, b, c, z);
  // Pfaff transform keeps the series argument in [1/3, 1) for z <= -1/2 and
  // the direct series converges comfortably above that.
  if (z <= -0.5)
    return std::pow(1.0 - z, -a) * gauss_series(a, c - b, c, z / (z - 1.0));
  return gauss_series(a, b, c, z);
}

std::vector<BoundStateEnergy> bound_energies(double mu, double lambda_bar) {
  if (mu == 0.0)
    throw std::invalid_argument("bound_energies: mu must be non-zero");
  std::vector<BoundStateEnergy> out;
  const double mu2 = mu * mu;
  for (int n = 0; n < lambda_bar - 1.0; ++n) {
    const double kappa = lambda_bar - 1.0 - n;
    out.push_back({n, 0.25 * mu2 - kappa * kappa * mu2, SpectrumTag::both});
  }
  return out;
}

std::vector<BoundStateEnergy> partner1_energies(const ScarfParams &p) {
  auto levels = bound_energies(p.mu, lambda_bar(p));
  for (auto &lvl : levels)
    lvl.which = SpectrumTag::both;
  levels.push_back({-1, 0.0, SpectrumTag::partner1});
  std::sort(levels.begin(), levels.end(),
            [](const BoundStateEnergy &a, const BoundStateEnergy &b) {
              return a.energy < b.energy;
            });
  return levels;
}

ClosedFormWavefunction zero_mode(const ScarfParams &p) {
  validate(p, true);
  const double mu = p.mu;
  const double ratio = p.lambda / p.mu;
  ClosedFormWavefunction w;
  w.value = [mu, ratio](double x) {
    const double mod = std::sqrt(sech(mu * x));
    const double phase = 2.0 * ratio * atan_exp(mu * x);
    return Complex(mod * std::cos(phase), mod * std::sin(phase));
  };
  // psi0' = U psi0: the state is annihilated by (-d/dx + U).
  const Superpotential u = scarf2_superpotential(p, true);
  auto value = w.value;
  w.derivative = [u, value](double x) {
    return Complex(u.a(x), u.b(x)) * value(x);
  };
  w.parity = Parity::none;
  w.n = std::nullopt;
  return w;
}

ClosedFormWavefunction closed_form_state(Partner which, int n,
                                         const ScarfParams &p) {
  validate(p, true);
  if (n != 0 && n != 1)
    throw std::invalid_argument("closed_form_state: n must be 0 or 1");
  if (std::abs(p.lambda / p.mu + 2.5) > 1e-12)
    throw std::invalid_argument(
        "closed_form_state: requires lambda/mu = -5/2 (lambda_bar = 3)");

  const double mu = p.mu;
  ClosedFormWavefunction w;
  w.n = n;

  if (which == Partner::two && n == 0) {
    w.parity = Parity::even;
    w.value = [mu](double x) {
      const double s = sech(mu * x);
      return Complex(s * s, 0.0);
    };
    w.derivative = [mu](double x) {
      const double s = sech(mu * x);
      return Complex(-2.0 * mu * s * s * std::tanh(mu * x), 0.0);
    };
  } else if (which == Partner::two && n == 1) {
    w.parity = Parity::odd;
    w.value = [mu](double x) {
      const double s = sech(mu * x);
      return Complex(s * s * std::sinh(mu * x), 0.0);
    };
    w.derivative = [mu](double x) {
      const double s = sech(mu * x);
      return Complex(mu * s * (2.0 * s * s - 1.0), 0.0);
    };
  } else if (which == Partner::one && n == 0) {
    w.parity = Parity::none;
    w.value = [mu](double x) {
      const double s = sech(mu * x);
      const double t = std::tanh(mu * x);
      return s * s * Complex(t, s);
    };
    w.derivative = [mu](double x) {
      const double s = sech(mu * x);
      const double t = std::tanh(mu * x);
      return mu * s * s * Complex(s * s - 2.0 * t * t, -3.0 * s * t);
    };
  } else {
    w.parity = Parity::none;
    w.value = [mu](double x) {
      const double s = sech(mu * x);
      const double sh = std::sinh(mu * x);
      return s * Complex(1.0 - 5.0 / 3.0 * s * s, 5.0 / 3.0 * s * s * sh);
    };
    w.derivative = [mu](double x) {
      const double s = sech(mu * x);
      const double t = std::tanh(mu * x);
      const double sh = std::sinh(mu * x);
      const double ch = std::cosh(mu * x);
      const Complex g(1.0 - 5.0 / 3.0 * s * s, 5.0 / 3.0 * s * s * sh);
      const Complex gp(10.0 / 3.0 * mu * s * s * t,
                       5.0 / 3.0 * mu * s * s * (ch - 2.0 * t * sh));
      return -mu * s * t * g + s * gp;
    };
  }
  return w;
}

namespace {

// P^m_l(x) with sqrt(1-x^2) supplied by the caller: for x = tanh(u) the
// factor is sech(u), and computing it directly avoids the catastrophic
// cancellation in 1 - x^2 once |u| is a few tens.
double assoc_legendre_with(int l, int m, double x, double somx2) {
  if (m < 0 || m > l)
    throw std::invalid_argument("assoc_legendre: need 0 <= m <= l");
  // P^m_m with Condon-Shortley phase, then upward recurrence in degree.
  double pmm = 1.0;
  double fact = 1.0;
  for (int i = 0; i < m; ++i) {
    pmm *= -fact * somx2;
    fact += 2.0;
  }
  if (l == m)
    return pmm;
  double pmmp1 = x * (2.0 * m + 1.0) * pmm;
  if (l == m + 1)
    return pmmp1;
  double pll = 0.0;
  for (int ll = m + 2; ll <= l; ++ll) {
    pll = (x * (2.0 * ll - 1.0) * pmmp1 - (ll + m - 1.0) * pmm) / (ll - m);
    pmm = pmmp1;
    pmmp1 = pll;
  }
  return pll;
}

} // namespace

double assoc_legendre(int l, int m, double x) {
  return assoc_legendre_with(l, m, x, std::sqrt((1.0 - x) * (1.0 + x)));
}

double assoc_legendre_dx(int l, int m, double x) {
  // (1 - x^2) dP/dx = (l + m) P_{l-1}^m - l x P_l^m
  const double below = (l - 1 >= m) ? assoc_legendre(l - 1, m, x) : 0.0;
  return ((l + m) * below - l * x * assoc_legendre(l, m, x)) /
         ((1.0 - x) * (1.0 + x));
}

ClosedFormWavefunction legendre_eigenfunction(int n, const ScarfParams &p) {
  validate(p, true);
  const double lb = lambda_bar(p);
  if (!is_integer(lb) || lb < 2.0)
    throw std::invalid_argument(
        "legendre_eigenfunction: closed form needs integer lambda_bar >= 2 "
        "(got " + std::to_string(lb) + ")");
  const int l = static_cast<int>(std::nearbyint(lb)) - 1;
  if (n < 0 || n >= l)
    throw std::invalid_argument("legendre_eigenfunction: need 0 <= n < "
                                "lambda_bar - 1");
  const int m = l - n;
  const double mu = p.mu;

  ClosedFormWavefunction w;
  w.n = n;
  w.parity = (n % 2 == 0) ? Parity::even : Parity::odd;
  w.value = [l, m, mu](double x) {
    return Complex(
        assoc_legendre_with(l, m, std::tanh(mu * x), sech(mu * x)), 0.0);
  };
  // d/dx P(tanh) = mu sech^2 P'(tanh); with (1-t^2) = sech^2 the division
  // in assoc_legendre_dx cancels, so use the identity directly.
  w.derivative = [l, m, mu](double x) {
    const double t = std::tanh(mu * x);
    const double s = sech(mu * x);
    const double below =
        (l - 1 >= m) ? assoc_legendre_with(l - 1, m, t, s) : 0.0;
    return Complex(
        mu * ((l + m) * below - l * t * assoc_legendre_with(l, m, t, s)),
        0.0);
  };
  return w;
}

HypergeometricEigenfunction hypergeometric_eigenfunction(Parity parity,
                                                         const ScarfParams &p,
                                                         int n) {
  validate(p, true);
  if (parity == Parity::none)
    throw std::invalid_argument(
        "hypergeometric_eigenfunction: parity must be even or odd");
  if (n < 0)
    throw std::invalid_argument("hypergeometric_eigenfunction: n >= 0");
  const bool even = parity == Parity::even;
  if (even != (n % 2 == 0))
    throw std::invalid_argument(
        "hypergeometric_eigenfunction: parity inconsistent with n");
  const double lb = lambda_bar(p);
  if (!(lb > 1.0))
    throw std::invalid_argument(
        "hypergeometric_eigenfunction: needs lambda_bar > 1");

  const double mu = p.mu;
  ClosedFormWavefunction printed;
  printed.n = n;
  printed.parity = parity;
  if (even) {
    printed.value = [mu, lb](double x) {
      const double sh = std::sinh(mu * x);
      return Complex(std::pow(std::cosh(mu * x), lb) *
                         hyp2f1(0.5 * (lb - 1.0), 0.5 * (lb + 1.0), 0.5,
                                -sh * sh),
                     0.0);
    };
  } else {
    printed.value = [mu, lb](double x) {
      const double sh = std::sinh(mu * x);
      return Complex(std::pow(std::cosh(mu * x), lb) * sh *
                         hyp2f1(0.5 * lb, 0.5 * lb + 1.0, 1.5, -sh * sh),
                     0.0);
    };
  }

  HypergeometricEigenfunction result;
  if (!is_integer(lb) || lb < 2.0 || n >= lb - 1.0) {
    result.wavefunction = printed;
    result.validation = FormValidation::unvalidated;
    return result;
  }

  // Cross-validate against the Legendre oracle on a window where the 2F1
  // series converges well within its term budget.
  const ClosedFormWavefunction oracle = legendre_eigenfunction(n, p);
  const int samples = 101;
  const double x_max = 1.25 / std::abs(mu);
  double pp = 0.0, ll = 0.0, pl = 0.0;
  std::vector<FormSample> triples;
  for (int i = 0; i < samples; ++i) {
    const double x = -x_max + 2.0 * x_max * i / (samples - 1);
    const double pv = printed.value(x).real();
    const double lv = oracle.value(x).real();
    pp += pv * pv;
    ll += lv * lv;
    pl += pv * lv;
    if (i % 10 == 0)
      triples.push_back({x, pv, lv});
  }
  const double mismatch = 1.0 - std::abs(pl) / std::sqrt(pp * ll);
  result.mismatch = mismatch;
  if (mismatch <= 1e-8) {
    result.wavefunction = printed;
    result.validation = FormValidation::hypergeometric_valid;
  } else {
    result.wavefunction = oracle;
    result.validation = FormValidation::legendre_authoritative;
    result.samples = std::move(triples);
  }
  return result;
}

namespace {

double windowed_integral(const std::function<double(double)> &f, double mu,
                         const char *what) {
  // Initial window from the tail bound e^{-mu X} < 1e-14, then double until
  // the integral stabilizes.
  double x_max = 14.0 * std::numbers::ln10 / std::abs(mu);
  double prev = integrate(f, -x_max, x_max);
  for (int pass = 0; pass < 8; ++pass) {
    x_max *= 2.0;
    const double cur = integrate(f, -x_max, x_max);
    if (std::abs(cur - prev) <= 1e-12 * std::abs(cur))
      return cur;
    prev = cur;
  }
  throw SolverError(std::string(what) +
                    ": integral keeps growing over doubled windows "
                    "(non-normalizable input?)");
}

} // namespace

double normalization_constant(const ClosedFormWavefunction &w, double mu) {
  if (mu == 0.0)
    throw std::invalid_argument("normalization_constant: mu must be non-zero");
  const auto &value = w.value;
  const double i2 = windowed_integral(
      [&value](double x) { return std::norm(value(x)); }, mu,
      "normalization_constant");
  if (!(i2 > 0.0) || !std::isfinite(i2))
    throw SolverError("normalization_constant: |w|^2 integral is not finite "
                      "and positive");
  return 1.0 / std::sqrt(i2);
}

double l1_norm(const ClosedFormWavefunction &w, double mu) {
  if (mu == 0.0)
    throw std::invalid_argument("l1_norm: mu must be non-zero");
  const auto &value = w.value;
  return windowed_integral([&value](double x) { return std::abs(value(x)); },
                           mu, "l1_norm");
}

} // namespace ptsusy
