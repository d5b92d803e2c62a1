#include "ptsusy/susy_core.hpp"

#include <cmath>
#include <string>

namespace ptsusy {

namespace {

constexpr int kProbePoints = 512;
constexpr double kFdStep = 1e-4;

double sech(double x) { return 1.0 / std::cosh(x); }

} // namespace

void validate(const ScarfParams &p, bool allow_mu_eq_lambda) {
  if (p.mu == 0.0)
    throw std::invalid_argument("ScarfParams: mu must be non-zero");
  if (p.lambda == 0.0)
    throw std::invalid_argument("ScarfParams: lambda must be non-zero");
  if (p.mu == p.lambda && !allow_mu_eq_lambda)
    throw std::invalid_argument(
        "ScarfParams: mu == lambda is excluded (pass allow_mu_eq_lambda to "
        "bypass)");
}

double lambda_bar(const ScarfParams &p) {
  if (p.mu == 0.0)
    throw std::invalid_argument("lambda_bar: mu must be non-zero");
  return 0.5 + std::abs(p.lambda / p.mu);
}

Superpotential make_superpotential(const SmoothFunction &f, Interval domain) {
  if (!f.value || !f.d1 || !f.d2)
    throw std::invalid_argument("make_superpotential: value, d1 and d2 must "
                                "all be supplied");
  if (!(domain.hi > domain.lo))
    throw std::invalid_argument("make_superpotential: empty working interval");

  // Sign-definiteness of b on the probe grid. A zero of b makes the
  // constraint a = b'/(2b) singular.
  const double step = (domain.hi - domain.lo) / (kProbePoints - 1);
  double max_abs = 0.0;
  for (int i = 0; i < kProbePoints; ++i)
    max_abs = std::max(max_abs, std::abs(f.value(domain.lo + i * step)));
  const double floor = 1e-12 * std::max(1.0, max_abs);

  int sign = 0;
  for (int i = 0; i < kProbePoints; ++i) {
    const double x = domain.lo + i * step;
    const double v = f.value(x);
    if (!(std::abs(v) > floor))
      throw std::invalid_argument(
          "make_superpotential: b vanishes near x = " + std::to_string(x) +
          " (singular constraint)");
    const int s = v > 0.0 ? +1 : -1;
    if (sign == 0)
      sign = s;
    else if (s != sign)
      throw std::invalid_argument(
          "make_superpotential: b changes sign inside the working interval");
  }

  // Derivative consistency: central differences of value must reproduce the
  // supplied d1 and d2 up to O(h^2).
  for (int i = 0; i < kProbePoints; ++i) {
    const double x = domain.lo + i * step;
    const double v = f.value(x);
    const double vp = f.value(x + kFdStep);
    const double vm = f.value(x - kFdStep);
    const double fd1 = (vp - vm) / (2.0 * kFdStep);
    const double fd2 = (vp - 2.0 * v + vm) / (kFdStep * kFdStep);
    const double d1 = f.d1(x);
    const double d2 = f.d2(x);
    if (std::abs(d1 - fd1) > 1e-4 * (1.0 + std::abs(v) + std::abs(d1)))
      throw std::invalid_argument(
          "make_superpotential: d1 disagrees with finite differences of "
          "value near x = " + std::to_string(x));
    if (std::abs(d2 - fd2) > 1e-3 * (1.0 + std::abs(v) + std::abs(d2)))
      throw std::invalid_argument(
          "make_superpotential: d2 disagrees with finite differences of "
          "value near x = " + std::to_string(x));
  }

  Superpotential u;
  u.a = [f](double x) { return f.d1(x) / (2.0 * f.value(x)); };
  u.a_prime = [f](double x) {
    const double v = f.value(x);
    const double d1 = f.d1(x);
    return (f.d2(x) * v - d1 * d1) / (2.0 * v * v);
  };
  u.b = f.value;
  u.b_prime = f.d1;
  u.domain = domain;
  u.b_sign = sign;
  return u;
}

PotentialPair partner_potentials(const Superpotential &u) {
  PotentialPair pair;
  pair.v1 = [u](double x) {
    const double a = u.a(x);
    const double b = u.b(x);
    return Complex(a * a - b * b + u.a_prime(x), 2.0 * u.b_prime(x));
  };
  pair.v2 = [u](double x) {
    const double a = u.a(x);
    const double b = u.b(x);
    return a * a - b * b - u.a_prime(x);
  };
  pair.u_prime = [u](double x) { return Complex(u.a_prime(x), u.b_prime(x)); };
  return pair;
}

Superpotential scarf2_superpotential(const ScarfParams &p,
                                     bool allow_mu_eq_lambda) {
  validate(p, allow_mu_eq_lambda);
  const double mu = p.mu;
  const double lambda = p.lambda;
  Superpotential u;
  u.a = [mu](double x) { return -0.5 * mu * std::tanh(mu * x); };
  u.a_prime = [mu](double x) {
    const double s = sech(mu * x);
    return -0.5 * mu * mu * s * s;
  };
  u.b = [mu, lambda](double x) { return lambda * sech(mu * x); };
  u.b_prime = [mu, lambda](double x) {
    return -lambda * mu * sech(mu * x) * std::tanh(mu * x);
  };
  u.domain = {-16.0 / std::abs(mu), 16.0 / std::abs(mu)};
  u.b_sign = lambda > 0.0 ? +1 : -1;
  return u;
}

PotentialPair scarf2_potentials(const ScarfParams &p, bool allow_mu_eq_lambda) {
  validate(p, allow_mu_eq_lambda);
  const double mu = p.mu;
  const double lambda = p.lambda;
  const double mu2 = mu * mu;
  // lb(lb-1) with lb the larger root: lambda^2/mu^2 - 1/4.
  const double lb_lbm1 = lambda * lambda / mu2 - 0.25;

  PotentialPair pair;
  pair.v1 = [mu, lambda, mu2, lb_lbm1](double x) {
    const double s = sech(mu * x);
    return Complex(0.25 * mu2 - mu2 * (lb_lbm1 + 1.0) * s * s,
                   -2.0 * lambda * mu * s * std::tanh(mu * x));
  };
  pair.v2 = [mu, mu2, lb_lbm1](double x) {
    const double s = sech(mu * x);
    return 0.25 * mu2 - mu2 * lb_lbm1 * s * s;
  };
  pair.u_prime = [mu, lambda, mu2](double x) {
    const double s = sech(mu * x);
    return Complex(-0.5 * mu2 * s * s, -lambda * mu * s * std::tanh(mu * x));
  };
  return pair;
}

} // namespace ptsusy
