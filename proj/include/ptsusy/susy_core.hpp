#pragma once

#include <complex>
#include <functional>
#include <stdexcept>

namespace ptsusy {

using Complex = std::complex<double>;

/// Thrown by the numerical routines (eigensolvers, quadrature, series
/// evaluation) when an iteration fails to converge or an integral diverges.
class SolverError : public std::runtime_error {
public:
  explicit SolverError(const std::string &what) : std::runtime_error(what) {}
};

/// Closed interval on the real line.
struct Interval {
  double lo;
  double hi;
};

/// A real function together with its first two derivatives, all supplied
/// analytically by the caller. Construction sites validate that d1/d2 are
/// consistent with value via central finite differences.
struct SmoothFunction {
  std::function<double(double)> value;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
};

/// Complex superpotential U = a + i b with the reality constraint
/// a = b' / (2 b) built in. b never vanishes on the working domain;
/// b_sign records whether the caller's b was negative-definite.
struct Superpotential {
  std::function<double(double)> a;
  std::function<double(double)> a_prime;
  std::function<double(double)> b;
  std::function<double(double)> b_prime;
  Interval domain{-16.0, 16.0};
  int b_sign = +1;

  Complex value(double x) const { return {a(x), b(x)}; }
  Complex derivative(double x) const { return {a_prime(x), b_prime(x)}; }
};

/// The isospectral partner pair V1 = U^2 + U', V2 = U^2 - U'.
/// V2 is real-valued by construction; V1 - V2 = 2 U' pointwise.
struct PotentialPair {
  std::function<Complex(double)> v1;
  std::function<double(double)> v2;
  std::function<Complex(double)> u_prime;
};

/// Parameters of the complex sech-tanh (Scarf II) family
///   a = -(mu/2) tanh(mu x),  b = lambda sech(mu x).
struct ScarfParams {
  double mu;
  double lambda;
};

/// Validates mu != 0, lambda != 0 and (unless allow_mu_eq_lambda) mu != lambda.
/// Throws std::invalid_argument on violation.
void validate(const ScarfParams &p, bool allow_mu_eq_lambda = false);

/// Builds the superpotential U = a + i b from b = f under the reality
/// constraint: a = f'/(2 f). f must be sign-definite on a 512-point probe
/// grid over `domain`, and f's stated derivatives must agree with finite
/// differences of f. Throws std::invalid_argument otherwise.
Superpotential make_superpotential(const SmoothFunction &f,
                                   Interval domain = {-16.0, 16.0});

/// Partner potentials of U: v1 = (a^2 - b^2 + a') + 2i b',
/// v2 = a^2 - b^2 - a'.
PotentialPair partner_potentials(const Superpotential &u);

/// The larger root of lb(lb-1) = lambda^2/mu^2 - 1/4, i.e.
/// lb = 1/2 + |lambda/mu|.
double lambda_bar(const ScarfParams &p);

/// Closed-form Scarf-II superpotential with exact derivatives.
Superpotential scarf2_superpotential(const ScarfParams &p,
                                     bool allow_mu_eq_lambda = false);

/// Closed-form Scarf-II partner pair
///   v1 = mu^2/4 - mu^2 [lb(lb-1)+1] sech^2(mu x) - 2 i lambda mu sech tanh
///   v2 = mu^2/4 - mu^2 lb(lb-1) sech^2(mu x).
/// Pointwise equal to partner_potentials(scarf2_superpotential(p)).
PotentialPair scarf2_potentials(const ScarfParams &p,
                                bool allow_mu_eq_lambda = false);

} // namespace ptsusy
