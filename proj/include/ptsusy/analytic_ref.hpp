#pragma once

#include "ptsusy/susy_core.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace ptsusy {

enum class Partner { one, two };
enum class SpectrumTag { partner1, partner2, both };
enum class Parity { even, odd, none };

struct BoundStateEnergy {
  int n = 0; // quantum number; -1 marks the zero mode
  double energy = 0.0;
  SpectrumTag which = SpectrumTag::both;
};

/// Closed-form wavefunction with optional analytic derivative and parity
/// metadata. n is empty for the zero mode. normalization is filled once
/// normalization_constant() has been applied.
struct ClosedFormWavefunction {
  std::function<Complex(double)> value;
  std::function<Complex(double)> derivative; // may be null
  Parity parity = Parity::none;
  std::optional<int> n;
  std::optional<double> normalization;

  bool has_derivative() const { return static_cast<bool>(derivative); }
};

/// Bound levels E_n = mu^2/4 - (lb - 1 - n)^2 mu^2 for 0 <= n < lb - 1,
/// ascending. Empty when lb <= 1.
std::vector<BoundStateEnergy> bound_energies(double mu, double lambda_bar);

/// Bound levels of the complex partner: the shared levels plus the extra
/// zero-energy state, sorted ascending.
std::vector<BoundStateEnergy> partner1_energies(const ScarfParams &p);

/// The normalizable zero-energy state of the complex partner,
///   psi0(x) = sqrt(sech(mu x)) exp(2i (lambda/mu) atan(e^{mu x})),
/// unnormalized. Its log-derivative is the superpotential: psi0' = U psi0.
ClosedFormWavefunction zero_mode(const ScarfParams &p);

/// Explicit eigenfunctions for the lb = 3 benchmark case (lambda/mu = -5/2),
/// n in {0, 1}, unnormalized:
///   partner2, n=0: sech^2           partner2, n=1: sech^2 sinh
///   partner1, n=0: sech^2 (tanh + i sech)
///   partner1, n=1: sech (1 - 5/3 sech^2 + i 5/3 sech^2 sinh)
/// Throws std::invalid_argument for other n or lambda_bar != 3.
ClosedFormWavefunction closed_form_state(Partner which, int n,
                                         const ScarfParams &p);

/// Associated-Legendre eigenfunction P^{lb-1-n}_{lb-1}(tanh(mu x)) of the
/// real partner at E_n; requires integer lb >= 2 and 0 <= n < lb - 1.
/// Real-valued, parity (-1)^n, with analytic derivative.
ClosedFormWavefunction legendre_eigenfunction(int n, const ScarfParams &p);

/// Associated Legendre P_l^m(x) with Condon-Shortley phase, and its
/// derivative with respect to x (for |x| < 1).
double assoc_legendre(int l, int m, double x);
double assoc_legendre_dx(int l, int m, double x);

/// Gauss hypergeometric 2F1(a, b; c; z) for real parameters and z <= 0.
/// Terminating series (a or b a nonpositive integer) are summed exactly;
/// otherwise direct series for z in (-1/2, 0] and the Pfaff transform
/// 2F1(a,b;c;z) = (1-z)^{-a} 2F1(a, c-b; c; z/(z-1)) for z <= -1/2.
/// Throws std::invalid_argument when c is a nonpositive integer or z > 0,
/// SolverError when 200 terms fail to reach 1e-12.
double hyp2f1(double a, double b, double c, double z);

enum class FormValidation {
  hypergeometric_valid,   // 2F1 form proportional to the Legendre oracle
  legendre_authoritative, // forms disagree; the Legendre form is returned
  unvalidated             // no integer-lb oracle available; 2F1 form returned
};

struct FormSample {
  double x;
  double hypergeometric;
  double legendre;
};

/// Result of assembling the cosh-power x 2F1 eigenfunction form. When that
/// form disagrees with the Legendre oracle the oracle wins and the
/// disagreement is reported through `samples`, never hidden.
struct HypergeometricEigenfunction {
  ClosedFormWavefunction wavefunction;
  FormValidation validation = FormValidation::unvalidated;
  double mismatch = 0.0; // 1 - |overlap| on the comparison window
  std::vector<FormSample> samples;
};

/// Eigenfunction in the hypergeometric form
///   even: cosh^{lb}(mu x) 2F1((lb-1)/2, (lb+1)/2; 1/2; -sinh^2)
///   odd : cosh^{lb}(mu x) sinh(mu x) 2F1(lb/2, lb/2+1; 3/2; -sinh^2)
/// cross-validated against legendre_eigenfunction where that applies.
HypergeometricEigenfunction hypergeometric_eigenfunction(Parity parity,
                                                         const ScarfParams &p,
                                                         int n);

/// Normalization constant N with integral |N w(x)|^2 dx = 1, by adaptive
/// Simpson quadrature over windows doubled until stable. mu sets the
/// initial window from the tail bound e^{-mu X} < 1e-14. Throws SolverError
/// for non-normalizable input.
double normalization_constant(const ClosedFormWavefunction &w, double mu);

/// L1 integral of |w|, same windowing; diagnostic for normalizability.
double l1_norm(const ClosedFormWavefunction &w, double mu);

} // namespace ptsusy
