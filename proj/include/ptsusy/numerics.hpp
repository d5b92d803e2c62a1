#pragma once

#include "ptsusy/susy_core.hpp"

#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace ptsusy {

/// Uniform symmetric grid x_i = (i - c) h, c = (n-1)/2, so that x = 0 is a
/// node and x_{n-1-i} = -x_i exactly in floating point. Dirichlet walls sit
/// one spacing outside the first and last node.
struct Grid {
  double half_width = 0.0;
  int n_points = 0;
  double spacing = 0.0;

  double node(int i) const { return (i - (n_points - 1) / 2) * spacing; }
  bool same_as(const Grid &o) const {
    return n_points == o.n_points && half_width == o.half_width;
  }
};

Grid make_grid(double half_width, int n_points);

/// Symmetric tridiagonal discretization of H = -d^2/dx^2 + V with the
/// 3-point Laplacian: diagonal 2/h^2 + V(x_i), constant off-diagonal -1/h^2.
struct TridiagonalOperator {
  Grid grid;
  std::vector<Complex> diagonal;
  double off_diagonal = 0.0;
  bool is_real = true;
  /// Re V at the ends of the grid; default continuum-edge estimate.
  double boundary_potential = std::numeric_limits<double>::infinity();
};

/// Real-valued potentials convert implicitly; is_real is set by scanning
/// the sampled imaginary parts.
TridiagonalOperator assemble(const Grid &grid,
                             const std::function<Complex(double)> &v);

struct SampledWavefunction {
  Grid grid;
  std::vector<Complex> values;
};

struct SpectrumEntry {
  Complex energy;
  double residual = std::numeric_limits<double>::quiet_NaN();
  bool bound = false;
};

/// Eigenvalues sorted by real part (ties by imaginary part). An entry is
/// bound when Re E < continuum_edge - margin with margin = 10 h^2 max(1,|edge|).
struct Spectrum {
  std::vector<SpectrumEntry> entries;
  double continuum_edge = std::numeric_limits<double>::infinity();

  std::vector<SpectrumEntry> bound_entries() const;
};

/// All eigenvalues of a real symmetric tridiagonal operator via the
/// implicit-shift QL iteration; eigenvectors for bound candidates by inverse
/// iteration, with residuals filled. `edge` overrides the operator's
/// boundary-potential estimate of the continuum edge.
Spectrum eigen_real(const TridiagonalOperator &op,
                    std::optional<double> edge = std::nullopt);

/// Eigenvalues of a complex symmetric tridiagonal operator with real part
/// inside `window`, via the complex-orthogonal implicit-shift QL iteration
/// (the matrix is kept tridiagonal throughout); eigenvectors for windowed
/// entries by inverse iteration with complex shifts, residuals filled.
Spectrum eigen_complex(const TridiagonalOperator &op,
                       Interval window = {-std::numeric_limits<double>::infinity(),
                                          std::numeric_limits<double>::infinity()},
                       std::optional<double> edge = std::nullopt);

/// Eigenvector for a given eigenvalue by inverse iteration.
SampledWavefunction inverse_iteration(const TridiagonalOperator &op,
                                      Complex eigenvalue);

/// Richardson extrapolation for the O(h^2) stencil: (4 E_h2 - E_h) / 3.
double refine(double e_h, double e_h2);

/// Matrix-vector product with Dirichlet ends.
SampledWavefunction apply(const TridiagonalOperator &op,
                          const SampledWavefunction &psi);

enum class InnerForm { hermitian, bilinear };

/// Trapezoidal inner product: conj(u).v dx (hermitian) or u.v dx (bilinear).
Complex inner(const SampledWavefunction &u, const SampledWavefunction &v,
              InnerForm form);

double norm_l2(const SampledWavefunction &u);

/// Sample a pointwise function on a grid.
SampledWavefunction sample(const Grid &grid,
                           const std::function<Complex(double)> &f);

/// Relative residual ||H psi - E psi|| / ||psi||.
double eigenpair_residual(const TridiagonalOperator &op,
                          const SampledWavefunction &psi, Complex energy);

/// First derivative of a sampled function by 4th-order central differences;
/// values outside the grid are taken as zero (Dirichlet convention).
SampledWavefunction derivative4(const SampledWavefunction &psi);

/// Adaptive Simpson quadrature of f over [a, b] to relative tolerance
/// rel_tol. Throws SolverError when the recursion depth is exhausted.
double integrate(const std::function<double(double)> &f, double a, double b,
                 double rel_tol = 1e-10);

} // namespace ptsusy
