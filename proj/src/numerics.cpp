#include "ptsusy/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ptsusy {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// ---------------------------------------------------------------------------
// Implicit-shift QL iteration for a symmetric tridiagonal matrix, eigenvalues
// only. The same recurrence serves the real symmetric and the complex
// symmetric case: rotations satisfy c^2 + s^2 = 1 (complex-orthogonal in the
// second case), which preserves symmetry and tridiagonal form. The complex
// variant can in principle break down when f^2 + g^2 ~ 0 with f, g finite;
// that is detected and signalled.
// ---------------------------------------------------------------------------
template <class Scalar>
void tridiag_ql(std::vector<Scalar> &d, std::vector<Scalar> &e) {
  const int n = static_cast<int>(d.size());
  if (n == 0)
    return;
  e.resize(n);
  e[n - 1] = Scalar(0);

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    while (true) {
      int m = l;
      for (; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= kEps * dd)
          break;
      }
      if (m == l)
        break;
      if (++iter > 60)
        throw SolverError("tridiagonal QL: eigenvalue " + std::to_string(l) +
                          " failed to converge in 60 iterations");

      // Wilkinson-style shift from the leading 2x2 block.
      Scalar g = (d[l + 1] - d[l]) / (e[l] * 2.0);
      Scalar r = std::sqrt(g * g + Scalar(1));
      // Pick the branch that avoids cancellation.
      const Scalar gp = g + r;
      const Scalar gm = g - r;
      g = d[m] - d[l] + e[l] / (std::abs(gp) >= std::abs(gm) ? gp : gm);

      Scalar s(1), c(1), p(0);
      bool recovered = false;
      for (int i = m - 1; i >= l; --i) {
        Scalar f = s * e[i];
        Scalar b = c * e[i];
        r = std::sqrt(f * f + g * g);
        const double fg = std::abs(f) + std::abs(g);
        if (fg == 0.0 || std::abs(r) <= 1e-300) {
          // Underflowed rotation; deflate and retry.
          d[i + 1] -= p;
          e[m] = Scalar(0);
          recovered = true;
          break;
        }
        if (std::abs(r) < 1e-14 * fg)
          throw SolverError(
              "tridiagonal QL: complex-orthogonal rotation breakdown");
        e[i + 1] = r;
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + c * b * 2.0;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
      }
      if (recovered)
        continue;
      d[l] -= p;
      e[l] = g;
      e[m] = Scalar(0);
    }
  }
}

// ---------------------------------------------------------------------------
// Tridiagonal LU with partial pivoting (complex), for inverse iteration.
// ---------------------------------------------------------------------------
struct TridiagLU {
  std::vector<Complex> dl, d, du, du2;
  std::vector<int> ipiv;
};

TridiagLU factor_shifted(const TridiagonalOperator &op, Complex shift) {
  const int n = static_cast<int>(op.diagonal.size());
  TridiagLU lu;
  lu.d.resize(n);
  lu.dl.assign(std::max(n - 1, 0), Complex(op.off_diagonal));
  lu.du.assign(std::max(n - 1, 0), Complex(op.off_diagonal));
  lu.du2.assign(std::max(n - 2, 0), Complex(0));
  lu.ipiv.resize(n);
  for (int i = 0; i < n; ++i) {
    lu.d[i] = op.diagonal[i] - shift;
    lu.ipiv[i] = i;
  }

  double scale = std::abs(op.off_diagonal);
  for (const auto &v : op.diagonal)
    scale = std::max(scale, std::abs(v - shift));
  const double tiny = std::max(kEps * scale, 1e-300);

  for (int i = 0; i < n - 1; ++i) {
    const bool last = (i == n - 2);
    if (std::abs(lu.d[i]) >= std::abs(lu.dl[i])) {
      if (std::abs(lu.d[i]) < tiny)
        lu.d[i] = tiny; // near-singular pivot: standard inverse-iteration fix
      const Complex fact = lu.dl[i] / lu.d[i];
      lu.dl[i] = fact;
      lu.d[i + 1] -= fact * lu.du[i];
    } else {
      const Complex fact = lu.d[i] / lu.dl[i];
      lu.d[i] = lu.dl[i];
      lu.dl[i] = fact;
      const Complex temp = lu.d[i + 1];
      lu.d[i + 1] = lu.du[i] - fact * temp;
      lu.du[i] = temp;
      if (!last) {
        lu.du2[i] = lu.du[i + 1];
        lu.du[i + 1] = -fact * lu.du[i + 1];
      }
      lu.ipiv[i] = i + 1;
    }
  }
  if (n > 0 && std::abs(lu.d[n - 1]) < tiny)
    lu.d[n - 1] = tiny;
  return lu;
}

void solve_in_place(const TridiagLU &lu, std::vector<Complex> &b) {
  const int n = static_cast<int>(b.size());
  for (int i = 0; i < n - 1; ++i) {
    if (lu.ipiv[i] == i) {
      b[i + 1] -= lu.dl[i] * b[i];
    } else {
      std::swap(b[i], b[i + 1]);
      b[i + 1] -= lu.dl[i] * b[i];
    }
  }
  b[n - 1] /= lu.d[n - 1];
  if (n > 1)
    b[n - 2] = (b[n - 2] - lu.du[n - 2] * b[n - 1]) / lu.d[n - 2];
  for (int i = n - 3; i >= 0; --i)
    b[i] = (b[i] - lu.du[i] * b[i + 1] - lu.du2[i] * b[i + 2]) / lu.d[i];
}

// Deterministic start vector for inverse iteration.
std::vector<Complex> start_vector(int n) {
  std::vector<Complex> v(n);
  std::uint64_t state = 0x2545F4914F6CDD1DULL;
  for (int i = 0; i < n; ++i) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    v[i] = Complex(static_cast<double>(state >> 11) / 9007199254740992.0 - 0.5,
                   0.0);
  }
  return v;
}

double vec_norm(const std::vector<Complex> &v) {
  double s = 0.0;
  for (const auto &z : v)
    s += std::norm(z);
  return std::sqrt(s);
}

std::vector<Complex> mat_vec(const TridiagonalOperator &op,
                             const std::vector<Complex> &v) {
  const int n = static_cast<int>(v.size());
  std::vector<Complex> w(n);
  for (int i = 0; i < n; ++i) {
    Complex acc = op.diagonal[i] * v[i];
    if (i > 0)
      acc += op.off_diagonal * v[i - 1];
    if (i + 1 < n)
      acc += op.off_diagonal * v[i + 1];
    w[i] = acc;
  }
  return w;
}

double operator_scale(const TridiagonalOperator &op) {
  double s = 2.0 * std::abs(op.off_diagonal);
  for (const auto &v : op.diagonal)
    s = std::max(s, std::abs(v));
  return s;
}

void classify_and_sort(Spectrum &spec, double h) {
  std::sort(spec.entries.begin(), spec.entries.end(),
            [](const SpectrumEntry &a, const SpectrumEntry &b) {
              if (a.energy.real() != b.energy.real())
                return a.energy.real() < b.energy.real();
              return a.energy.imag() < b.energy.imag();
            });
  const double edge = spec.continuum_edge;
  if (std::isinf(edge)) {
    for (auto &e : spec.entries)
      e.bound = true;
    return;
  }
  const double margin = 10.0 * h * h * std::max(1.0, std::abs(edge));
  for (auto &e : spec.entries)
    e.bound = e.energy.real() < edge - margin;
}

} // namespace

Grid make_grid(double half_width, int n_points) {
  if (!(half_width > 0.0))
    throw std::invalid_argument("make_grid: half_width must be positive");
  if (n_points < 3 || n_points % 2 == 0)
    throw std::invalid_argument("make_grid: n_points must be odd and >= 3");
  Grid g;
  g.half_width = half_width;
  g.n_points = n_points;
  g.spacing = 2.0 * half_width / (n_points - 1);
  return g;
}

TridiagonalOperator assemble(const Grid &grid,
                             const std::function<Complex(double)> &v) {
  TridiagonalOperator op;
  op.grid = grid;
  const double h = grid.spacing;
  const double kinetic = 2.0 / (h * h);
  op.off_diagonal = -1.0 / (h * h);
  op.diagonal.resize(grid.n_points);
  op.is_real = true;
  for (int i = 0; i < grid.n_points; ++i) {
    const Complex vi = v(grid.node(i));
    if (!std::isfinite(vi.real()) || !std::isfinite(vi.imag()))
      throw std::invalid_argument("assemble: non-finite potential sample at "
                                  "x = " + std::to_string(grid.node(i)));
    op.diagonal[i] = kinetic + vi;
    if (vi.imag() != 0.0)
      op.is_real = false;
  }
  op.boundary_potential =
      std::min(op.diagonal.front().real(), op.diagonal.back().real()) - kinetic;
  return op;
}

std::vector<SpectrumEntry> Spectrum::bound_entries() const {
  std::vector<SpectrumEntry> out;
  for (const auto &e : entries)
    if (e.bound)
      out.push_back(e);
  return out;
}

SampledWavefunction inverse_iteration(const TridiagonalOperator &op,
                                      Complex eigenvalue) {
  const int n = static_cast<int>(op.diagonal.size());
  const TridiagLU lu = factor_shifted(op, eigenvalue);
  std::vector<Complex> v = start_vector(n);
  const double scale = operator_scale(op);

  double best_res = std::numeric_limits<double>::infinity();
  std::vector<Complex> best = v;
  for (int pass = 0; pass < 5; ++pass) {
    solve_in_place(lu, v);
    const double nrm = vec_norm(v);
    if (nrm == 0.0 || !std::isfinite(nrm))
      throw SolverError("inverse iteration: degenerate solve");
    for (auto &z : v)
      z /= nrm;
    std::vector<Complex> hv = mat_vec(op, v);
    for (int i = 0; i < n; ++i)
      hv[i] -= eigenvalue * v[i];
    const double res = vec_norm(hv);
    if (res < best_res) {
      best_res = res;
      best = v;
    }
    if (res <= 32.0 * kEps * scale)
      break;
  }

  // Deterministic phase: largest component made real positive.
  int imax = 0;
  for (int i = 1; i < n; ++i)
    if (std::abs(best[i]) > std::abs(best[imax]))
      imax = i;
  if (std::abs(best[imax]) > 0.0) {
    const Complex phase = std::conj(best[imax]) / std::abs(best[imax]);
    for (auto &z : best)
      z *= phase;
  }

  SampledWavefunction psi;
  psi.grid = op.grid;
  psi.values = std::move(best);
  return psi;
}

Spectrum eigen_real(const TridiagonalOperator &op, std::optional<double> edge) {
  if (!op.is_real)
    throw std::invalid_argument("eigen_real: operator has complex diagonal");
  const int n = static_cast<int>(op.diagonal.size());
  std::vector<double> d(n), e(n);
  for (int i = 0; i < n; ++i)
    d[i] = op.diagonal[i].real();
  std::fill(e.begin(), e.end(), op.off_diagonal);
  tridiag_ql(d, e);

  Spectrum spec;
  spec.continuum_edge = edge.value_or(op.boundary_potential);
  spec.entries.reserve(n);
  for (double ev : d)
    spec.entries.push_back({Complex(ev, 0.0),
                            std::numeric_limits<double>::quiet_NaN(), false});
  classify_and_sort(spec, op.grid.spacing);

  for (auto &entry : spec.entries)
    if (entry.bound) {
      const SampledWavefunction psi = inverse_iteration(op, entry.energy);
      entry.residual = eigenpair_residual(op, psi, entry.energy);
    }
  return spec;
}

Spectrum eigen_complex(const TridiagonalOperator &op, Interval window,
                       std::optional<double> edge) {
  const int n = static_cast<int>(op.diagonal.size());
  std::vector<Complex> d = op.diagonal;
  std::vector<Complex> e(n, Complex(op.off_diagonal));
  tridiag_ql(d, e);

  Spectrum spec;
  spec.continuum_edge = edge.value_or(op.boundary_potential);
  const bool finite_window =
      std::isfinite(window.lo) || std::isfinite(window.hi);
  for (const Complex &ev : d)
    if (ev.real() >= window.lo && ev.real() <= window.hi)
      spec.entries.push_back(
          {ev, std::numeric_limits<double>::quiet_NaN(), false});
  classify_and_sort(spec, op.grid.spacing);

  for (auto &entry : spec.entries)
    if (entry.bound || finite_window) {
      const SampledWavefunction psi = inverse_iteration(op, entry.energy);
      entry.residual = eigenpair_residual(op, psi, entry.energy);
    }
  return spec;
}

double refine(double e_h, double e_h2) { return (4.0 * e_h2 - e_h) / 3.0; }

SampledWavefunction apply(const TridiagonalOperator &op,
                          const SampledWavefunction &psi) {
  if (!psi.grid.same_as(op.grid))
    throw std::invalid_argument("apply: grid mismatch");
  SampledWavefunction out;
  out.grid = psi.grid;
  out.values = mat_vec(op, psi.values);
  return out;
}

Complex inner(const SampledWavefunction &u, const SampledWavefunction &v,
              InnerForm form) {
  if (!u.grid.same_as(v.grid))
    throw std::invalid_argument("inner: grid mismatch");
  const int n = u.grid.n_points;
  Complex acc(0.0);
  for (int i = 0; i < n; ++i) {
    const Complex ui =
        form == InnerForm::hermitian ? std::conj(u.values[i]) : u.values[i];
    const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    acc += w * ui * v.values[i];
  }
  return acc * u.grid.spacing;
}

double norm_l2(const SampledWavefunction &u) {
  return std::sqrt(std::abs(inner(u, u, InnerForm::hermitian)));
}

SampledWavefunction sample(const Grid &grid,
                           const std::function<Complex(double)> &f) {
  SampledWavefunction psi;
  psi.grid = grid;
  psi.values.resize(grid.n_points);
  for (int i = 0; i < grid.n_points; ++i)
    psi.values[i] = f(grid.node(i));
  return psi;
}

double eigenpair_residual(const TridiagonalOperator &op,
                          const SampledWavefunction &psi, Complex energy) {
  const SampledWavefunction h_psi = apply(op, psi);
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < psi.values.size(); ++i) {
    num += std::norm(h_psi.values[i] - energy * psi.values[i]);
    den += std::norm(psi.values[i]);
  }
  if (den == 0.0)
    return 0.0;
  return std::sqrt(num / den);
}

SampledWavefunction derivative4(const SampledWavefunction &psi) {
  const int n = psi.grid.n_points;
  const double h = psi.grid.spacing;
  SampledWavefunction out;
  out.grid = psi.grid;
  out.values.resize(n);
  auto at = [&](int i) -> Complex {
    return (i < 0 || i >= n) ? Complex(0.0) : psi.values[i];
  };
  for (int i = 0; i < n; ++i)
    out.values[i] =
        (at(i - 2) - 8.0 * at(i - 1) + 8.0 * at(i + 1) - at(i + 2)) /
        (12.0 * h);
  return out;
}

namespace {

double adaptive_simpson(const std::function<double(double)> &f, double a,
                        double b, double fa, double fm, double fb, double s,
                        double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double sl = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double sr = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double s2 = sl + sr;
  if (depth <= 0)
    throw SolverError("integrate: adaptive Simpson recursion exhausted");
  if (std::abs(s2 - s) <= 15.0 * tol)
    return s2 + (s2 - s) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, sl, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, sr, 0.5 * tol, depth - 1);
}

} // namespace

double integrate(const std::function<double(double)> &f, double a, double b,
                 double rel_tol) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double s = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double tol = rel_tol * std::max(std::abs(s), 1e-30);
  return adaptive_simpson(f, a, b, fa, fm, fb, s, tol, 48);
}

} // namespace ptsusy
