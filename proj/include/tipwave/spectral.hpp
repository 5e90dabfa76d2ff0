#pragma once

// Spectra of the three operators that govern the closed loops:
//
//   A2   observer error system   e^{2l} E (1 + m l) - F (1 - m l)
//        with E = (1+gamma) l + beta, F = (1-gamma) l - beta
//   A    state feedback loop     e^{2l} [1+alpha+(a+m) l] + (1-alpha) + (a-m) l
//   Abb  qhat system             l cosh l + (gamma l + beta) sinh l
//
// All three are written as G(l) = P(l) e^{l} + Q(l) e^{-l} with quadratic
// P and Q. Roots are located strip by strip (Im l within pi/2 of each
// asymptotic branch) using the argument principle, then polished by
// Newton iteration in extended precision.

#include <complex>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "tipwave/params.hpp"

namespace tipwave {

enum class Family { A2, A, Abb };

std::string to_string(Family family);
/// Accepts "A2", "A", "Abb". Throws ParameterError otherwise.
Family parse_family(std::string_view name);

using cplx = std::complex<double>;

/// Family residual: e^{2l}P + Q for A2 and A (the equation as usually
/// printed), G itself for Abb. Overflows honestly to inf for huge Re l.
cplx char_residual(Family family, const SystemParams& params, cplx lambda);

/// G'(l) / G(l), evaluated in a rescaled form that neither overflows nor
/// underflows for large |Re l|.
cplx log_derivative(Family family, const SystemParams& params, cplx lambda);

/// Throws HypothesisError when gamma = 1 (A2, Abb) or m = a (A).
void require_family_hypothesis(Family family, const SystemParams& params);

/// 0.5 ln(ratio) + offset(n) pi i.
cplx asymptotic_seed(Family family, int n, const SystemParams& params);

struct Eigenvalue {
  int n = 0;
  cplx seed;
  cplx refined;
  double residual = 0.0;  // |char_residual| at the extended-precision root
  bool converged = false;
  bool asymptotic_branch = false;  // false for extra roots (e.g. real ones)
  int iterations = 0;
};

/// Newton from `seed` (at most 50 iterations, long double arithmetic).
/// converged means residual <= 1e-10.
Eigenvalue refine_root(Family family, const SystemParams& params, cplx seed,
                       int n = 0);

struct Box {
  double re_lo = 0.0;
  double re_hi = 0.0;
  double im_lo = 0.0;
  double im_hi = 0.0;

  bool contains(cplx z, double margin = 0.0) const noexcept {
    return z.real() >= re_lo - margin && z.real() <= re_hi + margin &&
           z.imag() >= im_lo - margin && z.imag() <= im_hi + margin;
  }
};

/// Winding number of G along the box boundary. If G nearly vanishes on the
/// contour, the box is enlarged slightly and recounted. Throws
/// NumericalError when no reliable integer can be obtained.
int count_zeros_in_box(Family family, const SystemParams& params, const Box& box);

/// Search box of branch k: Im within pi/2 of the branch centre and Re
/// wide enough to hold every root of that strip.
Box strip_box(Family family, const SystemParams& params, int k);

struct StripInfo {
  int k = 0;
  Box box;
  int contour_count = 0;  // argument-principle count, spurious roots included
  int refined_count = 0;  // roots kept in the spectrum
  int spurious_count = 0;  // l = 0 for Abb
};

struct Spectrum {
  Family family = Family::A;
  SystemParams params;
  int n_max = 0;
  std::vector<Eigenvalue> eigenvalues;  // sorted by (n, Re)
  std::vector<StripInfo> strips;
  std::vector<std::string> warnings;
};

/// Every root in the strips |k| <= n_max.
Spectrum compute_spectrum(Family family, const SystemParams& params, int n_max);

/// The root on branch n alone (closest to the asymptotic seed within its
/// strip).
Eigenvalue branch_eigenvalue(Family family, const SystemParams& params, int n);

/// Largest Re over converged eigenvalues. Throws NumericalError if none.
double spectral_abscissa(const Spectrum& spectrum);

enum class Loop { observer, eso };

/// Families whose union is the loop's spectrum: observer -> {A, A2},
/// eso -> {A, Abb}.
std::vector<Family> loop_families(Loop loop);

double combined_abscissa(const std::vector<Spectrum>& spectra);

struct EigenfunctionValue {
  cplx value;
  cplx derivative;
};

/// A2: E e^{lx} + F e^{-lx};  A: e^{lx} - e^{-lx};  Abb: sinh(l (x - 1)).
EigenfunctionValue eigenfunction(Family family, const SystemParams& params,
                                 cplx lambda, double x);

struct RieszDefect {
  double defect = 0.0;  // L2 distance of the scaled vector from its limit
  std::vector<double> scalar_terms;  // the components whose limit is 0
  int panels = 0;
};

/// Distance between the normalized eigenvector of branch n and its
/// large-n limit profile. Defined for A2 and A.
RieszDefect riesz_defect(Family family, const SystemParams& params, int n);

/// Columns n, seed_re, seed_im, refined_re, refined_im, residual.
void write_csv(std::ostream& out, const Spectrum& spectrum);

}  // namespace tipwave
