#include "tipwave/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>

#include "tipwave/errors.hpp"
#include "tipwave/format.hpp"

namespace tipwave {

namespace {

using ld = long double;
using cld = std::complex<ld>;
constexpr double pi = std::numbers::pi;

template <class T>
struct Quadratic {
  T c0 = 0, c1 = 0, c2 = 0;
  std::complex<T> at(std::complex<T> z) const { return c0 + z * (c1 + z * c2); }
  std::complex<T> slope(std::complex<T> z) const { return c1 + T(2) * c2 * z; }
};

template <class T>
struct Coefficients {
  Quadratic<T> p;  // multiplies e^{l}
  Quadratic<T> q;  // multiplies e^{-l}
};

template <class T>
Coefficients<T> coefficients(Family family, const SystemParams& sp) {
  const T m = sp.m, alpha = sp.alpha, a = sp.a, beta = sp.beta, gamma = sp.gamma;
  switch (family) {
    case Family::A2:
      // P = E (1 + m l), Q = -F (1 - m l).
      return {{beta, (1 + gamma) + beta * m, (1 + gamma) * m},
              {beta, -((1 - gamma) + beta * m), (1 - gamma) * m}};
    case Family::A:
      return {{1 + alpha, a + m, 0}, {1 - alpha, a - m, 0}};
    case Family::Abb:
      return {{beta / 2, (1 + gamma) / 2, 0}, {-beta / 2, (1 - gamma) / 2, 0}};
  }
  throw ParameterError("unknown spectral family");
}

// G = e^{s} H with s = l (Re l >= 0) or s = -l (Re l < 0); Hd = G' e^{-s}.
template <class T>
struct Scaled {
  std::complex<T> h;
  std::complex<T> hd;
  T magnitude;  // |P e^{..}| + |Q e^{..}| in the same scaling, for relative tests
};

template <class T>
Scaled<T> scaled(const Coefficients<T>& c, std::complex<T> z) {
  const auto p = c.p.at(z), dp = c.p.slope(z);
  const auto q = c.q.at(z), dq = c.q.slope(z);
  if (z.real() >= 0) {
    const auto w = std::exp(T(-2) * z);
    return {p + q * w, p + dp + (dq - q) * w, std::abs(p) + std::abs(q * w)};
  }
  const auto w = std::exp(T(2) * z);
  return {p * w + q, (p + dp) * w + dq - q, std::abs(p * w) + std::abs(q)};
}

template <class T>
std::complex<T> residual_of(Family family, const Coefficients<T>& c, std::complex<T> z) {
  if (family == Family::Abb) return c.p.at(z) * std::exp(z) + c.q.at(z) * std::exp(-z);
  return c.p.at(z) * std::exp(T(2) * z) + c.q.at(z);
}

std::vector<double> real_zero_parts(const Quadratic<double>& poly) {
  if (poly.c2 == 0.0) {
    if (poly.c1 == 0.0) return {};
    return {-poly.c0 / poly.c1};
  }
  const double disc = poly.c1 * poly.c1 - 4.0 * poly.c2 * poly.c0;
  if (disc < 0.0) return {-poly.c1 / (2.0 * poly.c2)};
  const double s = std::sqrt(disc);
  return {(-poly.c1 + s) / (2.0 * poly.c2), (-poly.c1 - s) / (2.0 * poly.c2)};
}

struct BranchRule {
  double log_half_ratio;
  double offset;  // branch n sits at Im = (n + offset) pi
};

BranchRule branch_rule(Family family, const SystemParams& sp) {
  require_family_hypothesis(family, sp);
  switch (family) {
    case Family::A2:
      return {0.5 * std::log(std::abs(sp.gamma - 1.0) / (sp.gamma + 1.0)),
              sp.gamma > 1.0 ? 0.0 : 0.5};
    case Family::A:
      return {0.5 * std::log(std::abs(sp.m - sp.a) / (sp.m + sp.a)), sp.m > sp.a ? 0.0 : 0.5};
    case Family::Abb:
      return {0.5 * std::log(std::abs(sp.gamma - 1.0) / (sp.gamma + 1.0)),
              sp.gamma > 1.0 ? 0.0 : -0.5};
  }
  throw ParameterError("unknown spectral family");
}

// -- contour integration ------------------------------------------------------

constexpr std::array<double, 8> kronrod_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for kronrod_nodes[1], [3], [5], [7].
constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct ContourSum {
  cplx count;   // integral of G'/G
  cplx moment;  // integral of l G'/G
  double error = 0.0;
  double min_relative = std::numeric_limits<double>::infinity();
  bool ok = true;
};

class ContourIntegrator {
 public:
  explicit ContourIntegrator(const Coefficients<double>& c) : c_(c) {}

  void segment(cplx a, cplx b, double tol, ContourSum& acc, int depth = 0) const {
    const cplx mid = 0.5 * (a + b);
    const cplx half = 0.5 * (b - a);
    cplx kron_c, kron_m, gauss_c;
    for (std::size_t i = 0; i < 8; ++i) {
      const double xs[2] = {kronrod_nodes[i], -kronrod_nodes[i]};
      const int reps = (i == 7) ? 1 : 2;
      for (int s = 0; s < reps; ++s) {
        const cplx z = mid + half * xs[s];
        const auto v = scaled(c_, z);
        const double rel = std::abs(v.h) / v.magnitude;
        acc.min_relative = std::min(acc.min_relative, rel);
        const cplx f = v.hd / v.h;
        kron_c += kronrod_weights[i] * f;
        kron_m += kronrod_weights[i] * z * f;
        if (i % 2 == 1) gauss_c += gauss_weights[i / 2] * f;
      }
    }
    kron_c *= half;
    kron_m *= half;
    gauss_c *= half;
    const double err = std::abs(kron_c - gauss_c);
    const bool finite = std::isfinite(kron_c.real()) && std::isfinite(kron_c.imag());
    if (finite && (err <= tol || depth >= max_depth)) {
      if (err > tol) acc.ok = false;
      acc.count += kron_c;
      acc.moment += kron_m;
      acc.error += err;
      return;
    }
    if (!finite || depth >= max_depth) {
      acc.ok = false;
      return;
    }
    const double sub_tol = tol / std::numbers::sqrt2;
    segment(a, mid, sub_tol, acc, depth + 1);
    segment(mid, b, sub_tol, acc, depth + 1);
  }

  ContourSum box(const Box& bx) const {
    ContourSum acc;
    const cplx c00(bx.re_lo, bx.im_lo), c10(bx.re_hi, bx.im_lo);
    const cplx c11(bx.re_hi, bx.im_hi), c01(bx.re_lo, bx.im_hi);
    const double tol = 1e-7;
    segment(c00, c10, tol, acc);
    segment(c10, c11, tol, acc);
    segment(c11, c01, tol, acc);
    segment(c01, c00, tol, acc);
    return acc;
  }

 private:
  static constexpr int max_depth = 30;
  const Coefficients<double>& c_;
};

struct Count {
  int count = 0;
  cplx centroid;  // mean of the enclosed roots
  Box box;        // the box actually integrated
};

// One attempt without moving the contour.
std::optional<Count> try_count(const Coefficients<double>& c, const Box& box) {
  const ContourIntegrator integrator(c);
  const auto sum = integrator.box(box);
  if (!sum.ok || sum.min_relative < 1e-10) return std::nullopt;
  const cplx winding = sum.count / cplx(0.0, 2.0 * pi);
  const double nearest = std::round(winding.real());
  if (std::abs(winding.real() - nearest) >= 0.25 || std::abs(winding.imag()) >= 0.25 ||
      sum.error / (2.0 * pi) >= 0.25 || nearest < 0.0) {
    return std::nullopt;
  }
  Count out;
  out.count = static_cast<int>(nearest);
  out.box = box;
  if (out.count > 0) out.centroid = sum.moment / cplx(0.0, 2.0 * pi) / nearest;
  return out;
}

Count count_with_perturbation(const Coefficients<double>& c, const Box& box) {
  const double scale = 1e-3 * (1.0 + std::max(box.re_hi - box.re_lo, box.im_hi - box.im_lo));
  for (int attempt = 0; attempt < 8; ++attempt) {
    const double d = scale * attempt;
    const Box moved{box.re_lo - d, box.re_hi + d, box.im_lo - d, box.im_hi + d};
    if (auto got = try_count(c, moved)) return *got;
  }
  throw NumericalError("argument principle: no reliable count for box [" +
                       format_double(box.re_lo) + ", " + format_double(box.re_hi) + "] x [" +
                       format_double(box.im_lo) + ", " + format_double(box.im_hi) + "]");
}

struct Newton {
  cld root;
  int iterations = 0;
};

Newton newton(const Coefficients<ld>& c, cld z) {
  Newton out{z, 0};
  const ld tiny = 8 * std::numeric_limits<ld>::epsilon();
  for (int it = 0; it < 50; ++it) {
    const auto v = scaled(c, out.root);
    out.iterations = it + 1;
    if (v.h == cld(0)) break;
    const cld step = v.h / v.hd;
    if (!std::isfinite(std::abs(step))) break;
    out.root -= step;
    if (std::abs(step) <= tiny * std::max<ld>(1, std::abs(out.root))) break;
  }
  return out;
}

Eigenvalue finish(Family family, const Coefficients<ld>& c, const Newton& nw, cplx seed,
                  int n) {
  Eigenvalue e;
  e.n = n;
  e.seed = seed;
  e.refined = cplx(static_cast<double>(nw.root.real()), static_cast<double>(nw.root.imag()));
  e.residual = static_cast<double>(std::abs(residual_of(family, c, nw.root)));
  e.converged = std::isfinite(e.residual) && e.residual <= 1e-10;
  e.iterations = nw.iterations;
  return e;
}

class RootFinder {
 public:
  RootFinder(Family family, const SystemParams& params)
      : family_(family),
        cd_(coefficients<double>(family, params)),
        cl_(coefficients<ld>(family, params)) {}

  // Every root inside `box`, which is known to hold `count.count` of them.
  void collect(const Count& count, int n, cplx seed, std::vector<Eigenvalue>& out,
               std::vector<std::string>& warnings, int depth = 0) const {
    if (count.count == 0) return;
    const Box& box = count.box;
    if (count.count == 1) {
      const auto nw = newton(cl_, cld(count.centroid.real(), count.centroid.imag()));
      auto e = finish(family_, cl_, nw, seed, n);
      const double margin = 1e-9 * (1.0 + std::abs(e.refined));
      if (e.converged && box.contains(e.refined, margin)) {
        out.push_back(e);
        return;
      }
    }
    if (depth >= 40) {
      warnings.push_back("root search in strip " + std::to_string(n) +
                         " gave up after 40 subdivisions");
      return;
    }
    // Split the longer side; move the cut until both halves count cleanly.
    const bool split_re = (box.re_hi - box.re_lo) >= (box.im_hi - box.im_lo);
    for (int attempt = 0; attempt < 12; ++attempt) {
      const double frac = 0.5 + ((attempt % 2) ? 1.0 : -1.0) * 0.031 * ((attempt + 1) / 2);
      Box lo = box, hi = box;
      if (split_re) {
        const double cut = box.re_lo + frac * (box.re_hi - box.re_lo);
        lo.re_hi = cut;
        hi.re_lo = cut;
      } else {
        const double cut = box.im_lo + frac * (box.im_hi - box.im_lo);
        lo.im_hi = cut;
        hi.im_lo = cut;
      }
      const auto a = try_count(cd_, lo);
      const auto b = try_count(cd_, hi);
      if (!a || !b || a->count + b->count != count.count) continue;
      collect(*a, n, seed, out, warnings, depth + 1);
      collect(*b, n, seed, out, warnings, depth + 1);
      return;
    }
    warnings.push_back("root search in strip " + std::to_string(n) +
                       ": could not split box cleanly");
  }

  Eigenvalue refine(cplx seed, int n) const {
    return finish(family_, cl_, newton(cl_, cld(seed.real(), seed.imag())), seed, n);
  }

  const Coefficients<double>& coeffs() const noexcept { return cd_; }

 private:
  Family family_;
  Coefficients<double> cd_;
  Coefficients<ld> cl_;
};

struct StripRoots {
  StripInfo info;
  std::vector<Eigenvalue> roots;
};

StripRoots solve_strip(Family family, const SystemParams& params, const RootFinder& finder,
                       int k, std::vector<std::string>& warnings) {
  StripRoots out;
  out.info.k = k;
  out.info.box = strip_box(family, params, k);
  const cplx seed = asymptotic_seed(family, k, params);
  const Count count = count_with_perturbation(finder.coeffs(), out.info.box);
  out.info.box = count.box;
  out.info.contour_count = count.count;

  bool seeded = false;
  if (std::abs(k) >= 5 && count.count == 1) {
    auto e = finder.refine(seed, k);
    if (e.converged && count.box.contains(e.refined) && std::abs(e.refined - seed) <= pi / 2) {
      out.roots.push_back(e);
      seeded = true;
    }
  }
  if (!seeded) finder.collect(count, k, seed, out.roots, warnings);

  // Drop duplicates and the spurious root l = 0 of Abb.
  std::vector<Eigenvalue> kept;
  for (const auto& e : out.roots) {
    if (family == Family::Abb && std::abs(e.refined) < 1e-8) {
      ++out.info.spurious_count;
      continue;
    }
    const bool dup = std::any_of(kept.begin(), kept.end(), [&](const Eigenvalue& o) {
      return std::abs(o.refined - e.refined) <= 1e-6;
    });
    if (dup) {
      warnings.push_back("duplicate root dropped in strip " + std::to_string(k));
      continue;
    }
    kept.push_back(e);
  }
  // The root nearest the asymptotic seed carries the branch.
  if (!kept.empty()) {
    auto best = std::min_element(kept.begin(), kept.end(), [&](const auto& x, const auto& y) {
      return std::abs(x.refined - seed) < std::abs(y.refined - seed);
    });
    best->asymptotic_branch = true;
  }
  out.roots = std::move(kept);
  out.info.refined_count = static_cast<int>(out.roots.size());
  if (out.info.refined_count + out.info.spurious_count != out.info.contour_count) {
    warnings.push_back("strip " + std::to_string(k) + ": argument principle counts " +
                       std::to_string(out.info.contour_count) + " roots, refined " +
                       std::to_string(out.info.refined_count + out.info.spurious_count));
  }
  return out;
}

double simpson(const std::vector<double>& y, double h) {
  const std::size_t panels = y.size() - 1;
  double s = y.front() + y.back();
  for (std::size_t i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * y[i];
  return s * h / 3.0;
}

}  // namespace

std::string to_string(Family family) {
  switch (family) {
    case Family::A2: return "A2";
    case Family::A: return "A";
    case Family::Abb: return "Abb";
  }
  return "A";
}

Family parse_family(std::string_view name) {
  if (name == "A2") return Family::A2;
  if (name == "A") return Family::A;
  if (name == "Abb") return Family::Abb;
  throw ParameterError("unknown spectral family '" + std::string(name) +
                       "' (expected A2, A or Abb)");
}

cplx char_residual(Family family, const SystemParams& params, cplx lambda) {
  return residual_of(family, coefficients<double>(family, params), lambda);
}

cplx log_derivative(Family family, const SystemParams& params, cplx lambda) {
  const auto v = scaled(coefficients<double>(family, params), lambda);
  return v.hd / v.h;
}

void require_family_hypothesis(Family family, const SystemParams& params) {
  const auto h = check_hypotheses(params);
  if (family == Family::A) {
    if (!h.m_ne_a) throw HypothesisError("m = a violates Theorem hypothesis");
  } else if (!h.gamma_ne_one) {
    throw HypothesisError("gamma = 1 violates Theorem hypothesis");
  }
}

cplx asymptotic_seed(Family family, int n, const SystemParams& params) {
  const auto rule = branch_rule(family, params);
  return {rule.log_half_ratio, (n + rule.offset) * pi};
}

Eigenvalue refine_root(Family family, const SystemParams& params, cplx seed, int n) {
  return RootFinder(family, params).refine(seed, n);
}

int count_zeros_in_box(Family family, const SystemParams& params, const Box& box) {
  if (!(box.re_lo < box.re_hi && box.im_lo < box.im_hi)) {
    throw ParameterError("box corners must satisfy lo < hi");
  }
  return count_with_perturbation(coefficients<double>(family, params), box).count;
}

Box strip_box(Family family, const SystemParams& params, int k) {
  const auto rule = branch_rule(family, params);
  const auto c = coefficients<double>(family, params);
  double leftmost = rule.log_half_ratio;
  for (const auto& poly : {c.p, c.q}) {
    for (const double z : real_zero_parts(poly)) leftmost = std::min(leftmost, z);
  }
  Box box;
  box.re_lo = std::max(leftmost - 8.0, -60.0);
  box.re_hi = 2.0;
  const double centre = (k + rule.offset) * pi;
  box.im_lo = centre - pi / 2;
  box.im_hi = centre + pi / 2;
  // Half-integer branches put a strip edge on the real axis, where real
  // roots live; nudge it so each real root belongs to exactly one strip.
  if (std::abs(box.im_lo) < 1e-9) box.im_lo = -0.01;
  if (std::abs(box.im_hi) < 1e-9) box.im_hi = -0.01;
  return box;
}

Spectrum compute_spectrum(Family family, const SystemParams& params, int n_max) {
  validate(params);
  if (n_max < 0) throw ParameterError("n_max must be non-negative");
  require_family_hypothesis(family, params);
  Spectrum s;
  s.family = family;
  s.params = params;
  s.n_max = n_max;
  const RootFinder finder(family, params);
  for (int k = -n_max; k <= n_max; ++k) {
    auto strip = solve_strip(family, params, finder, k, s.warnings);
    s.strips.push_back(strip.info);
    for (auto& e : strip.roots) s.eigenvalues.push_back(e);
  }
  // Roots of neighbouring strips near a shared edge may be found twice.
  std::vector<Eigenvalue> unique;
  for (const auto& e : s.eigenvalues) {
    const bool dup = std::any_of(unique.begin(), unique.end(), [&](const Eigenvalue& o) {
      return std::abs(o.refined - e.refined) <= 1e-6;
    });
    if (dup) {
      s.warnings.push_back("root shared by two strips dropped");
    } else {
      unique.push_back(e);
    }
  }
  s.eigenvalues = std::move(unique);
  for (const auto& e : s.eigenvalues) {
    if (!e.converged) {
      s.warnings.push_back("branch " + std::to_string(e.n) + " did not converge (residual " +
                           format_double(e.residual) + ")");
    }
  }
  std::sort(s.eigenvalues.begin(), s.eigenvalues.end(), [](const auto& x, const auto& y) {
    if (x.n != y.n) return x.n < y.n;
    return x.refined.real() < y.refined.real();
  });
  return s;
}

Eigenvalue branch_eigenvalue(Family family, const SystemParams& params, int n) {
  validate(params);
  std::vector<std::string> warnings;
  const RootFinder finder(family, params);
  auto strip = solve_strip(family, params, finder, n, warnings);
  for (const auto& e : strip.roots) {
    if (e.asymptotic_branch) return e;
  }
  throw NumericalError("no root found on branch " + std::to_string(n));
}

double spectral_abscissa(const Spectrum& spectrum) {
  double best = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (const auto& e : spectrum.eigenvalues) {
    if (!e.converged) continue;
    best = std::max(best, e.refined.real());
    any = true;
  }
  if (!any) throw NumericalError("spectrum has no converged eigenvalues");
  return best;
}

std::vector<Family> loop_families(Loop loop) {
  if (loop == Loop::observer) return {Family::A, Family::A2};
  return {Family::A, Family::Abb};
}

double combined_abscissa(const std::vector<Spectrum>& spectra) {
  if (spectra.empty()) throw ParameterError("no spectra to combine");
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& s : spectra) best = std::max(best, spectral_abscissa(s));
  return best;
}

EigenfunctionValue eigenfunction(Family family, const SystemParams& params, cplx lambda,
                                 double x) {
  switch (family) {
    case Family::A2: {
      const cplx e = (1.0 + params.gamma) * lambda + params.beta;
      const cplx f = (1.0 - params.gamma) * lambda - params.beta;
      const cplx up = std::exp(lambda * x), down = std::exp(-lambda * x);
      return {e * up + f * down, lambda * (e * up - f * down)};
    }
    case Family::A: {
      const cplx up = std::exp(lambda * x), down = std::exp(-lambda * x);
      return {up - down, lambda * (up + down)};
    }
    case Family::Abb: {
      const cplx z = lambda * (x - 1.0);
      return {std::sinh(z), lambda * std::cosh(z)};
    }
  }
  throw ParameterError("unknown spectral family");
}

RieszDefect riesz_defect(Family family, const SystemParams& params, int n) {
  if (family == Family::Abb) {
    throw ParameterError("Riesz defect is defined for families A2 and A only");
  }
  const Eigenvalue ev = branch_eigenvalue(family, params, n);
  const cplx lambda = ev.refined;
  const double theta = ev.seed.imag();
  const double rho = family == Family::A2
                         ? std::abs(params.gamma - 1.0) / (params.gamma + 1.0)
                         : std::abs(params.m - params.a) / (params.m + params.a);

  // Pointwise squared distance of the two function components.
  auto density = [&](double x) {
    const auto f = eigenfunction(family, params, lambda, x);
    const cplx up = std::pow(rho, 0.5 * x) * std::exp(cplx(0.0, theta * x));
    const cplx down = std::pow(rho, -0.5 * x) * std::exp(cplx(0.0, -theta * x));
    cplx c1, c2, l1, l2;
    if (family == Family::A2) {
      c1 = f.derivative / (lambda * lambda);
      c2 = f.value / lambda;
      l1 = (1.0 + params.gamma) * up - (1.0 - params.gamma) * down;
      l2 = (1.0 + params.gamma) * up + (1.0 - params.gamma) * down;
    } else {
      c1 = f.derivative / lambda;
      c2 = f.value;
      l1 = up + down;
      l2 = up - down;
    }
    return std::norm(c1 - l1) + std::norm(c2 - l2);
  };

  RieszDefect out;
  const auto f0 = eigenfunction(family, params, lambda, 0.0);
  const auto f1 = eigenfunction(family, params, lambda, 1.0);
  if (family == Family::A2) {
    out.scalar_terms = {std::abs(params.beta * f0.value / (lambda * lambda)),
                        std::abs(f1.derivative / (lambda * lambda * lambda))};
  } else {
    out.scalar_terms = {
        std::abs((f1.derivative + params.alpha * lambda * f1.value) / (lambda * lambda))};
  }

  int panels = std::max(512, 16 * std::abs(n));
  panels += panels % 2;
  double previous = std::numeric_limits<double>::quiet_NaN();
  double integral = 0.0;
  for (;; panels *= 2) {
    std::vector<double> y(static_cast<std::size_t>(panels) + 1);
    const double h = 1.0 / panels;
    for (int i = 0; i <= panels; ++i) y[static_cast<std::size_t>(i)] = density(i * h);
    integral = simpson(y, h);
    if (std::abs(integral - previous) <= 1e-10 * (1.0 + integral)) break;
    if (panels > (1 << 22)) throw NumericalError("Riesz defect quadrature did not converge");
    previous = integral;
  }
  double total = integral;
  for (const double s : out.scalar_terms) total += s * s;
  out.defect = std::sqrt(total);
  out.panels = panels;
  return out;
}

void write_csv(std::ostream& out, const Spectrum& spectrum) {
  out << "n,seed_re,seed_im,refined_re,refined_im,residual\n";
  for (const auto& e : spectrum.eigenvalues) {
    out << e.n << ',' << format_double(e.seed.real()) << ',' << format_double(e.seed.imag())
        << ',' << format_double(e.refined.real()) << ',' << format_double(e.refined.imag())
        << ',' << format_double(e.residual) << '\n';
  }
}

}  // namespace tipwave
