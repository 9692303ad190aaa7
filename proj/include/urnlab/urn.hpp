#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "urnlab/rational.hpp"

namespace urnlab {

// Composition (red, black) of the urn; also used for initial conditions.
struct Composition {
  std::int64_t red = 0;
  std::int64_t black = 0;

  std::int64_t total() const { return red + black; }
};

enum class UrnClass { Original, Large, Critical, Small, Triangular };

// Discrete-time vs continuous-time objects (pools, moment tables, systems).
enum class System { DT, CT };

inline const char *to_string(System s) { return s == System::DT ? "dt" : "ct"; }

inline const char *to_string(UrnClass c) {
  switch (c) {
    case UrnClass::Original: return "original";
    case UrnClass::Large: return "large";
    case UrnClass::Critical: return "critical";
    case UrnClass::Small: return "small";
    case UrnClass::Triangular: return "triangular";
  }
  return "?";
}

// Eigenvectors of the transposed replacement matrix for eigenvalues S and m,
// together with the dual basis of eigenforms.  Defined only when b+c > 0
// (the diagonal case has no second principal direction in this normalization).
struct SpectralData {
  Rational v1_red, v1_black;  // tR v1 = S v1
  Rational v2_red, v2_black;  // tR v2 = m v2
  Rational u1_x, u1_y;        // u1(x,y) = (x+y)/S
  Rational u2_x, u2_y;        // u2(x,y) = (b x - c y)/S
};

// Validated balanced replacement matrix (a b / c d) with derived data.
struct UrnSpec {
  std::int64_t a = 0, b = 0, c = 0, d = 0;
  std::int64_t S = 0;  // balance a+b = c+d
  std::int64_t m = 0;  // second eigenvalue a-c = d-b
  Rational sigma;      // m/S
  std::optional<SpectralData> spectral;

  bool triangular() const { return b == 0 || c == 0; }
  bool large() const {
    return !triangular() && 2 * m > S && m < S;
  }

  // Eigenform values on a composition, exact.
  Rational u1(const Composition &comp) const {
    return make_rational(comp.red + comp.black, S);
  }
  Rational u2(const Composition &comp) const {
    return make_rational(b * comp.red - c * comp.black, S);
  }

  std::string matrix_string() const {
    return "(" + std::to_string(a) + "," + std::to_string(b) + "," +
           std::to_string(c) + "," + std::to_string(d) + ")";
  }
};

inline UrnSpec build_spec(std::int64_t a, std::int64_t b, std::int64_t c,
                          std::int64_t d) {
  if (a < 0 || b < 0 || c < 0 || d < 0)
    throw std::invalid_argument("replacement matrix entries must be nonnegative");
  if (a + b != c + d)
    throw std::invalid_argument(
        "unbalanced replacement matrix: row sums " + std::to_string(a + b) +
        " != " + std::to_string(c + d));
  if (a + b < 1)
    throw std::invalid_argument("balance S must be >= 1");

  UrnSpec spec;
  spec.a = a;
  spec.b = b;
  spec.c = c;
  spec.d = d;
  spec.S = a + b;
  spec.m = a - c;
  spec.sigma = make_rational(spec.m, spec.S);

  if (b + c > 0) {
    SpectralData sd;
    const Rational scale = make_rational(spec.S, b + c);
    sd.v1_red = scale * c;
    sd.v1_black = scale * b;
    sd.v2_red = scale;
    sd.v2_black = -scale;
    sd.u1_x = make_rational(1, spec.S);
    sd.u1_y = make_rational(1, spec.S);
    sd.u2_x = make_rational(b, spec.S);
    sd.u2_y = make_rational(-c, spec.S);
    spec.spectral = sd;
  }
  return spec;
}

// Triangular dominates the sigma-based classes: every result downstream
// requires bc != 0, so a triangular matrix is reported as such even when
// its eigenvalue ratio would qualify elsewhere.
inline UrnClass classify(const UrnSpec &spec) {
  if (spec.triangular()) return UrnClass::Triangular;
  if (spec.m == spec.S) return UrnClass::Original;
  if (2 * spec.m > spec.S) return UrnClass::Large;
  if (2 * spec.m == spec.S) return UrnClass::Critical;
  return UrnClass::Small;
}

inline void require_large(const UrnSpec &spec, const char *what) {
  if (classify(spec) != UrnClass::Large)
    throw std::domain_error(std::string(what) + " requires a large urn, got " +
                            to_string(classify(spec)) + " " +
                            spec.matrix_string());
}

// (u1, u2) of a composition, exact.
inline std::pair<Rational, Rational> project(const UrnSpec &spec,
                                             const Composition &comp) {
  return {spec.u1(comp), spec.u2(comp)};
}

// E u2(U(n)) via the convergent-martingale product:
//   u2(init) * prod_{k<n} (1 + sigma/(k + (alpha+beta)/S)),
// exact in rational arithmetic.  Oracle for the DP engine.
inline Rational expected_u2_exact(const UrnSpec &spec, const Composition &init,
                                  std::int64_t n) {
  if (n < 0) throw std::invalid_argument("n must be >= 0");
  Rational val = spec.u2(init);
  const Rational r = make_rational(init.total(), spec.S);
  for (std::int64_t k = 0; k < n; ++k) {
    val *= 1 + spec.sigma / (k + r);
  }
  return val;
}

// E W^DT = Gamma(r)/Gamma(r+sigma) * (b alpha - c beta)/S with r = (alpha+beta)/S.
inline double expected_W_dt(const UrnSpec &spec, const Composition &init) {
  require_large(spec, "expected_W_dt");
  const double r = static_cast<double>(init.total()) / spec.S;
  const double sig = to_double(spec.sigma);
  return std::exp(std::lgamma(r) - std::lgamma(r + sig)) *
         to_double(spec.u2(init));
}

// E W^CT = (b alpha - c beta)/S.
inline double expected_W_ct(const UrnSpec &spec, const Composition &init) {
  require_large(spec, "expected_W_ct");
  return to_double(spec.u2(init));
}

inline Rational expected_W_ct_exact(const UrnSpec &spec,
                                    const Composition &init) {
  require_large(spec, "expected_W_ct");
  return spec.u2(init);
}

}  // namespace urnlab
