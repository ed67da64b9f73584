#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace subprod {

using Complex = std::complex<double>;

// Inner products are linear in the FIRST argument and conjugate-linear in the
// second, everywhere in this library (vectors, tensors, L2 kernels).

struct CVec2 {
  std::array<Complex, 2> c{};

  CVec2() = default;
  CVec2(Complex a, Complex b) : c{a, b} {}
  Complex& operator[](int i) { return c[static_cast<size_t>(i)]; }
  const Complex& operator[](int i) const { return c[static_cast<size_t>(i)]; }
};

struct CVec4 {
  std::array<Complex, 4> c{};

  CVec4() = default;
  CVec4(Complex a, Complex b, Complex d, Complex e) : c{a, b, d, e} {}
  Complex& operator[](int i) { return c[static_cast<size_t>(i)]; }
  const Complex& operator[](int i) const { return c[static_cast<size_t>(i)]; }
};

inline CVec2 operator+(const CVec2& a, const CVec2& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline CVec2 operator-(const CVec2& a, const CVec2& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline CVec2 operator*(Complex z, const CVec2& v) { return {z * v[0], z * v[1]}; }

inline CVec4 operator+(const CVec4& a, const CVec4& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}
inline CVec4 operator-(const CVec4& a, const CVec4& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
}
inline CVec4 operator*(Complex z, const CVec4& v) {
  return {z * v[0], z * v[1], z * v[2], z * v[3]};
}

inline Complex inner(const CVec2& u, const CVec2& v) {
  return u[0] * std::conj(v[0]) + u[1] * std::conj(v[1]);
}
inline Complex inner(const CVec4& u, const CVec4& v) {
  Complex s = 0;
  for (int i = 0; i < 4; ++i) s += u[i] * std::conj(v[i]);
  return s;
}
inline double norm(const CVec2& v) { return std::sqrt(std::real(inner(v, v))); }
inline double norm(const CVec4& v) { return std::sqrt(std::real(inner(v, v))); }

inline CVec2 normalized(const CVec2& v) {
  const double n = norm(v);
  if (n == 0.0) throw std::invalid_argument("normalized: zero vector");
  return (1.0 / n) * v;
}
inline CVec4 normalized(const CVec4& v) {
  const double n = norm(v);
  if (n == 0.0) throw std::invalid_argument("normalized: zero vector");
  return (1.0 / n) * v;
}

// Tensor coordinates on C2 (x) C2 are ordered (e1e1, e1e2, e2e1, e2e2):
// the first factor is the slow index. All serialization uses this order.
inline CVec4 kron(const CVec2& u, const CVec2& v) {
  return {u[0] * v[0], u[0] * v[1], u[1] * v[0], u[1] * v[1]};
}

// Unitary flip of the tensor factors, f@g -> g@f. Involutive.
inline CVec4 exchange(const CVec4& w) { return {w[0], w[2], w[1], w[3]}; }

// Determinant of the 2x2 matrix M[i][j] = w[(i,j)]. Vanishes exactly on the
// product vectors u@v (rank-one criterion).
inline Complex reshape_det(const CVec4& w) { return w[0] * w[3] - w[1] * w[2]; }

// 2x2 complex matrix, column-major storage.
struct Mat2 {
  std::array<Complex, 4> m{};

  Complex& at(int r, int c) { return m[static_cast<size_t>(2 * c + r)]; }
  const Complex& at(int r, int c) const { return m[static_cast<size_t>(2 * c + r)]; }

  static Mat2 identity() {
    Mat2 a;
    a.at(0, 0) = 1.0;
    a.at(1, 1) = 1.0;
    return a;
  }
  static Mat2 from_columns(const CVec2& c0, const CVec2& c1) {
    Mat2 a;
    a.at(0, 0) = c0[0];
    a.at(1, 0) = c0[1];
    a.at(0, 1) = c1[0];
    a.at(1, 1) = c1[1];
    return a;
  }
  CVec2 column(int j) const { return {at(0, j), at(1, j)}; }
  Complex det() const { return at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0); }
};

inline CVec2 apply(const Mat2& a, const CVec2& v) {
  return {a.at(0, 0) * v[0] + a.at(0, 1) * v[1], a.at(1, 0) * v[0] + a.at(1, 1) * v[1]};
}

inline Mat2 mul(const Mat2& a, const Mat2& b) {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      r.at(i, j) = a.at(i, 0) * b.at(0, j) + a.at(i, 1) * b.at(1, j);
  return r;
}

inline Mat2 adjoint(const Mat2& a) {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.at(i, j) = std::conj(a.at(j, i));
  return r;
}

inline Mat2 inverse(const Mat2& a) {
  const Complex d = a.det();
  if (std::abs(d) == 0.0) throw std::invalid_argument("inverse: singular 2x2 matrix");
  Mat2 r;
  r.at(0, 0) = a.at(1, 1) / d;
  r.at(0, 1) = -a.at(0, 1) / d;
  r.at(1, 0) = -a.at(1, 0) / d;
  r.at(1, 1) = a.at(0, 0) / d;
  return r;
}

inline double unitary_residual(const Mat2& a) {
  const Mat2 g = mul(adjoint(a), a);
  double r = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      r = std::max(r, std::abs(g.at(i, j) - (i == j ? Complex(1.0) : Complex(0.0))));
  return r;
}

// 4x2 complex matrix, column-major; columns are the images of the two
// coordinate basis vectors of the domain fiber.
struct Isometry42 {
  std::array<Complex, 8> m{};

  Complex& at(int r, int c) { return m[static_cast<size_t>(4 * c + r)]; }
  const Complex& at(int r, int c) const { return m[static_cast<size_t>(4 * c + r)]; }

  CVec4 column(int j) const { return {at(0, j), at(1, j), at(2, j), at(3, j)}; }
  void set_column(int j, const CVec4& v) {
    for (int r = 0; r < 4; ++r) at(r, j) = v[r];
  }
};

inline CVec4 apply(const Isometry42& b, const CVec2& v) {
  return v[0] * b.column(0) + v[1] * b.column(1);
}

// Adjoint b*: C4 -> C2. For w in the range of an isometry b this inverts b.
inline CVec2 adjoint_apply(const Isometry42& b, const CVec4& w) {
  return {inner(w, b.column(0)), inner(w, b.column(1))};
}

// Max-norm of b*b - I.
inline double isometry_residual(const Isometry42& b) {
  double r = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const Complex g = inner(b.column(j), b.column(i));
      r = std::max(r, std::abs(g - (i == j ? Complex(1.0) : Complex(0.0))));
    }
  return r;
}

// (A@B)w on tensor coordinates.
inline CVec4 kron_apply(const Mat2& a, const Mat2& b, const CVec4& w) {
  CVec4 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Complex s = 0;
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) s += a.at(i, k) * b.at(j, l) * w[2 * k + l];
      r[2 * i + j] = s;
    }
  return r;
}

// (A@B) . beta . C as a 4x2 map.
inline Isometry42 conjugate_map(const Mat2& a, const Mat2& b, const Isometry42& beta,
                                const Mat2& c) {
  Isometry42 r;
  for (int j = 0; j < 2; ++j) {
    const CVec4 w = apply(beta, c.column(j));
    r.set_column(j, kron_apply(a, b, w));
  }
  return r;
}

// Two-tier tolerances: structural for accept/reject decisions on ingested
// data, verify for residuals of exactly constructed objects.
struct Tolerance {
  double eps_structural = 1e-9;
  double eps_verify = 1e-12;

  Tolerance() = default;
  Tolerance(double structural, double verify)
      : eps_structural(structural), eps_verify(verify) {
    if (!(0.0 < eps_verify && eps_verify <= eps_structural && eps_structural < 1.0))
      throw std::invalid_argument("Tolerance: need 0 < eps_verify <= eps_structural < 1");
  }
};

// Deterministic Haar-like 2x2 unitaries. Gaussian entries come from an
// explicit Box-Muller transform over mt19937_64 bits, so the stream does not
// depend on the standard library's distribution implementations.
class UnitarySampler {
 public:
  explicit UnitarySampler(std::uint64_t seed) : rng_(seed) {}

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do { u1 = uniform(); } while (u1 <= 1e-300);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  Mat2 next() {
    // QR of a Ginibre sample by Gram-Schmidt; the positive-diagonal
    // representative is the Haar one.
    CVec2 a0(Complex(gaussian(), gaussian()), Complex(gaussian(), gaussian()));
    CVec2 a1(Complex(gaussian(), gaussian()), Complex(gaussian(), gaussian()));
    const CVec2 q0 = normalized(a0);
    const CVec2 p = a1 - inner(a1, q0) * q0;
    const CVec2 q1 = normalized(p);
    return Mat2::from_columns(q0, q1);
  }

 private:
  double uniform() {
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  }

  std::mt19937_64 rng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace subprod
