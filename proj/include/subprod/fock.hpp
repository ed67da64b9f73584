#pragma once

#include <vector>

#include "subprod/errors.hpp"
#include "subprod/linalg.hpp"
#include "subprod/time.hpp"

namespace subprod {

// Piecewise exponential function algebra on a rational interval (0, T),
// closed under restriction, shift, scaling and addition, with closed-form
// inner products. This is the function class carrying every embedding
// computed by the library; no quadrature is involved anywhere.

struct ExpTerm {
  Complex amp;          // A
  double growth = 1.0;  // c > 0
  double freq = 0.0;    // b
  // value at s: A c^s exp(i b s)
};

struct SegPiece {
  Rational lo, hi;
  std::vector<ExpTerm> terms;  // sum of terms on (lo, hi)
};

struct ExpSegment {
  Rational length;               // domain (0, length)
  std::vector<SegPiece> pieces;  // tile (0, length), sorted, disjoint

  static ExpSegment zero(const Rational& len);
  static ExpSegment single(const Rational& len, const ExpTerm& term);

  bool is_zero() const;
  Complex eval(double s) const;

  ExpSegment restricted(const Rational& s) const;    // to (0, s)
  ExpSegment shifted_tail(const Rational& s) const;  // u -> f(s + u) on (0, length - s)
  ExpSegment scaled(Complex z) const;
  ExpSegment plus(const ExpSegment& other) const;    // same length required

  // Merges terms with matching (growth, freq) per piece, adding amplitudes
  // exactly; near-cancelling sums then measure small without Gram roundoff.
  ExpSegment compacted() const;
};

// Integral of f * conj(g) over (0, length); lengths must agree.
Complex inner(const ExpSegment& f, const ExpSegment& g);
double norm_sq(const ExpSegment& f);

// Vacuum + one-particle vector of the Fock space over (0, T).
struct FockVector01 {
  Complex vacuum;
  ExpSegment one;

  static FockVector01 vac(const Rational& len);
  static FockVector01 particle(const ExpSegment& f);
};

Complex inner(const FockVector01& a, const FockVector01& b);
double norm_sq(const FockVector01& a);
FockVector01 scaled(const FockVector01& a, Complex z);
FockVector01 plus(const FockVector01& a, const FockVector01& b);

// Finite combination of exponential vectors; all inner products go through
// the kernel <e(f), e(g)> = exp(<f, g>).
struct ExpVectorCombo {
  struct Term {
    Complex coeff;
    ExpSegment arg;
  };
  Rational length;
  std::vector<Term> terms;

  static ExpVectorCombo exponential(Complex coeff, const ExpSegment& arg);
};

ExpVectorCombo scaled(const ExpVectorCombo& a, Complex z);
ExpVectorCombo plus(const ExpVectorCombo& a, const ExpVectorCombo& b);

Complex inner(const ExpVectorCombo& a, const ExpVectorCombo& b);

// Norm through the kernel Gram matrix; rejects argument sets whose Gram
// fails positive semidefiniteness beyond the stated slack.
double norm_sq(const ExpVectorCombo& a, double psd_slack = 1e-10);

// Smallest eigenvalue proxy of the Hermitian kernel Gram of the argument set
// (via pivoted LDL*); negative values beyond roundoff violate the kernel
// positivity invariant.
double kernel_gram_min_pivot(const std::vector<ExpSegment>& args);

}  // namespace subprod
