#pragma once

#include <optional>
#include <vector>

#include "subprod/classify.hpp"
#include "subprod/system.hpp"

namespace subprod {

// Word in the automorphism generators: a global phase family (parameter c,
// anchored to real time), an optional basis swap (e1/e2 only), and an
// optional extra phase. The extra family depends on the type: for e1(0) the
// second basis vector gets phase b*t, for e2(0) odd steps get opposite phases
// +-b, and for e3/e4/e5 the second basis vector gets the fixed phase b.
// Applied in the order extra, then swap, then the global phase.
struct GeneratorWord {
  double c = 0.0;
  bool swap = false;
  std::optional<double> extra_b;
};

struct Automorphism {
  GeneratorWord word;
  std::vector<Mat2> thetas;  // one per grid step
};

// Realize a word as matrices in the system's coordinates via the recovered
// canonical basis. Throws Error("inadmissible_generator", ...) when the word
// uses a generator the classified type does not admit.
Automorphism make_automorphism(const Classification& cls, const GeneratorWord& word);

// Defect of the self-intertwining diagram for the given unitary family.
double verify_automorphism(const FiniteGridSystem& sys, const std::vector<Mat2>& thetas);

// Recover the generator word of a verified automorphism; the result
// reproduces the input matrices through make_automorphism. Phases come back
// in [0, 2*pi*N) on a grid with denominator N, the range a step of 1/N can
// distinguish. For e2(0) the word is normalized to extra_b in [0, pi) (the
// generator pair (c, b) and (c + pi*N, b - pi) realize identical matrices).
GeneratorWord decompose_automorphism(const FiniteGridSystem& sys, const Classification& cls,
                                     const std::vector<Mat2>& thetas, const Tolerance& tol = {});

std::vector<Mat2> compose(const std::vector<Mat2>& outer, const std::vector<Mat2>& inner);

// Type mapping of the sublattice restriction by m.
SystemSpec restrict_spec(const SystemSpec& spec, int m);

// Basis map onto the sublattice of multiples of m: subsamples the pairs and,
// for e3, rescales the second family by 1/|y_m|.
CanonicalBasis restrict_basis(SystemType type, const CanonicalBasis& basis, int m);
CanonicalBasis restrict_basis(const Classification& cls, int m);

// Automorphism restriction onto the sublattice (subsampling).
std::vector<Mat2> restrict_automorphism(const std::vector<Mat2>& thetas, int m);

// Classification of the restricted system derived without re-classifying.
Classification derive_restricted(const Classification& cls, int m);

// Constructive section of the restriction homomorphism: produces a family on
// the full system whose restriction reproduces the given verified family.
// Throws Error("no_lift", ...) for the one genuinely non-surjective case
// (full type e2 with even m and a nontrivial extra phase downstairs).
std::vector<Mat2> lift_automorphism(const FiniteGridSystem& sys, const Classification& cls,
                                    int m, const std::vector<Mat2>& restricted,
                                    const Tolerance& tol = {});

// Basis surjectivity witness: a basis of the full system mapping onto the
// given valid basis of the restricted system.
CanonicalBasis lift_basis(const FiniteGridSystem& sys, const Classification& cls, int m,
                          const CanonicalBasis& target, const Tolerance& tol = {});

// Action of a unitary family on a basis, (x_k, y_k) -> (theta_k x_k, theta_k y_k).
CanonicalBasis apply_to_basis(const std::vector<Mat2>& thetas, const CanonicalBasis& basis);

}  // namespace subprod
