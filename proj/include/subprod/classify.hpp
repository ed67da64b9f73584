#pragma once

#include <optional>
#include <string>
#include <vector>

#include "subprod/system.hpp"

namespace subprod {

// Structure of the product vectors inside the range of a 4x2 isometry.
struct ProductStructure {
  enum class Kind { GenericPair, DoubleRoot, FirstFactorFixed, SecondFactorFixed };

  Kind kind = Kind::GenericPair;
  CVec4 dir1;              // GenericPair / DoubleRoot (unit product vectors)
  CVec4 dir2;              // GenericPair only
  CVec2 fixed;             // First/SecondFactorFixed (unit common factor)
  double discriminant_margin = 0.0;  // |disc| / coefficient scale^2
};

ProductStructure product_directions(const Isometry42& beta11, const Tolerance& tol = {});

// Splits a (near) product vector into unit tensor factors w ~ u @ v.
// Returns the split residual ||w - (u@v)·phase-fixed||.
double factor_split(const CVec4& w, CVec2& u, CVec2& v);

// Result of classifying raw map data up to isomorphism.
struct Classification {
  SystemSpec spec;          // recovered type and per-step parameters
  CanonicalBasis basis;     // recovered canonical basis in the system's coordinates
  double residual = 0.0;    // max deviation from the declared defining relations
  double discriminant_margin = 0.0;
  double inner_xy_magnitude = 0.0;  // raw |<x1,y1>| behind the small-a policy
  double small_a_threshold = 0.0;
  long long denominator = 1;
  int horizon = 2;

  // Rational-time extras, filled for e3 on grids with denominator > 1.
  std::optional<double> rational_c;
  std::vector<Complex> eta;  // eta at step k, k = 1..horizon
};

// Decide which canonical family the system belongs to, recover its
// parameters and a canonical basis. Throws Error("inconsistent", ...) naming
// the first violated relation when the data fits no family within tolerance.
Classification classify(const FiniteGridSystem& sys, const Tolerance& tol = {});

struct IsomorphismResult {
  bool isomorphic = false;
  std::vector<Mat2> thetas;  // witnesses, one per grid step (when isomorphic)
  double residual = 0.0;     // isomorphism diagram defect of the witness
  std::string reason;        // why not, otherwise empty
};

// Two systems on the same grid are isomorphic iff they classify to the same
// type and parameters; on success an explicit unitary family is returned and
// verified against the intertwining diagram.
IsomorphismResult decide_isomorphic(const FiniteGridSystem& a, const FiniteGridSystem& b,
                                    const Tolerance& tol = {});

}  // namespace subprod
