#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "subprod/errors.hpp"
#include "subprod/linalg.hpp"
#include "subprod/time.hpp"

namespace subprod {

enum class SystemType { E1, E2, E3, E4, E5 };

const char* type_name(SystemType t);
SystemType type_from_name(const std::string& s);

// Symbolic description of one of the five canonical families.
//
// For e1/e2 the parameter a and for e3 the parameter lambda are understood
// per grid step (the discrete re-indexing of the grid). The rational-time e3
// flavor (c, b, eta_choices) is anchored to real time: c is the magnitude law
// of the coefficient family, b the character exponent, and eta_choices the
// per-level root selections of a refinement tower (level k refines by k;
// empty means principal roots throughout).
struct SystemSpec {
  SystemType type = SystemType::E1;
  double a = 0.0;                       // e1/e2
  std::optional<Complex> lambda;        // e3, discrete flavor
  std::optional<double> c;              // e3, rational flavor
  std::optional<double> b;              // e3, rational flavor
  std::vector<int> eta_choices;         // e3, rational flavor

  static SystemSpec e1(double a);
  static SystemSpec e2(double a);
  static SystemSpec e3(Complex lambda);
  static SystemSpec e3_rational(double c, double b, std::vector<int> eta_choices = {});
  static SystemSpec e4();
  static SystemSpec e5();

  bool is_rational_e3() const { return type == SystemType::E3 && c.has_value(); }
  void validate() const;  // throws Error("invalid_spec", ...)
};

// The per-step coefficient lambda_{1/N} of an e3 spec realized at denominator N.
Complex lambda_step_of(const SystemSpec& spec, long long N);

// Canonical basis pairs (x, y), one per grid step 1..K.
struct CanonicalBasis {
  std::vector<std::pair<CVec2, CVec2>> pairs;

  int size() const { return static_cast<int>(pairs.size()); }
  const CVec2& x(int k) const { return pairs[static_cast<size_t>(k - 1)].first; }
  const CVec2& y(int k) const { return pairs[static_cast<size_t>(k - 1)].second; }
};

// A concrete system on the grid {k/N : 1 <= k <= K}: one 4x2 map per pair
// (j, k) with j + k <= K. Immutable by convention after construction.
struct FiniteGridSystem {
  long long denominator = 1;
  int horizon = 2;
  std::map<std::pair<int, int>, Isometry42> maps;

  const Isometry42& beta(int j, int k) const;
  Time step_time(int k) const { return Time(k, denominator); }
  bool complete() const;  // all (j,k), j+k <= horizon present
};

struct GeneratedSystem {
  FiniteGridSystem system;
  CanonicalBasis basis;
};

// Expected images (beta(x_{j+k}), beta(y_{j+k})) under the spec's defining
// relations, given basis pairs at steps j and k.
std::pair<CVec4, CVec4> canonical_images(const SystemSpec& spec, long long N, int j, int k,
                                         const CVec2& xj, const CVec2& yj, const CVec2& xk,
                                         const CVec2& yk);

// Closed-form canonical basis vector pair at step k (x = (1,0), second
// coordinate of y real nonnegative).
std::pair<CVec2, CVec2> canonical_pair(const SystemSpec& spec, long long N, int k);

// Construct the canonical system of the given spec on the grid. All isometry
// and associativity residuals of the result are at verify level.
GeneratedSystem generate_canonical(const SystemSpec& spec, long long N, int K);

// Max associativity defect over all composable triples and domain basis
// vectors; 0 vacuously when the horizon admits no triple.
double check_associativity(const FiniteGridSystem& sys);

// Max isometry defect over all stored maps.
double max_isometry_residual(const FiniteGridSystem& sys);

// Conjugates every map by a family of 2x2 unitaries (one per grid step):
// beta'_{j,k} = (theta_j @ theta_k) . beta_{j,k} . theta_{j+k}^{-1}.
FiniteGridSystem apply_isomorphism(const FiniteGridSystem& sys, const std::vector<Mat2>& thetas);

struct ScrambleResult {
  FiniteGridSystem system;
  std::vector<Mat2> thetas;
};

// Seeded random basis scramble; the output is isomorphic to the input via the
// returned unitaries.
ScrambleResult scramble(const FiniteGridSystem& sys, std::uint64_t seed);

// Sublattice restriction: step j of the result is step m*j of the input.
// The denominator is kept, matching the re-indexed time of the result.
FiniteGridSystem restrict_system(const FiniteGridSystem& sys, int m);

// Residual of a claimed canonical basis against the defining relations of the
// spec (map relations on every grid pair plus the Gram data at every step).
// When worst_desc is given it receives a description of the worst relation.
double basis_condition_residual(const FiniteGridSystem& sys, const SystemSpec& spec,
                                const CanonicalBasis& basis,
                                std::string* worst_desc = nullptr);

// Max defect of the intertwining diagram beta_b . theta_{j+k} =
// (theta_j @ theta_k) . beta_a over all pairs and domain basis vectors,
// including the unitarity defect of the thetas themselves.
double intertwining_residual(const FiniteGridSystem& a, const FiniteGridSystem& b,
                             const std::vector<Mat2>& thetas);

// Squared norm of the second canonical vector at real time t for coefficient
// magnitude law c: t when c = 1, else (c^{2t}-1)/(c^2-1); guarded expansion
// near c = 1.
double y_norm_law(double c, double t);
double y_norm_law(double c, const Time& t);

}  // namespace subprod
