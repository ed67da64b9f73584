#pragma once

#include <optional>
#include <vector>

#include "subprod/classify.hpp"
#include "subprod/system.hpp"

namespace subprod {

// Inverse of the restriction table: a spec whose restriction by m returns the
// input. For e3 the m-th root is selected by root_choice in [0, m); e2 admits
// no refinement (throws Error("e2_refinement", ...)) for m >= 2.
SystemSpec refine_spec(const SystemSpec& spec, int m, int root_choice = 0);

// Unit-modulus multiplicative family on a grid, either an exponential
// character exp(i b t) or the symbolic record of tower root choices.
struct EtaFamily {
  enum class Descriptor { Exponential, RootChoices };

  Descriptor descriptor = Descriptor::Exponential;
  double b = 0.0;                 // Exponential
  std::vector<int> root_choices;  // RootChoices
  long long denominator = 1;
  std::vector<Complex> values;    // eta at step k, k = 1..size

  static EtaFamily exponential(double b);

  // eta at grid step k of this family's denominator.
  Complex at_step(long long k) const;
  // eta at an arbitrary rational time; exact for the exponential descriptor,
  // grid lookup otherwise (throws Error("off_grid") off the realized grid).
  Complex at(const Time& t) const;
  double multiplicativity_residual() const;
};

struct TowerLevel {
  long long denominator = 1;  // n! at level n
  SystemSpec step_spec;       // per-step spec of this level
  FiniteGridSystem system;
  CanonicalBasis basis;       // e3 levels carry the real-time normalization
};

// Compatible family of grid systems at denominators 1!, 2!, ..., depth!.
struct RefinementTower {
  SystemSpec base;             // level-1 spec
  int depth = 1;
  int horizon = 2;             // real-time horizon; level n has depth!*horizon... see build
  std::vector<int> root_choices;  // one per level 2..depth (e3; ignored otherwise)
  std::vector<TowerLevel> levels;

  const TowerLevel& finest() const { return levels.back(); }
};

// Build the factorial tower under the given spec. The horizon is in real
// time: level n covers the grid {k/n! : 1 <= k <= horizon*n!}. Depth >= 2
// rejects e2 bases.
RefinementTower build_tower(const SystemSpec& spec, int depth,
                            const std::vector<int>& root_choices, int horizon);

// Max defect of level compatibility: restricted maps of level n+1 against
// level n maps, and the basis map (with its e3 rescaling) against the level-n
// basis.
double tower_compatibility_residual(const RefinementTower& tower);

// Character family realized on the finest grid of an e3 tower, with the
// exponential descriptor exactly when every root choice is principal.
EtaFamily eta_from_tower(const RefinementTower& tower);

}  // namespace subprod
