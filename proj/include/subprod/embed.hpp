#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "subprod/fock.hpp"
#include "subprod/system.hpp"
#include "subprod/tower.hpp"

namespace subprod {

// Sampled shift-overlap function t -> <beta_{t,1-t} h, xi beta_{1-t,t} h> on
// the open unit interval of a grid, with the norm value at the endpoints.
// Uniform continuity of this function is necessary for a representation in a
// product system; a jump at the endpoints is the obstruction witness.
struct ProbeTable {
  long long denominator = 1;
  std::vector<std::pair<Time, Complex>> values;  // interior grid points
  double endpoint = 1.0;                          // |h|^2 at t in {0, 1}
  double omega = 0.0;  // max jump between consecutive samples, endpoints included
};

// Computes the table from the stored maps; requires the grid to reach 1.
ProbeTable continuity_probe(const FiniteGridSystem& sys, const CVec2& h);

// Closed form of the probe for the third family: eta_t (c^t |y_{1-t}|^2 +
// c^{1-t} conj(eta_1) |y_t|^2), with the norms from y_norm_law.
Complex probe_closed_form_type3(double c, const EtaFamily& eta, const Time& t);

// Probe of the doubled first-family vector through the two-unit word kernel:
// words of unit symbols on subintervals, inner product = product of pairwise
// overlaps a^length over the common refinement. No closed form substituted.
ProbeTable extended_probe_type1(double a, long long denominator);

// Probe tables for every level of a tower, h = the canonical second basis
// vector at real time 1.
std::vector<ProbeTable> tower_probe(const RefinementTower& tower);

struct Verdict {
  enum class Reason { None, Type2NotRational, Type4, Type5, Type1WithAZero, Type3NonExponentialEta };

  bool embeddable = false;
  Reason reason = Reason::None;
  std::string detail;
};

const char* reason_name(Verdict::Reason r);

// Decides embeddability into a product system for a rational-time spec; e3
// consults the eta descriptor (the declared one wins over any finite data).
Verdict decide_embeddable(const SystemSpec& spec,
                          const std::optional<EtaFamily>& eta = std::nullopt);

// Concrete isometric embeddings of the grid fibers into the first two Fock
// layers (third family) or the exponential-vector span (first family). The
// images of the canonical basis pair are stored per grid step.
struct Representation {
  SystemType type = SystemType::E3;
  double a = 0.0;       // first family
  double c = 1.0;       // third family
  double b = 0.0;       // third family
  double norm_const = 1.0;  // amplitude making |f_t|^2 = |y_t|^2
  long long denominator = 1;
  int horizon = 1;
  CanonicalBasis basis;
  std::vector<std::pair<FockVector01, FockVector01>> fock01;    // third family
  std::vector<std::pair<ExpVectorCombo, ExpVectorCombo>> expv;  // first family
};

Representation build_representation(const SystemSpec& spec, long long denominator,
                                    int horizon);

// Per-step spec realizing the given real-time spec on a grid (a -> a^{1/N};
// e3 passes through its rational flavor).
SystemSpec representation_grid_spec(const SystemSpec& spec, long long denominator);

// |alpha_k(v)| - |v| for a vector in grid coordinates at step k.
double representation_isometry_defect(const Representation& rep, int k, const CVec2& v);

// Defect of the representation diagram at the pair (s, t) in grid steps:
// alpha_{s+t} factorized through the Fock splitting against
// (alpha_s @ alpha_t) . beta_{s,t}, measured through closed-form Gram data.
double verify_representation(const Representation& rep, const FiniteGridSystem& sys,
                             int s_step, int t_step);

}  // namespace subprod
