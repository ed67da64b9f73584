#include "subprod/tower.hpp"

#include <algorithm>
#include <cmath>

#include "subprod/morphisms.hpp"

namespace subprod {

namespace {
constexpr double kTwoPi = 2.0 * 3.14159265358979323846;
}

SystemSpec refine_spec(const SystemSpec& spec, int m, int root_choice) {
  spec.validate();
  if (m < 1) throw Error("invalid_spec", "refinement factor must be >= 1");
  if (m == 1) return spec;
  switch (spec.type) {
    case SystemType::E1:
      return SystemSpec::e1(std::pow(spec.a, 1.0 / static_cast<double>(m)));
    case SystemType::E2:
      throw Error("e2_refinement", "e2 admits no refinement: no type restricts to it");
    case SystemType::E3: {
      if (root_choice < 0 || root_choice >= m)
        throw Error("invalid_spec", "root choice must lie in [0, m)");
      const Complex lam = spec.lambda.has_value()
                              ? *spec.lambda
                              : (*spec.c) * Complex(std::cos(*spec.b), std::sin(*spec.b));
      const double mag = std::pow(std::abs(lam), 1.0 / static_cast<double>(m));
      const double arg =
          (std::arg(lam) + kTwoPi * root_choice) / static_cast<double>(m);
      return SystemSpec::e3(mag * Complex(std::cos(arg), std::sin(arg)));
    }
    case SystemType::E4:
      return SystemSpec::e4();
    case SystemType::E5:
      return SystemSpec::e5();
  }
  throw Error("invalid_spec", "unreachable");
}

EtaFamily EtaFamily::exponential(double b) {
  EtaFamily f;
  f.descriptor = Descriptor::Exponential;
  f.b = b;
  return f;
}

Complex EtaFamily::at_step(long long k) const {
  if (descriptor == Descriptor::Exponential || values.empty()) {
    const double a = b * static_cast<double>(k) / static_cast<double>(denominator);
    return {std::cos(a), std::sin(a)};
  }
  if (k < 1 || k > static_cast<long long>(values.size()))
    throw Error("off_grid", "eta requested outside the realized grid");
  return values[static_cast<size_t>(k - 1)];
}

Complex EtaFamily::at(const Time& t) const {
  if (descriptor == Descriptor::Exponential) {
    const double a = b * t.value();
    return {std::cos(a), std::sin(a)};
  }
  if (t.den() != 0 && denominator % t.den() == 0)
    return at_step(t.num() * (denominator / t.den()));
  throw Error("off_grid", "eta requested outside the realized grid");
}

double EtaFamily::multiplicativity_residual() const {
  double worst = 0.0;
  const long long n = static_cast<long long>(values.size());
  for (long long j = 1; j <= n; ++j) {
    worst = std::max(worst, std::abs(std::abs(at_step(j)) - 1.0));
    for (long long k = 1; j + k <= n; ++k)
      worst = std::max(worst, std::abs(at_step(j + k) - at_step(j) * at_step(k)));
  }
  return worst;
}

RefinementTower build_tower(const SystemSpec& spec, int depth,
                            const std::vector<int>& root_choices, int horizon) {
  spec.validate();
  if (depth < 1) throw Error("invalid_spec", "tower depth must be >= 1");
  if (horizon < 2) throw Error("horizon", "tower horizon must be >= 2");
  std::vector<int> choices = root_choices;
  if (choices.empty() && spec.is_rational_e3()) choices = spec.eta_choices;
  if (static_cast<int>(choices.size()) > std::max(0, depth - 1))
    throw Error("invalid_spec", "more root choices than refinement steps");
  if (spec.type == SystemType::E2 && depth > 1)
    throw Error("e2_refinement", "e2 admits refinement towers of depth 1 only");

  // Level-1 spec in per-step form; the rational e3 flavor anchors to lambda_1.
  SystemSpec level_spec = spec;
  if (spec.is_rational_e3())
    level_spec = SystemSpec::e3((*spec.c) * Complex(std::cos(*spec.b), std::sin(*spec.b)));

  RefinementTower tower;
  tower.base = level_spec;
  tower.depth = depth;
  tower.horizon = horizon;
  tower.root_choices = std::move(choices);
  tower.root_choices.resize(static_cast<size_t>(std::max(0, depth - 1)), 0);

  long long den = 1;
  for (int n = 1; n <= depth; ++n) {
    if (n > 1) {
      level_spec = refine_spec(level_spec, n, tower.root_choices[static_cast<size_t>(n - 2)]);
      den *= n;
    }
    TowerLevel level;
    level.denominator = den;
    level.step_spec = level_spec;

    // e3 levels are generated with the real-time norm normalization; the
    // per-step spec fixes the same maps either way.
    SystemSpec gen_spec = level_spec;
    if (level_spec.type == SystemType::E3) {
      const double c = std::pow(std::abs(*level_spec.lambda), static_cast<double>(den));
      const double b_step = std::arg(*level_spec.lambda);
      gen_spec = SystemSpec::e3_rational(c, b_step * static_cast<double>(den));
      // Anchor the step argument exactly: bypass the chain by giving the
      // real-time b that reproduces arg(lambda_step) at this denominator.
    }
    GeneratedSystem g = generate_canonical(gen_spec, den, horizon * static_cast<int>(den));
    level.system = std::move(g.system);
    level.basis = std::move(g.basis);
    tower.levels.push_back(std::move(level));
  }
  return tower;
}

double tower_compatibility_residual(const RefinementTower& tower) {
  double worst = 0.0;
  for (size_t n = 0; n + 1 < tower.levels.size(); ++n) {
    const TowerLevel& coarse = tower.levels[n];
    const TowerLevel& fine = tower.levels[n + 1];
    const int m = static_cast<int>(n) + 2;

    const FiniteGridSystem sub = restrict_system(fine.system, m);
    if (sub.horizon != coarse.system.horizon)
      throw Error("invalid_spec", "tower levels have mismatched horizons");
    for (const auto& [key, map] : sub.maps) {
      const Isometry42& ref = coarse.system.beta(key.first, key.second);
      for (int t = 0; t < 8; ++t)
        worst = std::max(worst,
                         std::abs(map.m[static_cast<size_t>(t)] - ref.m[static_cast<size_t>(t)]));
    }

    // Basis compatibility via the basis restriction map; for e3 both sides
    // are compared in the per-step normalization it produces.
    const CanonicalBasis mapped =
        restrict_basis(fine.step_spec.type, fine.basis, m);
    const bool rescale = fine.step_spec.type == SystemType::E3;
    const double coarse_y1 = norm(coarse.basis.y(1));
    for (int k = 1; k <= coarse.system.horizon; ++k) {
      worst = std::max(worst, norm(mapped.x(k) - coarse.basis.x(k)));
      const CVec2 want =
          rescale ? (Complex(1.0 / coarse_y1)) * coarse.basis.y(k) : coarse.basis.y(k);
      worst = std::max(worst, norm(mapped.y(k) - want));
    }
  }
  return worst;
}

EtaFamily eta_from_tower(const RefinementTower& tower) {
  if (tower.base.type != SystemType::E3)
    throw Error("invalid_spec", "eta families exist for e3 towers only");
  const TowerLevel& fine = tower.finest();
  const Complex lam = *fine.step_spec.lambda;
  const Complex eta_step = lam / std::abs(lam);

  EtaFamily f;
  f.denominator = fine.denominator;
  f.values.reserve(static_cast<size_t>(fine.system.horizon));
  Complex cur = 1.0;
  for (int k = 1; k <= fine.system.horizon; ++k) {
    cur *= eta_step;
    f.values.push_back(cur);
  }

  const bool principal = std::all_of(tower.root_choices.begin(), tower.root_choices.end(),
                                     [](int r) { return r == 0; });
  if (principal) {
    f.descriptor = EtaFamily::Descriptor::Exponential;
    f.b = std::arg(*tower.base.lambda);
  } else {
    f.descriptor = EtaFamily::Descriptor::RootChoices;
    f.root_choices = tower.root_choices;
    f.b = std::arg(*tower.base.lambda);
  }
  return f;
}

}  // namespace subprod
