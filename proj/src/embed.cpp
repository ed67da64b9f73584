#include "subprod/embed.hpp"

#include <algorithm>
#include <cmath>

namespace subprod {

namespace {

double omega_of(const std::vector<Complex>& samples) {
  double w = 0.0;
  for (size_t i = 0; i + 1 < samples.size(); ++i)
    w = std::max(w, std::abs(samples[i + 1] - samples[i]));
  return w;
}

}  // namespace

ProbeTable continuity_probe(const FiniteGridSystem& sys, const CVec2& h) {
  const long long n = sys.denominator;
  if (sys.horizon < n)
    throw Error("horizon", "probe needs the grid to reach time 1");
  if (norm(h) == 0.0) throw Error("invalid_spec", "probe vector must be nonzero");

  ProbeTable table;
  table.denominator = n;
  table.endpoint = std::real(inner(h, h));
  std::vector<Complex> seq;
  seq.push_back(table.endpoint);
  for (long long k = 1; k < n; ++k) {
    const int ki = static_cast<int>(k);
    const int li = static_cast<int>(n - k);
    const CVec4 lhs = apply(sys.beta(ki, li), h);
    const CVec4 rhs = exchange(apply(sys.beta(li, ki), h));
    const Complex f = inner(lhs, rhs);
    table.values.emplace_back(Time(k, n), f);
    seq.push_back(f);
  }
  seq.push_back(table.endpoint);
  table.omega = omega_of(seq);
  return table;
}

Complex probe_closed_form_type3(double c, const EtaFamily& eta, const Time& t) {
  if (!(t < Time(1, 1))) throw Error("off_grid", "closed form defined on (0,1)");
  const double tv = t.value();
  const Time one_minus(t.den() - t.num(), t.den());
  const Complex eta_t = eta.at(t);
  const Complex eta_1 = eta.at(Time(1, 1));
  const double y_t = y_norm_law(c, t);
  const double y_1mt = y_norm_law(c, one_minus);
  return eta_t * (std::pow(c, tv) * y_1mt + std::pow(c, 1.0 - tv) * std::conj(eta_1) * y_t);
}

namespace {

struct WordPiece {
  Rational lo, hi;
  int letter;  // 0 or 1
};

using UnitWord = std::vector<WordPiece>;

// Product over the common refinement of pairwise unit overlaps a^length:
// matching letters contribute 1, mismatching ones a^(segment length).
double word_kernel(const UnitWord& w1, const UnitWord& w2, double a) {
  std::vector<Rational> cuts;
  for (const auto& p : w1) {
    cuts.push_back(p.lo);
    cuts.push_back(p.hi);
  }
  for (const auto& p : w2) {
    cuts.push_back(p.lo);
    cuts.push_back(p.hi);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const auto letter_at = [](const UnitWord& w, const Rational& lo, const Rational& hi) {
    for (const auto& p : w)
      if (!(lo < p.lo) && !(p.hi < hi)) return p.letter;
    throw Error("invalid_spec", "word does not tile the interval");
  };

  Rational mismatch(0, 1);
  for (size_t i = 0; i + 1 < cuts.size(); ++i)
    if (letter_at(w1, cuts[i], cuts[i + 1]) != letter_at(w2, cuts[i], cuts[i + 1]))
      mismatch = mismatch + (cuts[i + 1] - cuts[i]);

  if (mismatch.is_zero()) return 1.0;
  if (a == 0.0) return 0.0;
  return std::pow(a, mismatch.value());
}

}  // namespace

ProbeTable extended_probe_type1(double a, long long denominator) {
  if (!(a >= 0.0 && a < 1.0)) throw Error("invalid_spec", "requires a in [0,1)");
  if (denominator < 2) throw Error("invalid_spec", "denominator must be >= 2");

  const Rational half(1, 2), one(1, 1);
  const UnitWord base = {{Rational(0, 1), half, 0}, {half, one, 1}};

  ProbeTable table;
  table.denominator = denominator;
  table.endpoint = 1.0;
  std::vector<Complex> seq;
  seq.push_back(1.0);
  for (long long k = 1; Rational(k, denominator) < half; ++k) {
    const Rational t(k, denominator);
    const UnitWord shifted = {{Rational(0, 1), t, 1},
                              {t, t + half, 0},
                              {t + half, one, 1}};
    const Complex f = word_kernel(shifted, base, a);
    table.values.emplace_back(Time(k, denominator), f);
    seq.push_back(f);
  }
  table.omega = omega_of(seq);
  return table;
}

std::vector<ProbeTable> tower_probe(const RefinementTower& tower) {
  std::vector<ProbeTable> tables;
  tables.reserve(tower.levels.size());
  for (const auto& level : tower.levels) {
    const int n = static_cast<int>(level.denominator);
    tables.push_back(continuity_probe(level.system, level.basis.y(n)));
  }
  return tables;
}

const char* reason_name(Verdict::Reason r) {
  switch (r) {
    case Verdict::Reason::None: return "none";
    case Verdict::Reason::Type2NotRational: return "type2_not_rational";
    case Verdict::Reason::Type4: return "type4";
    case Verdict::Reason::Type5: return "type5";
    case Verdict::Reason::Type1WithAZero: return "type1_with_a_zero";
    case Verdict::Reason::Type3NonExponentialEta: return "type3_non_exponential_eta";
  }
  return "?";
}

Verdict decide_embeddable(const SystemSpec& spec, const std::optional<EtaFamily>& eta) {
  spec.validate();
  Verdict v;
  switch (spec.type) {
    case SystemType::E2:
      throw Error("invalid_spec", "e2 is not a rational-time type");
    case SystemType::E4:
      v.reason = Verdict::Reason::Type4;
      v.detail = "the shift-overlap function vanishes on (0,1) but is 1 at the endpoints";
      return v;
    case SystemType::E5:
      v.reason = Verdict::Reason::Type5;
      v.detail = "the shift-overlap function vanishes on (0,1) but is 1 at the endpoints";
      return v;
    case SystemType::E1:
      if (spec.a == 0.0) {
        v.reason = Verdict::Reason::Type1WithAZero;
        v.detail = "the doubled-vector overlap a^{2t} jumps at t = 0 when a = 0";
        return v;
      }
      v.embeddable = true;
      v.detail = "two-unit construction";
      return v;
    case SystemType::E3: {
      const bool exponential =
          eta.has_value()
              ? eta->descriptor == EtaFamily::Descriptor::Exponential
              : std::all_of(spec.eta_choices.begin(), spec.eta_choices.end(),
                            [](int r) { return r == 0; });
      if (!exponential) {
        v.reason = Verdict::Reason::Type3NonExponentialEta;
        v.detail = "declared character is not exponential";
        return v;
      }
      v.embeddable = true;
      v.detail = "vacuum plus one-particle construction";
      return v;
    }
  }
  return v;
}

Representation build_representation(const SystemSpec& spec, long long denominator,
                                    int horizon) {
  const Verdict verdict = decide_embeddable(spec);
  if (!verdict.embeddable)
    throw Error("not_embeddable", std::string("no representation exists: ") +
                                      reason_name(verdict.reason));
  if (denominator < 1 || horizon < 1)
    throw Error("invalid_spec", "representation grid must be nonempty");

  Representation rep;
  rep.type = spec.type;
  rep.denominator = denominator;
  rep.horizon = horizon;

  if (spec.type == SystemType::E1) {
    rep.a = spec.a;
    const double kappa = 2.0 * std::log(1.0 / spec.a);
    const SystemSpec step_spec =
        SystemSpec::e1(std::pow(spec.a, 1.0 / static_cast<double>(denominator)));
    for (int k = 1; k <= horizon; ++k) {
      rep.basis.pairs.push_back(canonical_pair(step_spec, denominator, k));
      const Rational len(k, denominator);
      const double t = len.value();
      const ExpVectorCombo ax =
          ExpVectorCombo::exponential(1.0, ExpSegment::zero(len));
      const ExpVectorCombo ay = ExpVectorCombo::exponential(
          std::exp(-0.5 * kappa * t),
          ExpSegment::single(len, {Complex(std::sqrt(kappa)), 1.0, 0.0}));
      rep.expv.emplace_back(ax, ay);
    }
    return rep;
  }

  // Third family: either flavor reduces to the real-time pair (c, b).
  double c, b;
  if (spec.is_rational_e3()) {
    c = *spec.c;
    b = *spec.b;
  } else {
    c = std::abs(*spec.lambda);
    b = std::arg(*spec.lambda);
  }
  rep.c = c;
  rep.b = b;
  rep.norm_const = c == 1.0 ? 1.0 : std::sqrt(2.0 * std::log(c) / (c * c - 1.0));
  const SystemSpec rat = SystemSpec::e3_rational(c, b);
  for (int k = 1; k <= horizon; ++k) {
    rep.basis.pairs.push_back(canonical_pair(rat, denominator, k));
    const Rational len(k, denominator);
    const FockVector01 ax = FockVector01::vac(len);
    const FockVector01 ay = FockVector01::particle(
        ExpSegment::single(len, {Complex(rep.norm_const), c, b}));
    rep.fock01.emplace_back(ax, ay);
  }
  return rep;
}

SystemSpec representation_grid_spec(const SystemSpec& spec, long long denominator) {
  spec.validate();
  switch (spec.type) {
    case SystemType::E1:
      return SystemSpec::e1(std::pow(spec.a, 1.0 / static_cast<double>(denominator)));
    case SystemType::E2:
      throw Error("invalid_spec", "e2 is not a rational-time type");
    case SystemType::E3:
      if (spec.is_rational_e3()) return spec;
      return SystemSpec::e3_rational(std::abs(*spec.lambda), std::arg(*spec.lambda));
    case SystemType::E4:
    case SystemType::E5:
      return spec;
  }
  throw Error("invalid_spec", "unreachable");
}

namespace {

// Coefficients of a coordinate vector in the canonical frame at step k.
CVec2 frame_solve(const Representation& rep, int k, const CVec2& v) {
  const CVec2& x = rep.basis.x(k);
  const CVec2& y = rep.basis.y(k);
  return apply(inverse(Mat2::from_columns(x, y)), v);
}

FockVector01 alpha_fock(const Representation& rep, int k, const CVec2& v) {
  const CVec2 coef = frame_solve(rep, k, v);
  const auto& [ax, ay] = rep.fock01[static_cast<size_t>(k - 1)];
  return plus(scaled(ax, coef[0]), scaled(ay, coef[1]));
}

ExpVectorCombo alpha_exp(const Representation& rep, int k, const CVec2& v) {
  const CVec2 coef = frame_solve(rep, k, v);
  const auto& [ax, ay] = rep.expv[static_cast<size_t>(k - 1)];
  return plus(scaled(ax, coef[0]), scaled(ay, coef[1]));
}

}  // namespace

double representation_isometry_defect(const Representation& rep, int k, const CVec2& v) {
  if (k < 1 || k > rep.horizon) throw Error("off_grid", "step outside the representation grid");
  double image_norm;
  if (rep.type == SystemType::E1)
    image_norm = std::sqrt(norm_sq(alpha_exp(rep, k, v)));
  else
    image_norm = std::sqrt(norm_sq(alpha_fock(rep, k, v)));
  return std::abs(image_norm - norm(v));
}

namespace {

// Difference of 0-1 particle tensor expressions in component form. Identical
// contributions cancel at coefficient level, so a vanishing difference
// measures down to roundoff instead of the sqrt(eps) floor of a Gram form.
struct Fock01TensorDiff {
  Complex vac_vac = 0.0;
  ExpSegment left, right;  // (particle @ vac) and (vac @ particle) parts
  std::vector<std::pair<Complex, std::pair<ExpSegment, ExpSegment>>> doubles;

  Fock01TensorDiff(const Rational& left_len, const Rational& right_len)
      : left(ExpSegment::zero(left_len)), right(ExpSegment::zero(right_len)) {}

  void accumulate(Complex coeff, const FockVector01& a, const FockVector01& b) {
    vac_vac += coeff * a.vacuum * b.vacuum;
    if (!a.one.is_zero()) left = left.plus(a.one.scaled(coeff * b.vacuum));
    if (!b.one.is_zero()) right = right.plus(b.one.scaled(coeff * a.vacuum));
    if (!a.one.is_zero() && !b.one.is_zero())
      doubles.emplace_back(coeff, std::make_pair(a.one, b.one));
  }

  double residual() const {
    double total = std::norm(vac_vac);
    total += norm_sq(left.compacted());
    total += norm_sq(right.compacted());
    Complex dd = 0.0;
    for (const auto& p : doubles)
      for (const auto& q : doubles)
        dd += p.first * std::conj(q.first) * inner(p.second.first, q.second.first) *
              inner(p.second.second, q.second.second);
    total += std::max(0.0, std::real(dd));
    return std::sqrt(std::max(0.0, total));
  }
};

bool segments_match(const ExpSegment& a, const ExpSegment& b) {
  if (!(a.length == b.length)) return false;
  return norm_sq(a.plus(b.scaled(-1.0)).compacted()) <= 1e-20;
}

// Exponential-vector tensor difference with argument-level term matching.
struct ExpTensorDiff {
  struct Group {
    Complex coeff;
    ExpSegment left, right;
  };
  std::vector<Group> groups;

  void accumulate(Complex coeff, const ExpSegment& left, const ExpSegment& right) {
    for (auto& g : groups) {
      if (segments_match(g.left, left) && segments_match(g.right, right)) {
        g.coeff += coeff;
        return;
      }
    }
    groups.push_back({coeff, left, right});
  }

  double residual() const {
    Complex total = 0.0;
    for (const auto& p : groups)
      for (const auto& q : groups)
        total += p.coeff * std::conj(q.coeff) *
                 std::exp(inner(p.left, q.left) + inner(p.right, q.right));
    return std::sqrt(std::max(0.0, std::real(total)));
  }
};

}  // namespace

double verify_representation(const Representation& rep, const FiniteGridSystem& sys,
                             int s_step, int t_step) {
  if (sys.denominator != rep.denominator)
    throw Error("invalid_spec", "representation and system grids differ");
  if (s_step < 1 || t_step < 1 || s_step + t_step > rep.horizon ||
      s_step + t_step > sys.horizon)
    throw Error("off_grid", "pair outside the grid");

  const Rational split(s_step, rep.denominator);
  double worst = 0.0;
  for (int col = 0; col < 2; ++col) {
    CVec2 v;
    v[col] = 1.0;
    const CVec4 w = apply(sys.beta(s_step, t_step), v);

    if (rep.type == SystemType::E1) {
      ExpTensorDiff diff;
      const ExpVectorCombo whole = alpha_exp(rep, s_step + t_step, v);
      for (const auto& term : whole.terms)
        diff.accumulate(term.coeff, term.arg.restricted(split), term.arg.shifted_tail(split));
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          CVec2 ei, ej;
          ei[i] = 1.0;
          ej[j] = 1.0;
          const ExpVectorCombo left = alpha_exp(rep, s_step, ei);
          const ExpVectorCombo right = alpha_exp(rep, t_step, ej);
          for (const auto& lt : left.terms)
            for (const auto& rt : right.terms)
              diff.accumulate(-w[2 * i + j] * lt.coeff * rt.coeff, lt.arg, rt.arg);
        }
      worst = std::max(worst, diff.residual());
    } else {
      const Rational tail_len(t_step, rep.denominator);
      Fock01TensorDiff diff(split, tail_len);
      const FockVector01 whole = alpha_fock(rep, s_step + t_step, v);
      diff.accumulate(1.0, FockVector01{whole.vacuum, whole.one.restricted(split)},
                      FockVector01::vac(tail_len));
      diff.accumulate(1.0, FockVector01::vac(split),
                      FockVector01::particle(whole.one.shifted_tail(split)));
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          CVec2 ei, ej;
          ei[i] = 1.0;
          ej[j] = 1.0;
          diff.accumulate(-w[2 * i + j], alpha_fock(rep, s_step, ei),
                          alpha_fock(rep, t_step, ej));
        }
      worst = std::max(worst, diff.residual());
    }
  }
  return worst;
}

}  // namespace subprod
