#include "subprod/morphisms.hpp"

#include <algorithm>
#include <cmath>

namespace subprod {

namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

double wrap(double v, double period) {
  double r = std::fmod(v, period);
  if (r < 0.0) r += period;
  return r;
}

Complex unit_phase(double angle) { return {std::cos(angle), std::sin(angle)}; }

// Coordinates of v in the (x, y) frame.
CVec2 frame_coords(const CVec2& x, const CVec2& y, const CVec2& v) {
  return apply(inverse(Mat2::from_columns(x, y)), v);
}

double matrix_distance(const std::vector<Mat2>& a, const std::vector<Mat2>& b) {
  double worst = 0.0;
  for (size_t i = 0; i < a.size() && i < b.size(); ++i)
    for (int t = 0; t < 4; ++t)
      worst = std::max(worst, std::abs(a[i].m[static_cast<size_t>(t)] -
                                       b[i].m[static_cast<size_t>(t)]));
  return worst;
}

}  // namespace

Automorphism make_automorphism(const Classification& cls, const GeneratorWord& word) {
  const SystemType type = cls.spec.type;
  if (word.swap && type != SystemType::E1 && type != SystemType::E2)
    throw Error("inadmissible_generator",
                std::string("swap is not an automorphism of ") + type_name(type));
  if (word.extra_b.has_value() && (type == SystemType::E1 || type == SystemType::E2) &&
      cls.spec.a != 0.0)
    throw Error("inadmissible_generator",
                std::string(type_name(type)) + " with a > 0 admits no extra phase family");

  const double b = word.extra_b.value_or(0.0);
  const double n = static_cast<double>(cls.denominator);

  Automorphism out;
  out.word = word;
  out.thetas.reserve(static_cast<size_t>(cls.horizon));
  for (int k = 1; k <= cls.horizon; ++k) {
    Complex px = 1.0, py = 1.0;  // extra family phases on (x_k, y_k)
    switch (type) {
      case SystemType::E1:
        py = unit_phase(b * static_cast<double>(k) / n);
        break;
      case SystemType::E2:
        if (k % 2 == 1) {
          px = unit_phase(b);
          py = unit_phase(-b);
        }
        break;
      case SystemType::E3:
      case SystemType::E4:
      case SystemType::E5:
        py = unit_phase(b);
        break;
    }
    const Complex tr = unit_phase(word.c * static_cast<double>(k) / n);
    CVec2 img_x = (tr * px) * cls.basis.x(k);
    CVec2 img_y = (tr * py) * cls.basis.y(k);
    if (word.swap) {
      // theta = trivial . swap . extra, so the extra phases travel with the
      // original vectors.
      const CVec2 tmp = (tr * px) * cls.basis.y(k);
      img_y = (tr * py) * cls.basis.x(k);
      img_x = tmp;
    }
    const Mat2 frame = Mat2::from_columns(cls.basis.x(k), cls.basis.y(k));
    out.thetas.push_back(mul(Mat2::from_columns(img_x, img_y), inverse(frame)));
  }
  return out;
}

double verify_automorphism(const FiniteGridSystem& sys, const std::vector<Mat2>& thetas) {
  return intertwining_residual(sys, sys, thetas);
}

GeneratorWord decompose_automorphism(const FiniteGridSystem& sys, const Classification& cls,
                                     const std::vector<Mat2>& thetas, const Tolerance& tol) {
  const double ver = verify_automorphism(sys, thetas);
  if (ver > tol.eps_structural)
    throw Error("not_automorphism",
                "family fails the intertwining diagram, residual " + std::to_string(ver));

  const SystemType type = cls.spec.type;
  const double n = static_cast<double>(cls.denominator);
  const CVec2 cx1 = frame_coords(cls.basis.x(1), cls.basis.y(1),
                                 apply(thetas[0], cls.basis.x(1)));
  const CVec2 cy1 = frame_coords(cls.basis.x(1), cls.basis.y(1),
                                 apply(thetas[0], cls.basis.y(1)));

  GeneratorWord word;
  word.swap = std::abs(cx1[1]) > std::abs(cx1[0]);
  if (word.swap && type != SystemType::E1 && type != SystemType::E2)
    throw Error("not_automorphism",
                std::string("family does not fix the distinguished line of ") +
                    type_name(type));

  // Phases of theta_1 on the basis, in the word's composition order.
  const Complex on_x = word.swap ? cx1[1] : cx1[0];
  const Complex on_y = word.swap ? cy1[0] : cy1[1];

  switch (type) {
    case SystemType::E1:
      word.c = wrap(n * std::arg(on_x), kTwoPi * n);
      if (cls.spec.a == 0.0) {
        const double b = wrap(n * (std::arg(on_y) - std::arg(on_x)), kTwoPi * n);
        if (b != 0.0) word.extra_b = b;
      }
      break;
    case SystemType::E2:
      if (cls.spec.a != 0.0) {
        word.c = wrap(n * std::arg(on_x), kTwoPi * n);
      } else {
        // Step 2 is unaffected by the extra family; it pins c up to pi*N,
        // and the representative is chosen so that b lands in [0, pi).
        if (cls.horizon < 2)
          throw Error("horizon", "decomposition on e2(0) needs horizon >= 2");
        const CVec2 cx2 = frame_coords(cls.basis.x(2), cls.basis.y(2),
                                       apply(thetas[1], cls.basis.x(2)));
        const Complex on_x2 = word.swap ? cx2[1] : cx2[0];
        double c = wrap(n * std::arg(on_x2) / 2.0, kTwoPi * n / 2.0);
        double b = wrap(std::arg(on_x) - c / n, kTwoPi);
        if (b >= 3.14159265358979323846) {
          c = wrap(c + 3.14159265358979323846 * n, kTwoPi * n);
          b = wrap(b - 3.14159265358979323846, kTwoPi);
        }
        word.c = c;
        if (b != 0.0) word.extra_b = b;
      }
      break;
    case SystemType::E3:
    case SystemType::E4:
    case SystemType::E5: {
      word.c = wrap(n * std::arg(on_x), kTwoPi * n);
      const double b = wrap(std::arg(on_y) - std::arg(on_x), kTwoPi);
      if (b != 0.0) word.extra_b = b;
      break;
    }
  }

  const Automorphism rebuilt = make_automorphism(cls, word);
  const double rep = matrix_distance(rebuilt.thetas, thetas);
  if (rep > std::max(tol.eps_structural, 1e-9))
    throw Error("decompose_failed",
                "no generator word reproduces the family, defect " + std::to_string(rep));
  return word;
}

std::vector<Mat2> compose(const std::vector<Mat2>& outer, const std::vector<Mat2>& inner) {
  std::vector<Mat2> out;
  out.reserve(std::min(outer.size(), inner.size()));
  for (size_t i = 0; i < outer.size() && i < inner.size(); ++i)
    out.push_back(mul(outer[i], inner[i]));
  return out;
}

SystemSpec restrict_spec(const SystemSpec& spec, int m) {
  if (m < 1) throw Error("invalid_spec", "restriction factor must be >= 1");
  switch (spec.type) {
    case SystemType::E1:
      return SystemSpec::e1(std::pow(spec.a, m));
    case SystemType::E2:
      return m % 2 == 0 ? SystemSpec::e1(std::pow(spec.a, m))
                        : SystemSpec::e2(std::pow(spec.a, m));
    case SystemType::E3: {
      if (!spec.lambda.has_value())
        throw Error("invalid_spec", "restriction table needs the per-step e3 parameter");
      return SystemSpec::e3(std::pow(*spec.lambda, m));
    }
    case SystemType::E4:
      return SystemSpec::e4();
    case SystemType::E5:
      return SystemSpec::e5();
  }
  throw Error("invalid_spec", "unreachable");
}

CanonicalBasis restrict_basis(SystemType type, const CanonicalBasis& basis, int m) {
  if (m < 1) throw Error("invalid_spec", "restriction factor must be >= 1");
  const int new_size = basis.size() / m;
  if (new_size < 1) throw Error("horizon", "horizon too small for basis restriction");
  CanonicalBasis out;
  out.pairs.reserve(static_cast<size_t>(new_size));
  const double rescale = type == SystemType::E3 ? 1.0 / norm(basis.y(m)) : 1.0;
  for (int k = 1; k <= new_size; ++k)
    out.pairs.emplace_back(basis.x(m * k), Complex(rescale) * basis.y(m * k));
  return out;
}

CanonicalBasis restrict_basis(const Classification& cls, int m) {
  return restrict_basis(cls.spec.type, cls.basis, m);
}

std::vector<Mat2> restrict_automorphism(const std::vector<Mat2>& thetas, int m) {
  if (m < 1) throw Error("invalid_spec", "restriction factor must be >= 1");
  std::vector<Mat2> out;
  out.reserve(thetas.size() / static_cast<size_t>(m));
  for (size_t k = static_cast<size_t>(m) - 1; k < thetas.size(); k += static_cast<size_t>(m))
    out.push_back(thetas[k]);
  return out;
}

Classification derive_restricted(const Classification& cls, int m) {
  Classification out;
  out.spec = restrict_spec(cls.spec, m);
  out.basis = restrict_basis(cls, m);
  out.denominator = cls.denominator;
  out.horizon = cls.horizon / m;
  out.residual = cls.residual;
  return out;
}

std::vector<Mat2> lift_automorphism(const FiniteGridSystem& sys, const Classification& cls,
                                    int m, const std::vector<Mat2>& restricted,
                                    const Tolerance& tol) {
  const FiniteGridSystem sub = restrict_system(sys, m);
  const Classification sub_cls = derive_restricted(cls, m);
  const GeneratorWord down = decompose_automorphism(sub, sub_cls, restricted, tol);

  GeneratorWord up;
  up.c = down.c / static_cast<double>(m);
  up.swap = down.swap;
  if (down.extra_b.has_value()) {
    switch (cls.spec.type) {
      case SystemType::E1:
        up.extra_b = *down.extra_b / static_cast<double>(m);
        break;
      case SystemType::E2:
        if (m % 2 == 0)
          throw Error("no_lift",
                      "the extra phase family downstairs has no preimage over e2 with even m");
        up.extra_b = *down.extra_b;
        break;
      case SystemType::E3:
      case SystemType::E4:
      case SystemType::E5:
        up.extra_b = *down.extra_b;
        break;
    }
  }

  const Automorphism lifted = make_automorphism(cls, up);
  const double reproduce =
      matrix_distance(restrict_automorphism(lifted.thetas, m), restricted);
  if (reproduce > std::max(1e-10, tol.eps_structural))
    throw Error("no_lift", "lifted family does not restrict back, defect " +
                               std::to_string(reproduce));
  return lifted.thetas;
}

CanonicalBasis lift_basis(const FiniteGridSystem& sys, const Classification& cls, int m,
                          const CanonicalBasis& target, const Tolerance& tol) {
  const FiniteGridSystem sub = restrict_system(sys, m);
  const Classification sub_cls = derive_restricted(cls, m);

  std::string desc;
  const double cond = basis_condition_residual(sub, sub_cls.spec, target, &desc);
  if (cond > tol.eps_structural)
    throw Error("invalid_basis",
                "target basis violates '" + desc + "' by " + std::to_string(cond));

  // The automorphism carrying the restricted canonical basis onto the target
  // descends from a word; its lift carries the full basis onto a preimage.
  std::vector<Mat2> down;
  down.reserve(target.pairs.size());
  for (int k = 1; k <= static_cast<int>(target.pairs.size()); ++k) {
    const Mat2 from = Mat2::from_columns(sub_cls.basis.x(k), sub_cls.basis.y(k));
    const Mat2 to = Mat2::from_columns(target.x(k), target.y(k));
    down.push_back(mul(to, inverse(from)));
  }
  const std::vector<Mat2> up = lift_automorphism(sys, cls, m, down, tol);
  return apply_to_basis(up, cls.basis);
}

CanonicalBasis apply_to_basis(const std::vector<Mat2>& thetas, const CanonicalBasis& basis) {
  CanonicalBasis out;
  const size_t n = std::min(thetas.size(), basis.pairs.size());
  out.pairs.reserve(n);
  for (size_t k = 0; k < n; ++k)
    out.pairs.emplace_back(apply(thetas[k], basis.pairs[k].first),
                           apply(thetas[k], basis.pairs[k].second));
  return out;
}

}  // namespace subprod
