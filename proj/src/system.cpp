#include "subprod/system.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace subprod {

const char* type_name(SystemType t) {
  switch (t) {
    case SystemType::E1: return "e1";
    case SystemType::E2: return "e2";
    case SystemType::E3: return "e3";
    case SystemType::E4: return "e4";
    case SystemType::E5: return "e5";
  }
  return "?";
}

SystemType type_from_name(const std::string& s) {
  if (s == "e1" || s == "E1") return SystemType::E1;
  if (s == "e2" || s == "E2") return SystemType::E2;
  if (s == "e3" || s == "E3") return SystemType::E3;
  if (s == "e4" || s == "E4") return SystemType::E4;
  if (s == "e5" || s == "E5") return SystemType::E5;
  throw Error("invalid_spec", "unknown system type '" + s + "'");
}

SystemSpec SystemSpec::e1(double a) {
  SystemSpec s;
  s.type = SystemType::E1;
  s.a = a;
  s.validate();
  return s;
}

SystemSpec SystemSpec::e2(double a) {
  SystemSpec s;
  s.type = SystemType::E2;
  s.a = a;
  s.validate();
  return s;
}

SystemSpec SystemSpec::e3(Complex lambda) {
  SystemSpec s;
  s.type = SystemType::E3;
  s.lambda = lambda;
  s.validate();
  return s;
}

SystemSpec SystemSpec::e3_rational(double c, double b, std::vector<int> eta_choices) {
  SystemSpec s;
  s.type = SystemType::E3;
  s.c = c;
  s.b = b;
  s.eta_choices = std::move(eta_choices);
  s.validate();
  return s;
}

SystemSpec SystemSpec::e4() {
  SystemSpec s;
  s.type = SystemType::E4;
  return s;
}

SystemSpec SystemSpec::e5() {
  SystemSpec s;
  s.type = SystemType::E5;
  return s;
}

void SystemSpec::validate() const {
  switch (type) {
    case SystemType::E1:
    case SystemType::E2:
      if (!(a >= 0.0 && a < 1.0))
        throw Error("invalid_spec", std::string(type_name(type)) + " requires a in [0,1)");
      break;
    case SystemType::E3:
      if (lambda.has_value() && c.has_value())
        throw Error("invalid_spec", "e3 takes either lambda or (c, b), not both");
      if (lambda.has_value()) {
        if (std::abs(*lambda) == 0.0) throw Error("invalid_spec", "e3 requires lambda != 0");
        if (!eta_choices.empty())
          throw Error("invalid_spec", "eta choices apply to the rational e3 flavor only");
      } else if (c.has_value()) {
        if (!(*c > 0.0)) throw Error("invalid_spec", "e3 requires c > 0");
        if (!b.has_value()) throw Error("invalid_spec", "rational e3 requires b");
      } else {
        throw Error("invalid_spec", "e3 requires lambda or (c, b)");
      }
      break;
    case SystemType::E4:
    case SystemType::E5:
      break;
  }
}

namespace {

constexpr double kPi = 3.14159265358979323846;

// Argument of eta at step 1/N, following the refinement chain of root
// choices from real time 1 down to the grid step. Requires N = n! when any
// nonprincipal choice is present; for the principal chain the closed form
// b/N is used directly.
double eta_step_argument(double b, const std::vector<int>& choices, long long N) {
  if (N == 1) return b;
  const bool principal =
      std::all_of(choices.begin(), choices.end(), [](int r) { return r == 0; });
  if (principal) return b / static_cast<double>(N);
  double arg = b;
  long long den = 1;
  for (size_t i = 0; i < choices.size(); ++i) {
    const long long m = static_cast<long long>(i) + 2;
    const int r = choices[i];
    if (r < 0 || r >= m)
      throw Error("invalid_spec", "eta choice at level " + std::to_string(m) +
                                      " must lie in [0," + std::to_string(m) + ")");
    arg = (arg + 2.0 * kPi * r) / static_cast<double>(m);
    den *= m;
    if (den == N) break;
  }
  if (den != N)
    throw Error("invalid_spec",
                "eta choices do not reach denominator " + std::to_string(N) +
                    " along the factorial chain");
  return arg;
}

}  // namespace

Complex lambda_step_of(const SystemSpec& spec, long long N) {
  if (spec.type != SystemType::E3) throw Error("invalid_spec", "lambda_step_of needs an e3 spec");
  if (spec.lambda.has_value()) return *spec.lambda;
  const double mag = std::pow(*spec.c, 1.0 / static_cast<double>(N));
  const double arg = eta_step_argument(*spec.b, spec.eta_choices, N);
  return mag * Complex(std::cos(arg), std::sin(arg));
}

double y_norm_law(double c, double t) {
  if (!(c > 0.0)) throw Error("invalid_spec", "y_norm_law requires c > 0");
  const double u = c - 1.0;
  if (std::abs(u) <= 1e-12) return t;
  const double log_c = std::log1p(u);
  if (std::abs(u) < 1e-6) {
    // 3-term expansion of (c^{2t}-1)/(c^2-1) in L = ln c; cancellation-free.
    return t * (1.0 + (t - 1.0) * log_c +
                ((2.0 * t * t - 3.0 * t + 1.0) / 3.0) * log_c * log_c);
  }
  // expm1 keeps the ratio accurate arbitrarily close to the crossover.
  return std::expm1(2.0 * t * log_c) / std::expm1(2.0 * log_c);
}

double y_norm_law(double c, const Time& t) { return y_norm_law(c, t.value()); }

std::pair<CVec2, CVec2> canonical_pair(const SystemSpec& spec, long long N, int k) {
  const CVec2 x(1.0, 0.0);
  switch (spec.type) {
    case SystemType::E1:
    case SystemType::E2: {
      const double ak = std::pow(spec.a, k);
      return {x, CVec2(ak, std::sqrt(std::max(0.0, 1.0 - ak * ak)))};
    }
    case SystemType::E3: {
      const double r2 = spec.is_rational_e3()
                            ? y_norm_law(*spec.c, Time(k, N))
                            : y_norm_law(std::abs(*spec.lambda), static_cast<double>(k));
      return {x, CVec2(0.0, std::sqrt(r2))};
    }
    case SystemType::E4:
    case SystemType::E5:
      return {x, CVec2(0.0, 1.0)};
  }
  throw Error("invalid_spec", "unreachable");
}

std::pair<CVec4, CVec4> canonical_images(const SystemSpec& spec, long long N, int j,
                                         [[maybe_unused]] int k, const CVec2& xj,
                                         const CVec2& yj, const CVec2& xk, const CVec2& yk) {
  switch (spec.type) {
    case SystemType::E1:
      return {kron(xj, xk), kron(yj, yk)};
    case SystemType::E2:
      if (j % 2 == 0) return {kron(xj, xk), kron(yj, yk)};
      return {kron(xj, yk), kron(yj, xk)};
    case SystemType::E3: {
      const Complex lj = std::pow(lambda_step_of(spec, N), j);
      return {kron(xj, xk), kron(yj, xk) + lj * kron(xj, yk)};
    }
    case SystemType::E4:
      return {kron(xj, xk), kron(yj, xk)};
    case SystemType::E5:
      return {kron(xj, xk), kron(xj, yk)};
  }
  throw Error("invalid_spec", "unreachable");
}

namespace {

// Solve [col1 col2] = [bx by] P^{-1} with P = [x y] (the basis written in
// coordinates), turning basis images into a coordinate matrix.
Isometry42 map_from_basis_images(const CVec2& x, const CVec2& y, const CVec4& bx,
                                 const CVec4& by) {
  const Mat2 p_inv = inverse(Mat2::from_columns(x, y));
  Isometry42 r;
  r.set_column(0, p_inv.at(0, 0) * bx + p_inv.at(1, 0) * by);
  r.set_column(1, p_inv.at(0, 1) * bx + p_inv.at(1, 1) * by);
  return r;
}

}  // namespace

GeneratedSystem generate_canonical(const SystemSpec& spec, long long N, int K) {
  spec.validate();
  if (N < 1) throw Error("invalid_spec", "denominator must be >= 1");
  if (K < 2) throw Error("horizon", "horizon must be >= 2");

  GeneratedSystem out;
  out.system.denominator = N;
  out.system.horizon = K;
  out.basis.pairs.reserve(static_cast<size_t>(K));
  for (int k = 1; k <= K; ++k) out.basis.pairs.push_back(canonical_pair(spec, N, k));

  for (int j = 1; j + 1 <= K; ++j)
    for (int k = 1; j + k <= K; ++k) {
      const auto [bx, by] = canonical_images(spec, N, j, k, out.basis.x(j), out.basis.y(j),
                                             out.basis.x(k), out.basis.y(k));
      const auto& [xs, ys] = out.basis.pairs[static_cast<size_t>(j + k - 1)];
      out.system.maps[{j, k}] = map_from_basis_images(xs, ys, bx, by);
    }
  return out;
}

const Isometry42& FiniteGridSystem::beta(int j, int k) const {
  const auto it = maps.find({j, k});
  if (it == maps.end())
    throw Error("completeness",
                "missing map (" + std::to_string(j) + "," + std::to_string(k) + ")");
  return it->second;
}

bool FiniteGridSystem::complete() const {
  for (int j = 1; j + 1 <= horizon; ++j)
    for (int k = 1; j + k <= horizon; ++k)
      if (!maps.count({j, k})) return false;
  return true;
}

namespace {

using CVec8 = std::array<Complex, 8>;

// (b @ I) w for w on E_{i+j} @ E_k; index order (p,q,r) -> 4p+2q+r.
CVec8 apply_map_tensor_id(const Isometry42& b, const CVec4& w) {
  CVec8 r{};
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q)
      for (int rr = 0; rr < 2; ++rr) {
        Complex s = 0;
        for (int m = 0; m < 2; ++m) s += b.at(2 * p + q, m) * w[2 * m + rr];
        r[static_cast<size_t>(4 * p + 2 * q + rr)] = s;
      }
  return r;
}

CVec8 apply_id_tensor_map(const Isometry42& b, const CVec4& w) {
  CVec8 r{};
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q)
      for (int rr = 0; rr < 2; ++rr) {
        Complex s = 0;
        for (int m = 0; m < 2; ++m) s += b.at(2 * q + rr, m) * w[2 * p + m];
        r[static_cast<size_t>(4 * p + 2 * q + rr)] = s;
      }
  return r;
}

}  // namespace

double check_associativity(const FiniteGridSystem& sys) {
  double worst = 0.0;
  for (int i = 1; i <= sys.horizon; ++i)
    for (int j = 1; j <= sys.horizon; ++j)
      for (int k = 1; i + j + k <= sys.horizon; ++k) {
        const Isometry42& left_outer = sys.beta(i + j, k);
        const Isometry42& left_inner = sys.beta(i, j);
        const Isometry42& right_outer = sys.beta(i, j + k);
        const Isometry42& right_inner = sys.beta(j, k);
        for (int col = 0; col < 2; ++col) {
          const CVec8 lh = apply_map_tensor_id(left_inner, left_outer.column(col));
          const CVec8 rh = apply_id_tensor_map(right_inner, right_outer.column(col));
          double d2 = 0.0;
          for (int t = 0; t < 8; ++t) {
            const Complex d = lh[static_cast<size_t>(t)] - rh[static_cast<size_t>(t)];
            d2 += std::norm(d);
          }
          worst = std::max(worst, std::sqrt(d2));
        }
      }
  return worst;
}

double max_isometry_residual(const FiniteGridSystem& sys) {
  double worst = 0.0;
  for (const auto& [key, map] : sys.maps) worst = std::max(worst, isometry_residual(map));
  return worst;
}

FiniteGridSystem apply_isomorphism(const FiniteGridSystem& sys, const std::vector<Mat2>& thetas) {
  if (static_cast<int>(thetas.size()) < sys.horizon)
    throw Error("invalid_spec", "need one unitary per grid step up to the horizon");
  FiniteGridSystem out;
  out.denominator = sys.denominator;
  out.horizon = sys.horizon;
  for (const auto& [key, map] : sys.maps) {
    const auto [j, k] = key;
    const Mat2 inv = adjoint(thetas[static_cast<size_t>(j + k - 1)]);
    out.maps[key] = conjugate_map(thetas[static_cast<size_t>(j - 1)],
                                  thetas[static_cast<size_t>(k - 1)], map, inv);
  }
  return out;
}

ScrambleResult scramble(const FiniteGridSystem& sys, std::uint64_t seed) {
  UnitarySampler sampler(seed);
  std::vector<Mat2> thetas;
  thetas.reserve(static_cast<size_t>(sys.horizon));
  for (int k = 0; k < sys.horizon; ++k) thetas.push_back(sampler.next());
  return {apply_isomorphism(sys, thetas), std::move(thetas)};
}

FiniteGridSystem restrict_system(const FiniteGridSystem& sys, int m) {
  if (m < 1) throw Error("invalid_spec", "restriction factor must be >= 1");
  if (sys.horizon < 2 * m)
    throw Error("horizon", "horizon " + std::to_string(sys.horizon) +
                               " too small to restrict by " + std::to_string(m));
  FiniteGridSystem out;
  out.denominator = sys.denominator;
  out.horizon = sys.horizon / m;
  for (int j = 1; j + 1 <= out.horizon; ++j)
    for (int k = 1; j + k <= out.horizon; ++k) out.maps[{j, k}] = sys.beta(m * j, m * k);
  return out;
}

double basis_condition_residual(const FiniteGridSystem& sys, const SystemSpec& spec,
                                const CanonicalBasis& basis, std::string* worst_desc) {
  if (basis.size() < sys.horizon)
    throw Error("invalid_spec", "basis does not cover the horizon");
  double worst = 0.0;
  std::string desc = "none";
  const auto account = [&](double value, const std::string& what) {
    if (value > worst) {
      worst = value;
      desc = what;
    }
  };

  // Gram data per step.
  for (int k = 1; k <= sys.horizon; ++k) {
    const CVec2& x = basis.x(k);
    const CVec2& y = basis.y(k);
    const std::string at = " at step " + std::to_string(k);
    account(std::abs(norm(x) - 1.0), "|x| = 1" + at);
    const Complex g = inner(x, y);
    switch (spec.type) {
      case SystemType::E1:
      case SystemType::E2:
        account(std::abs(norm(y) - 1.0), "|y| = 1" + at);
        account(std::abs(g - Complex(std::pow(spec.a, k))), "<x,y> = a^k" + at);
        break;
      case SystemType::E3: {
        account(std::abs(g), "<x,y> = 0" + at);
        // compared at norm level, where the deviation is commensurate with
        // the map-relation residuals even when the norms grow with the step
        const double want = spec.is_rational_e3()
                                ? y_norm_law(*spec.c, Time(k, sys.denominator))
                                : y_norm_law(std::abs(*spec.lambda), static_cast<double>(k));
        account(std::abs(norm(y) - std::sqrt(want)), "|y| law" + at);
        break;
      }
      case SystemType::E4:
      case SystemType::E5:
        account(std::abs(norm(y) - 1.0), "|y| = 1" + at);
        account(std::abs(g), "<x,y> = 0" + at);
        break;
    }
  }

  // Defining map relations on every grid pair.
  for (const auto& [key, map] : sys.maps) {
    const auto [j, k] = key;
    const auto [bx, by] = canonical_images(spec, sys.denominator, j, k, basis.x(j), basis.y(j),
                                           basis.x(k), basis.y(k));
    const CVec4 gx = apply(map, basis.x(j + k));
    const CVec4 gy = apply(map, basis.y(j + k));
    const std::string at =
        " at pair (" + std::to_string(j) + "," + std::to_string(k) + ")";
    account(norm(gx - bx), "map relation for x" + at);
    account(norm(gy - by), "map relation for y" + at);
  }
  if (worst_desc) *worst_desc = desc;
  return worst;
}

double intertwining_residual(const FiniteGridSystem& a, const FiniteGridSystem& b,
                             const std::vector<Mat2>& thetas) {
  if (a.denominator != b.denominator || a.horizon != b.horizon)
    throw Error("invalid_spec", "intertwining requires matching grids");
  if (static_cast<int>(thetas.size()) < a.horizon)
    throw Error("invalid_spec", "need one unitary per grid step up to the horizon");
  double worst = 0.0;
  for (int k = 0; k < a.horizon; ++k)
    worst = std::max(worst, unitary_residual(thetas[static_cast<size_t>(k)]));
  for (const auto& [key, map_a] : a.maps) {
    const auto [j, k] = key;
    const Isometry42& map_b = b.beta(j, k);
    const Mat2& tj = thetas[static_cast<size_t>(j - 1)];
    const Mat2& tk = thetas[static_cast<size_t>(k - 1)];
    const Mat2& ts = thetas[static_cast<size_t>(j + k - 1)];
    for (int col = 0; col < 2; ++col) {
      CVec2 e;
      e[col] = 1.0;
      const CVec4 lhs = apply(map_b, apply(ts, e));
      const CVec4 rhs = kron_apply(tj, tk, apply(map_a, e));
      worst = std::max(worst, norm(lhs - rhs));
    }
  }
  return worst;
}

}  // namespace subprod
