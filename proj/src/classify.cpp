#include "subprod/classify.hpp"

#include <algorithm>
#include <cmath>

namespace subprod {

namespace {

// Largest-magnitude component made real positive; fixes the free phase.
CVec2 phase_fixed(const CVec2& v) {
  const int i = std::abs(v[0]) >= std::abs(v[1]) ? 0 : 1;
  const double m = std::abs(v[i]);
  if (m == 0.0) return v;
  return (std::conj(v[i]) / m) * v;
}

CVec2 orthogonal_unit(const CVec2& x) {
  return phase_fixed(CVec2(-std::conj(x[1]), std::conj(x[0])));
}

struct Hermitian2 {
  double p = 0, r = 0;
  Complex q = 0;  // [[p, q], [conj(q), r]]

  void accumulate(const CVec2& v) {
    p += std::norm(v[0]);
    r += std::norm(v[1]);
    q += v[0] * std::conj(v[1]);
  }
  double min_eigen() const {
    const double tr = p + r;
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * (p * r - std::norm(q))));
    return 0.5 * (tr - disc);
  }
  double max_eigen() const {
    const double tr = p + r;
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * (p * r - std::norm(q))));
    return 0.5 * (tr + disc);
  }
  CVec2 dominant_eigenvector() const {
    const double lam = max_eigen();
    // Row with the larger residual against lam*I gives the stabler kernel.
    const CVec2 cand1(q, Complex(lam - p));
    const CVec2 cand2(Complex(lam - r), std::conj(q));
    const CVec2& c = norm(cand1) >= norm(cand2) ? cand1 : cand2;
    return phase_fixed(normalized(c));
  }
};

Complex mixed_det(const CVec4& a, const CVec4& b) {
  return a[0] * b[3] + b[0] * a[3] - a[1] * b[2] - b[1] * a[2];
}

}  // namespace

double factor_split(const CVec4& w, CVec2& u, CVec2& v) {
  const CVec2 row0(w[0], w[1]);
  const CVec2 row1(w[2], w[3]);
  v = normalized(norm(row0) >= norm(row1) ? row0 : row1);
  u = CVec2(inner(row0, v), inner(row1, v));
  const double res = norm(w - kron(u, v));
  u = normalized(u);
  return res;
}

ProductStructure product_directions(const Isometry42& beta11, const Tolerance& tol) {
  if (isometry_residual(beta11) > tol.eps_structural)
    throw Error("isometry", "product_directions requires an isometric input map");

  const CVec4 c0 = beta11.column(0);
  const CVec4 c1 = beta11.column(1);
  // det over the range is a binary quadratic in the column coordinates.
  const Complex d0 = reshape_det(c0);
  const Complex d1 = reshape_det(c1);
  const Complex d01 = mixed_det(c0, c1);
  const double scale = std::max({std::abs(d0), std::abs(d01), std::abs(d1)});

  ProductStructure out;
  if (scale <= tol.eps_structural) {
    // Identically zero form: the whole range consists of product vectors,
    // sharing either the first or the second tensor factor.
    Hermitian2 col_space, row_space;
    for (const CVec4* w : {&c0, &c1}) {
      col_space.accumulate(CVec2((*w)[0], (*w)[2]));  // columns of reshape(w)
      col_space.accumulate(CVec2((*w)[1], (*w)[3]));
      row_space.accumulate(CVec2((*w)[0], (*w)[1]));  // rows of reshape(w)
      row_space.accumulate(CVec2((*w)[2], (*w)[3]));
    }
    const double col_flat = col_space.min_eigen() / std::max(1e-300, col_space.max_eigen());
    const double row_flat = row_space.min_eigen() / std::max(1e-300, row_space.max_eigen());
    out.discriminant_margin = 0.0;
    if (col_flat <= row_flat) {
      out.kind = ProductStructure::Kind::FirstFactorFixed;
      out.fixed = col_space.dominant_eigenvector();
    } else {
      out.kind = ProductStructure::Kind::SecondFactorFixed;
      out.fixed = row_space.dominant_eigenvector();
    }
    return out;
  }

  const Complex disc = d01 * d01 - 4.0 * d0 * d1;
  out.discriminant_margin = std::abs(disc) / (scale * scale);
  if (out.discriminant_margin <= tol.eps_structural) {
    out.kind = ProductStructure::Kind::DoubleRoot;
    const CVec4 dir = std::abs(d0) >= std::abs(d1) ? (-d01 * c0 + (2.0 * d0) * c1)
                                                   : ((2.0 * d1) * c0 - d01 * c1);
    out.dir1 = normalized(dir);
    return out;
  }

  out.kind = ProductStructure::Kind::GenericPair;
  const Complex s = std::sqrt(disc);
  const Complex qa = -(d01 + s);
  const Complex qb = -(d01 - s);
  const Complex q = 0.5 * (std::abs(qa) >= std::abs(qb) ? qa : qb);
  out.dir1 = normalized(q * c0 + d0 * c1);
  out.dir2 = normalized(d1 * c0 + q * c1);
  return out;
}

Classification classify(const FiniteGridSystem& sys, const Tolerance& tol) {
  if (sys.horizon < 2) throw Error("horizon", "classification requires horizon >= 2");
  if (!sys.complete()) throw Error("completeness", "system is missing grid maps");
  {
    const double iso = max_isometry_residual(sys);
    if (iso > tol.eps_structural)
      throw Error("isometry", "map fails the isometry requirement, residual " +
                                  std::to_string(iso));
    const double assoc = check_associativity(sys);
    if (assoc > tol.eps_structural)
      throw Error("associativity",
                  "maps fail the coassociativity diagram, residual " + std::to_string(assoc));
  }

  const ProductStructure ps = product_directions(sys.beta(1, 1), tol);

  Classification cls;
  cls.denominator = sys.denominator;
  cls.horizon = sys.horizon;
  cls.discriminant_margin = ps.discriminant_margin;
  cls.small_a_threshold = tol.eps_structural;

  CVec2 x1, y1;
  switch (ps.kind) {
    case ProductStructure::Kind::FirstFactorFixed: {
      cls.spec = SystemSpec::e5();
      x1 = phase_fixed(ps.fixed);
      y1 = orthogonal_unit(x1);
      break;
    }
    case ProductStructure::Kind::SecondFactorFixed: {
      cls.spec = SystemSpec::e4();
      x1 = phase_fixed(ps.fixed);
      y1 = orthogonal_unit(x1);
      break;
    }
    case ProductStructure::Kind::DoubleRoot: {
      CVec2 u, v;
      factor_split(ps.dir1, u, v);
      x1 = phase_fixed(u);
      y1 = orthogonal_unit(x1);
      // Coefficient ratio against the orthogonal frame; invariant under the
      // phase freedom of both recovered vectors.
      const CVec4 xx = kron(x1, x1);
      const CVec4 c0 = sys.beta(1, 1).column(0);
      const CVec4 c1 = sys.beta(1, 1).column(1);
      const CVec4 r0 = c0 - inner(c0, xx) * xx;
      const CVec4 r1 = c1 - inner(c1, xx) * xx;
      const CVec4& w = norm(r0) >= norm(r1) ? c0 : c1;
      const Complex a_coef = inner(w, kron(y1, x1));
      const Complex b_coef = inner(w, kron(x1, y1));
      if (std::abs(a_coef) <= tol.eps_structural)
        throw Error("inconsistent", "coefficient extraction failed: range has no y@x part");
      cls.spec = SystemSpec::e3(b_coef / a_coef);
      break;
    }
    case ProductStructure::Kind::GenericPair: {
      CVec2 u1, v1, u2, v2;
      factor_split(ps.dir1, u1, v1);
      factor_split(ps.dir2, u2, v2);
      const bool col1 = 1.0 - std::abs(inner(u1, v1)) <= tol.eps_structural;
      const bool col2 = 1.0 - std::abs(inner(u2, v2)) <= tol.eps_structural;
      if (col1 != col2)
        throw Error("inconsistent",
                    "product directions disagree on factor collinearity");
      x1 = phase_fixed(u1);
      CVec2 ycand = col1 ? u2 : v1;  // second distinguished line / second factor
      const Complex g = inner(x1, ycand);
      cls.inner_xy_magnitude = std::abs(g);
      if (std::abs(g) > tol.eps_structural)
        ycand = (g / std::abs(g)) * ycand;
      else
        ycand = phase_fixed(ycand);
      y1 = ycand;
      const double a = std::abs(g) > tol.eps_structural ? std::abs(g) : 0.0;
      cls.spec = col1 ? SystemSpec::e1(a) : SystemSpec::e2(a);
      break;
    }
  }

  // Propagate the recovered pair to every grid step through the maps.
  cls.basis.pairs.resize(static_cast<size_t>(sys.horizon));
  cls.basis.pairs[0] = {x1, y1};
  for (int k = 2; k <= sys.horizon; ++k) {
    const CVec2& xp = cls.basis.x(k - 1);
    const CVec2& yp = cls.basis.y(k - 1);
    const Isometry42& b = sys.beta(1, k - 1);
    CVec4 img_x, img_y;
    switch (cls.spec.type) {
      case SystemType::E1:
        img_x = kron(x1, xp);
        img_y = kron(y1, yp);
        break;
      case SystemType::E2:  // step one is odd
        img_x = kron(x1, yp);
        img_y = kron(y1, xp);
        break;
      case SystemType::E3:
        img_x = kron(x1, xp);
        img_y = kron(y1, xp) + (*cls.spec.lambda) * kron(x1, yp);
        break;
      case SystemType::E4:
        img_x = kron(x1, xp);
        img_y = kron(y1, xp);
        break;
      case SystemType::E5:
        img_x = kron(x1, xp);
        img_y = kron(x1, yp);
        break;
    }
    cls.basis.pairs[static_cast<size_t>(k - 1)] = {adjoint_apply(b, img_x),
                                                   adjoint_apply(b, img_y)};
  }

  cls.inner_xy_magnitude = std::abs(inner(x1, y1));

  std::string worst_desc;
  cls.residual = basis_condition_residual(sys, cls.spec, cls.basis, &worst_desc);
  if (cls.residual > tol.eps_structural)
    throw Error("inconsistent",
                "recovered basis violates '" + worst_desc + "' by " +
                    std::to_string(cls.residual) + " (discriminant margin " +
                    std::to_string(cls.discriminant_margin) + ")");

  if (cls.spec.type == SystemType::E3 && sys.denominator > 1) {
    const Complex lam = *cls.spec.lambda;
    cls.rational_c = std::pow(std::abs(lam), static_cast<double>(sys.denominator));
    const Complex eta_step = lam / std::abs(lam);
    Complex cur = 1.0;
    cls.eta.reserve(static_cast<size_t>(sys.horizon));
    for (int k = 1; k <= sys.horizon; ++k) {
      cur *= eta_step;
      cls.eta.push_back(cur);
    }
  }
  return cls;
}

IsomorphismResult decide_isomorphic(const FiniteGridSystem& a, const FiniteGridSystem& b,
                                    const Tolerance& tol) {
  if (a.denominator != b.denominator || a.horizon != b.horizon)
    throw Error("invalid_spec", "isomorphism requires matching grids");

  const Classification ca = classify(a, tol);
  const Classification cb = classify(b, tol);

  IsomorphismResult out;
  if (ca.spec.type != cb.spec.type) {
    out.reason = std::string("types differ: ") + type_name(ca.spec.type) + " vs " +
                 type_name(cb.spec.type);
    return out;
  }
  switch (ca.spec.type) {
    case SystemType::E1:
    case SystemType::E2:
      if (std::abs(ca.spec.a - cb.spec.a) > tol.eps_structural) {
        out.reason = "parameter a differs: " + std::to_string(ca.spec.a) + " vs " +
                     std::to_string(cb.spec.a);
        return out;
      }
      break;
    case SystemType::E3:
      if (std::abs(*ca.spec.lambda - *cb.spec.lambda) >
          tol.eps_structural * (1.0 + std::abs(*ca.spec.lambda))) {
        out.reason = "parameter lambda differs";
        return out;
      }
      break;
    default:
      break;
  }

  out.thetas.reserve(static_cast<size_t>(a.horizon));
  for (int k = 1; k <= a.horizon; ++k) {
    const Mat2 pa = Mat2::from_columns(ca.basis.x(k), ca.basis.y(k));
    const Mat2 pb = Mat2::from_columns(cb.basis.x(k), cb.basis.y(k));
    out.thetas.push_back(mul(pb, inverse(pa)));
  }
  out.residual = intertwining_residual(a, b, out.thetas);
  out.isomorphic = true;
  return out;
}

}  // namespace subprod
