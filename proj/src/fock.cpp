#include "subprod/fock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace subprod {

namespace {

// Integral of rho^s e^{i delta s} over (lo, hi); series branch keeps full
// precision through the degenerate direction rho -> 1, delta -> 0.
Complex exp_integral(double rho, double delta, double lo, double hi) {
  const Complex mu(std::log(rho), delta);
  const double len = hi - lo;
  const Complex mu_len = mu * len;
  const Complex head = std::exp(mu * lo);
  if (std::abs(mu_len) < 1e-4) {
    const Complex tail =
        len * (1.0 + mu_len * (0.5 + mu_len * (1.0 / 6.0 + mu_len * (1.0 / 24.0))));
    return head * tail;
  }
  return head * (std::exp(mu_len) - 1.0) / mu;
}

}  // namespace

ExpSegment ExpSegment::zero(const Rational& len) {
  ExpSegment f;
  f.length = len;
  return f;
}

ExpSegment ExpSegment::single(const Rational& len, const ExpTerm& term) {
  ExpSegment f;
  f.length = len;
  f.pieces.push_back({Rational(0, 1), len, {term}});
  return f;
}

bool ExpSegment::is_zero() const {
  for (const auto& p : pieces)
    for (const auto& t : p.terms)
      if (std::abs(t.amp) != 0.0) return false;
  return true;
}

Complex ExpSegment::eval(double s) const {
  Complex v = 0.0;
  for (const auto& p : pieces) {
    if (s < p.lo.value() || s > p.hi.value()) continue;
    for (const auto& t : p.terms)
      v += t.amp * std::pow(t.growth, s) * Complex(std::cos(t.freq * s), std::sin(t.freq * s));
    break;
  }
  return v;
}

ExpSegment ExpSegment::restricted(const Rational& s) const {
  if (s > length) throw Error("off_grid", "restriction beyond the segment domain");
  ExpSegment f;
  f.length = s;
  for (const auto& p : pieces) {
    if (!(p.lo < s)) continue;
    f.pieces.push_back({p.lo, rat_min(p.hi, s), p.terms});
  }
  return f;
}

ExpSegment ExpSegment::shifted_tail(const Rational& s) const {
  if (s > length) throw Error("off_grid", "shift beyond the segment domain");
  ExpSegment f;
  f.length = length - s;
  const double sv = s.value();
  for (const auto& p : pieces) {
    if (!(s < p.hi)) continue;
    SegPiece q;
    q.lo = rat_max(p.lo, s) - s;
    q.hi = p.hi - s;
    q.terms.reserve(p.terms.size());
    for (const auto& t : p.terms) {
      const Complex shift_amp =
          std::pow(t.growth, sv) * Complex(std::cos(t.freq * sv), std::sin(t.freq * sv));
      q.terms.push_back({t.amp * shift_amp, t.growth, t.freq});
    }
    f.pieces.push_back(std::move(q));
  }
  return f;
}

ExpSegment ExpSegment::scaled(Complex z) const {
  ExpSegment f = *this;
  for (auto& p : f.pieces)
    for (auto& t : p.terms) t.amp *= z;
  return f;
}

ExpSegment ExpSegment::plus(const ExpSegment& other) const {
  if (!(length == other.length))
    throw Error("invalid_spec", "segment addition needs equal domains");
  // Refine to the common breakpoint grid and concatenate term lists.
  std::vector<Rational> cuts;
  for (const auto& p : pieces) {
    cuts.push_back(p.lo);
    cuts.push_back(p.hi);
  }
  for (const auto& p : other.pieces) {
    cuts.push_back(p.lo);
    cuts.push_back(p.hi);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  ExpSegment f;
  f.length = length;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    SegPiece q;
    q.lo = cuts[i];
    q.hi = cuts[i + 1];
    for (const ExpSegment* src : {this, &other})
      for (const auto& p : src->pieces)
        if (!(q.lo < p.lo) && !(p.hi < q.hi))
          q.terms.insert(q.terms.end(), p.terms.begin(), p.terms.end());
    if (!q.terms.empty()) f.pieces.push_back(std::move(q));
  }
  return f;
}

ExpSegment ExpSegment::compacted() const {
  ExpSegment f;
  f.length = length;
  for (const auto& p : pieces) {
    SegPiece q;
    q.lo = p.lo;
    q.hi = p.hi;
    for (const auto& t : p.terms) {
      bool merged = false;
      for (auto& u : q.terms) {
        const bool same = std::abs(u.growth - t.growth) <= 1e-12 * (1.0 + std::abs(u.growth)) &&
                          std::abs(u.freq - t.freq) <= 1e-12 * (1.0 + std::abs(u.freq));
        if (same) {
          u.amp += t.amp;
          merged = true;
          break;
        }
      }
      if (!merged) q.terms.push_back(t);
    }
    if (!q.terms.empty()) f.pieces.push_back(std::move(q));
  }
  return f;
}

Complex inner(const ExpSegment& f, const ExpSegment& g) {
  if (!(f.length == g.length))
    throw Error("invalid_spec", "segment inner product needs equal domains");
  Complex total = 0.0;
  for (const auto& pf : f.pieces)
    for (const auto& pg : g.pieces) {
      const Rational lo = rat_max(pf.lo, pg.lo);
      const Rational hi = rat_min(pf.hi, pg.hi);
      if (!(lo < hi)) continue;
      for (const auto& tf : pf.terms)
        for (const auto& tg : pg.terms)
          total += tf.amp * std::conj(tg.amp) *
                   exp_integral(tf.growth * tg.growth, tf.freq - tg.freq, lo.value(),
                                hi.value());
    }
  return total;
}

double norm_sq(const ExpSegment& f) { return std::max(0.0, std::real(inner(f, f))); }

FockVector01 FockVector01::vac(const Rational& len) {
  return {Complex(1.0), ExpSegment::zero(len)};
}

FockVector01 FockVector01::particle(const ExpSegment& f) { return {Complex(0.0), f}; }

Complex inner(const FockVector01& a, const FockVector01& b) {
  return a.vacuum * std::conj(b.vacuum) + inner(a.one, b.one);
}

double norm_sq(const FockVector01& a) { return std::max(0.0, std::real(inner(a, a))); }

FockVector01 scaled(const FockVector01& a, Complex z) {
  return {a.vacuum * z, a.one.scaled(z)};
}

FockVector01 plus(const FockVector01& a, const FockVector01& b) {
  return {a.vacuum + b.vacuum, a.one.plus(b.one)};
}

ExpVectorCombo ExpVectorCombo::exponential(Complex coeff, const ExpSegment& arg) {
  ExpVectorCombo c;
  c.length = arg.length;
  c.terms.push_back({coeff, arg});
  return c;
}

ExpVectorCombo scaled(const ExpVectorCombo& a, Complex z) {
  ExpVectorCombo c = a;
  for (auto& t : c.terms) t.coeff *= z;
  return c;
}

ExpVectorCombo plus(const ExpVectorCombo& a, const ExpVectorCombo& b) {
  if (!(a.length == b.length))
    throw Error("invalid_spec", "combo addition needs equal domains");
  ExpVectorCombo c = a;
  c.terms.insert(c.terms.end(), b.terms.begin(), b.terms.end());
  return c;
}

Complex inner(const ExpVectorCombo& a, const ExpVectorCombo& b) {
  Complex total = 0.0;
  for (const auto& ta : a.terms)
    for (const auto& tb : b.terms)
      total += ta.coeff * std::conj(tb.coeff) * std::exp(inner(ta.arg, tb.arg));
  return total;
}

double kernel_gram_min_pivot(const std::vector<ExpSegment>& args) {
  const size_t n = args.size();
  std::vector<Complex> g(n * n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) g[i * n + j] = std::exp(inner(args[i], args[j]));

  // LDL* elimination; the running diagonal exposes any indefiniteness.
  std::vector<Complex> l(n * n, Complex(0.0));
  std::vector<double> d(n, 0.0);
  double min_pivot = n == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < n; ++i) {
    Complex acc = g[i * n + i];
    for (size_t k = 0; k < i; ++k) acc -= std::norm(l[i * n + k]) * d[k];
    d[i] = std::real(acc);
    min_pivot = std::min(min_pivot, d[i]);
    for (size_t j = i + 1; j < n; ++j) {
      Complex s = g[j * n + i];
      for (size_t k = 0; k < i; ++k) s -= l[j * n + k] * std::conj(l[i * n + k]) * d[k];
      l[j * n + i] = std::abs(d[i]) < 1e-300 ? Complex(0.0) : s / d[i];
    }
  }
  return min_pivot;
}

double norm_sq(const ExpVectorCombo& a, double psd_slack) {
  std::vector<ExpSegment> args;
  args.reserve(a.terms.size());
  for (const auto& t : a.terms) args.push_back(t.arg);
  double scale = 1.0;
  for (const auto& t : a.terms) scale = std::max(scale, std::exp(norm_sq(t.arg)));
  const double pivot = kernel_gram_min_pivot(args);
  if (pivot < -psd_slack * scale)
    throw Error("kernel", "exponential-vector Gram is not positive semidefinite, pivot " +
                              std::to_string(pivot));
  return std::max(0.0, std::real(inner(a, a)));
}

}  // namespace subprod
