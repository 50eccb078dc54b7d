#pragma once
/// Pointwise identities and inequalities, each checked by evaluating the two
/// sides through independent routes: left sides are AD divergences of the
/// nested vector fields, right sides are closed forms in the Jet2 data plus
/// the third-order pieces (gradients of div X and of Lap_p u) that they need.
///
/// A campaign draws one positive field and one point per sample from a
/// counter-based generator, so every identity sees the same sample at the
/// same (seed, index) and any worst case can be regenerated from it.

#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "plap/calculus.hpp"
#include "plap/errors.hpp"
#include "plap/geometry.hpp"
#include "plap/jets_operators.hpp"
#include "plap/reports.hpp"
#include "plap/rng.hpp"
#include "plap/scalar_field.hpp"
#include "plap/vector_fields.hpp"

namespace plap {

/// Sides of a scalar identity at one point.
struct IdentitySides {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Sides of a vector identity, in the calculus frame.
struct VectorSides {
  Vec lhs;
  Vec rhs;
};

// ---------------------------------------------------------------- pointwise

/// div(|g|^{p-2} g) against |g|^{p-2} Lap u + (p-2)|g|^{p-4} Lap_inf u.
template <class C>
IdentitySides decomposition_sides(const C& calc, const typename C::template Scalar<3>& u, double p) {
  const double lhs = divergence_at(calc, u, {VectorFieldKind::U, {p, 0.0, 0.0}});
  return {lhs, p_laplacian(calc.jet2(u), p)};
}

/// nabla_U U against (1/p)|g|^{p-2} A_u(grad |g|^p), grad |g|^p = p |g|^{p-2} H g.
template <class C>
VectorSides ww_sides(const C& calc, const typename C::template Scalar<3>& u, double p) {
  const auto U = vf_U<C, 3>(calc, u, p);
  const Vec lhs = calc.frame(calc.cov(U, U));
  const Jet2 j = calc.jet2(u);
  const double gn = j.grad_norm();
  const Vec grad_fp = p * std::pow(gn, p - 2.0) * (j.hess * j.grad);
  const Vec rhs = std::pow(gn, p - 2.0) / p * (a_matrix(j, p) * grad_fp);
  return {lhs, rhs};
}

/// div(nabla_X X) against tr(X^2) + <grad div X, X> + Ric(X, X).
template <class C>
IdentitySides bochner_X_sides(const C& calc, const typename C::template Scalar<3>& u, const PJetParams& prm) {
  const double lhs = divergence_at(calc, u, {VectorFieldKind::CovXX, prm});
  const Jet2 j = calc.jet2(u);
  const Vec X = field_X(j, prm);
  const Vec grad_divX = calc.frame(calc.template grad<1>(div_X_jet<C, 3>(calc, u, prm)));
  return {lhs, trace_square(endo_X(j, prm)) + grad_divX.dot(X) + calc.ricci(X)};
}

/// (1/p) div(|g|^{p-2} A(grad |g|^p)) against
/// |g|^{2p-4} tr((A H)^2) + <grad Lap_p u, U> + Ric(U, U).
template <class C>
IdentitySides bochner_p_sides(const C& calc, const typename C::template Scalar<3>& u, double p) {
  const double lhs = divergence_at(calc, u, {VectorFieldKind::LinearizedP, {p, 0.0, 0.0}}) / p;
  const Jet2 j = calc.jet2(u);
  const double gn = j.grad_norm();
  const Vec U = std::pow(gn, p - 2.0) * j.grad;
  const Eigen::MatrixXd AH = a_matrix(j, p) * j.hess;
  const Vec grad_lap = calc.frame(calc.template grad<1>(p_laplacian_jet<C, 3>(calc, u, p)));
  return {lhs, std::pow(gn, 2.0 * p - 4.0) * trace_square(AH) + grad_lap.dot(U) + calc.ricci(U)};
}

/// div(u^a (nabla_X X - div X X) - ((p-1)/p) <X, grad u^a> X) against
/// u^a (tr X^2 - (div X)^2 + Ric(X,X)) - ((p-1)(a+2b-1)a/p) u^{a+2b-2}|g|^{2p}
///   - ((2p-1)a/p) u^{a+2b-1} |g|^p Lap_p u.
template <class C>
IdentitySides basic1_sides(const C& calc, const typename C::template Scalar<3>& u, const PJetParams& prm) {
  const double lhs = divergence_at(calc, u, {VectorFieldKind::Combination1, prm});
  const Jet2 j = calc.jet2(u);
  const double p = prm.p, a = prm.a, b = prm.b;
  const double gp = std::pow(j.grad_norm(), p);
  const double dx = div_X(j, prm);
  const double rhs = std::pow(j.u, a) * (trace_square(endo_X(j, prm)) - dx * dx + calc.ricci(field_X(j, prm))) -
                     (p - 1.0) * (a + 2.0 * b - 1.0) * a / p * std::pow(j.u, a + 2.0 * b - 2.0) * gp * gp -
                     (2.0 * p - 1.0) * a / p * std::pow(j.u, a + 2.0 * b - 1.0) * gp * p_laplacian(j, p);
  return {lhs, rhs};
}

// ---------------------------------------------------------------- campaigns

/// Sampling plan for the field identities. General fields live on Euclidean
/// space; curved models are sampled through radial profiles.
struct Campaign {
  ManifoldModel model = ManifoldModel::euclidean(3);
  bool radial = false;
  FieldFamily family = FieldFamily::Mixed;
  std::vector<double> ps{1.5, 2.0, 3.0};
  std::uint64_t samples = 1000;  // per p value
  std::uint64_t seed = 42;
  std::vector<double> a_list{-2.0, -1.0, 0.0, 1.0, 2.0};
  std::vector<double> b_list{-2.0, -1.0, 0.0, 1.0, 2.0};
  std::optional<EuclideanField> field;    // fixed field instead of random ones
  std::optional<RadialProfile> profile;   // fixed profile instead of random ones
  double point_half_width = 1.0;          // general fields: x in [-w, w]^n
  double r_lo = 0.1;                      // radial fields: r in [r_lo, r_hi]
  double r_hi = 3.0;

  std::string describe() const {
    std::ostringstream os;
    os << model.name() << " n=" << model.dim() << (radial ? " radial" : " general " + to_string(family));
    return os.str();
  }
};

/// Per-sample coordinates handed to identity visitors.
struct SampleContext {
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
  double p = 2.0;
  std::string where;  // point description

  void describe(std::ostream& os) const { os << "seed=" << seed << " index=" << index << " p=" << p << " " << where; }
};

namespace detail {

inline std::string format_point(const std::vector<double>& x) {
  std::ostringstream os;
  os.precision(17);
  os << "x=(";
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
  os << ")";
  return os.str();
}

inline bool near_critical(const Jet2& j) { return !(j.grad_norm() >= kEpsGrad * std::max(1.0, std::abs(j.u))); }

inline void validate(const Campaign& c) {
  if (c.ps.empty()) throw InputError("campaign needs at least one p");
  for (double p : c.ps) {
    if (!(p > 1.0)) throw InputError("campaign p values must exceed 1");
  }
  if (!c.radial && c.model.kind() != ModelKind::Euclidean) {
    throw InputError("general (non-radial) fields are only supported on Euclidean space");
  }
  if (c.radial && !(c.r_lo > 0.0 && c.r_lo < c.r_hi)) throw InputError("radial sampling needs 0 < r_lo < r_hi");
}

}  // namespace detail

/// Calls visit(calc, u, ctx) once per sample with a third-order jet of the
/// sampled field at the sampled point. Near-critical points are skipped via
/// on_skip(ctx) and never reach the visitor.
template <class Visit, class Skip>
void for_each_sample(const Campaign& c, Visit&& visit, Skip&& on_skip) {
  detail::validate(c);
  const std::uint64_t stream = stream_id("identity-sample");
  const int n = c.model.dim();
  const double r_hi = std::min(c.r_hi, 0.9 * c.model.r_max());
  for (std::size_t pi = 0; pi < c.ps.size(); ++pi) {
    for (std::uint64_t i = 0; i < c.samples; ++i) {
      SampleContext ctx;
      ctx.seed = c.seed;
      ctx.index = pi * c.samples + i;
      ctx.p = c.ps[pi];
      SampleRng rng(c.seed, stream, ctx.index);
      if (c.radial) {
        const RadialProfile prof = c.profile ? *c.profile : random_profile(rng);
        const double r = rng.uniform(c.r_lo, r_hi);
        std::ostringstream os;
        os.precision(17);
        os << "r=" << r;
        ctx.where = os.str();
        const RadialCalculus calc(c.model, r);
        const auto u = prof.jet3(r);
        if (detail::near_critical(calc.jet2(u))) {
          on_skip(ctx);
          continue;
        }
        visit(calc, u, ctx);
      } else {
        const EuclideanField field = c.field ? *c.field : random_field(c.family, n, rng);
        std::vector<double> x(n);
        for (auto& v : x) v = rng.uniform(-c.point_half_width, c.point_half_width);
        ctx.where = detail::format_point(x);
        dispatch_dim(n, [&]<int N>() {
          const FlatCalculus<N> calc;
          const auto u = field.template jet3<N>(x);
          if (detail::near_critical(calc.jet2(u))) {
            on_skip(ctx);
            return;
          }
          visit(calc, u, ctx);
        });
      }
    }
  }
}

namespace detail {

/// Runs a scalar identity over the campaign; `sides(calc, u, ctx, rng)` may
/// pick per-sample parameters and returns the two sides plus a label.
template <class Sides>
IdentityReport run_scalar_identity(const std::string& id, const Campaign& c, double tol, Sides&& sides) {
  ResidualAccumulator acc(id, tol);
  for_each_sample(
      c,
      [&](const auto& calc, const auto& u, const SampleContext& ctx) {
        try {
          const auto [s, label] = sides(calc, u, ctx);
          acc.add(s.lhs, s.rhs, [&](std::ostream& os) {
            os << c.describe() << " ";
            ctx.describe(os);
            os << label;
          });
        } catch (const SingularityError&) {
          acc.skip();
        }
      },
      [&](const SampleContext&) { acc.skip(); });
  return acc.finish();
}

inline std::string ab_label(const PJetParams& prm, bool with_a) {
  std::ostringstream os;
  if (with_a) os << " a=" << prm.a;
  os << " b=" << prm.b;
  return os.str();
}

template <class T>
const T& cycle(const std::vector<T>& v, std::uint64_t k) {
  if (v.empty()) throw InputError("empty parameter grid");
  return v[k % v.size()];
}

}  // namespace detail

inline IdentityReport check_decomposition(const Campaign& c, double tol = 1e-8) {
  return detail::run_scalar_identity("decomposition", c, tol, [](const auto& calc, const auto& u, const SampleContext& ctx) {
    return std::pair{decomposition_sides(calc, u, ctx.p), std::string()};
  });
}

/// Also checks homogeneity: nabla_U U has degree 2p-2 under u -> c u, so the
/// field scaled by 10 must give 10^{2p-2} times the unscaled left side.
inline IdentityReport check_ww(const Campaign& c, double tol = 1e-10) {
  ResidualAccumulator acc("ww", tol);
  auto add_vec = [&](const Vec& l, const Vec& r, const SampleContext& ctx, const char* label) {
    const double abs = (l - r).norm();
    const double rel = abs / (l.norm() + r.norm() + std::numeric_limits<double>::min());
    acc.add_residual(rel, abs, [&](std::ostream& os) {
      os << c.describe() << " ";
      ctx.describe(os);
      os << label;
    });
  };
  for_each_sample(
      c,
      [&](const auto& calc, const auto& u, const SampleContext& ctx) {
        try {
          const auto s = ww_sides(calc, u, ctx.p);
          add_vec(s.lhs, s.rhs, ctx, "");
          constexpr double kScale = 10.0;
          const auto scaled = ww_sides(calc, u * kScale, ctx.p);
          add_vec(scaled.lhs, std::pow(kScale, 2.0 * ctx.p - 2.0) * s.lhs, ctx, " scaled c=10");
        } catch (const SingularityError&) {
          acc.skip();
        }
      },
      [&](const SampleContext&) { acc.skip(); });
  return acc.finish();
}

/// b cycles through the campaign's b grid by sample index.
inline IdentityReport check_bochner_X(const Campaign& c, double tol = 1e-7) {
  return detail::run_scalar_identity("bochner_X", c, tol, [&](const auto& calc, const auto& u, const SampleContext& ctx) {
    const PJetParams prm{ctx.p, detail::cycle(c.b_list, ctx.index), 0.0};
    return std::pair{bochner_X_sides(calc, u, prm), detail::ab_label(prm, false)};
  });
}

inline IdentityReport check_bochner_p(const Campaign& c, double tol = 1e-7) {
  return detail::run_scalar_identity("bochner_p", c, tol, [](const auto& calc, const auto& u, const SampleContext& ctx) {
    return std::pair{bochner_p_sides(calc, u, ctx.p), std::string()};
  });
}

/// (a, b) cycles through the campaign's product grid by sample index.
inline IdentityReport check_basic1(const Campaign& c, double tol = 1e-7) {
  return detail::run_scalar_identity("basic1", c, tol, [&](const auto& calc, const auto& u, const SampleContext& ctx) {
    const double a = detail::cycle(c.a_list, ctx.index);
    const double b = detail::cycle(c.b_list, ctx.index / std::max<std::size_t>(1, c.a_list.size()));
    const PJetParams prm{ctx.p, b, a};
    return std::pair{basic1_sides(calc, u, prm), detail::ab_label(prm, true)};
  });
}

// ------------------------------------------------------- jet inequalities

/// A random second-order jet in dimension n: u in [0.2, 3], standard normal
/// gradient and symmetric Hessian entries.
inline Jet2 random_jet2(int n, SampleRng& rng) {
  Jet2 j;
  j.u = rng.uniform(0.2, 3.0);
  j.grad = Vec(n);
  for (int i = 0; i < n; ++i) j.grad(i) = rng.normal();
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) a(i, k) = rng.normal();
  }
  j.hess = 0.5 * (a + a.transpose());
  return j;
}

/// Margins of  c_p tr(E^2) >= |E|^2 >= tr(E^2)  for E the traceless part of
/// the endomorphism of X, with c_p = ((p-1)^2 + 1) / (2(p-1)). Both margins
/// are divided by |E|^2.
struct TraceMargins {
  double upper = 0.0;  // (c_p tr(E^2) - |E|^2) / |E|^2
  double lower = 0.0;  // (|E|^2 - tr(E^2)) / |E|^2
  double scale = 0.0;  // |E|^2
};

inline TraceMargins trace_margins(const Jet2& j, const PJetParams& prm) {
  const int n = j.dim();
  const Endomorphism e = traceless(endo_X(j, prm), n);
  const double tr2 = trace_square(e);
  const double fr2 = frobenius_square(e);
  const double cp = ((prm.p - 1.0) * (prm.p - 1.0) + 1.0) / (2.0 * (prm.p - 1.0));
  TraceMargins m;
  m.scale = fr2;
  const double denom = fr2 > 0.0 ? fr2 : 1.0;
  m.upper = (cp * tr2 - fr2) / denom;
  m.lower = (fr2 - tr2) / denom;
  return m;
}

struct TraceInequalityPlan {
  std::uint64_t samples = 100000;  // per (p, b) cell
  std::vector<double> ps{1.2, 1.5, 2.0, 3.0, 5.0};
  std::vector<double> bs{-2.0, 0.0, 1.0};
  std::vector<int> dims{2, 3, 4};  // cycled by sample index
  std::uint64_t seed = 42;
};

/// Both margins fold into one report; samples count jets, not margins.
inline InequalityReport check_trace_inequality(const TraceInequalityPlan& plan, double tol_neg = 1e-10) {
  MarginAccumulator acc("trace_inequality", tol_neg);
  const std::uint64_t stream = stream_id("trace-jet");
  std::uint64_t index = 0;
  for (double p : plan.ps) {
    for (double b : plan.bs) {
      for (std::uint64_t i = 0; i < plan.samples; ++i, ++index) {
        SampleRng rng(plan.seed, stream, index);
        const int n = detail::cycle(plan.dims, index);
        const Jet2 j = random_jet2(n, rng);
        if (detail::near_critical(j)) {
          acc.skip();
          continue;
        }
        const auto m = trace_margins(j, {p, b, 0.0});
        auto describe = [&](std::ostream& os) {
          os << "seed=" << plan.seed << " index=" << index << " n=" << n << " p=" << p << " b=" << b;
        };
        acc.add(std::min(m.upper, m.lower), describe);
      }
    }
  }
  return acc.finish();
}

/// At p = 2 the coefficient c_p is 1 and the endomorphism is symmetric, so
/// both margins of the trace inequality must vanish. Residuals are the margins
/// themselves (already relative to |E|^2). Uses the plan's seed, dims and bs.
inline IdentityReport check_trace_equality_p2(const TraceInequalityPlan& plan, double tol = 1e-12) {
  ResidualAccumulator acc("trace_equality_p2", tol);
  const std::uint64_t stream = stream_id("trace-equality-jet");
  std::uint64_t index = 0;
  for (double b : plan.bs) {
    for (std::uint64_t i = 0; i < plan.samples; ++i, ++index) {
      SampleRng rng(plan.seed, stream, index);
      const int n = detail::cycle(plan.dims, index);
      const Jet2 j = random_jet2(n, rng);
      if (detail::near_critical(j)) {
        acc.skip();
        continue;
      }
      const auto m = trace_margins(j, {2.0, b, 0.0});
      const double res = std::max(std::abs(m.upper), std::abs(m.lower));
      acc.add_residual(res, res * m.scale, [&](std::ostream& os) {
        os << "seed=" << plan.seed << " index=" << index << " n=" << n << " b=" << b;
      });
    }
  }
  return acc.finish();
}

/// Both sides of the refined Kato inequality for W = |grad w|^{p-2} grad w:
/// tr(W^2) >= (1/(n-1)) (Lap_p w)^2 - (2/((n-1)p)) F^{-1} <A_w grad F, W> Lap_p w
///           + (n(p-1)/((n-1)p^2)) F^{-2/p} <A_w grad F, grad F>,  F = |grad w|^p.
struct KatoSides {
  double lhs = 0.0;
  double rhs = 0.0;
  double scale = 0.0;  // |lhs| + sum of |rhs terms|
};

inline KatoSides kato_sides(const Jet2& w, double p) {
  const int n = w.dim();
  const double gn = w.grad_norm();
  const double F = std::pow(gn, p);
  const Vec W = std::pow(gn, p - 2.0) * w.grad;
  const Vec gradF = p * std::pow(gn, p - 2.0) * (w.hess * w.grad);
  const Vec AgF = a_matrix(w, p) * gradF;
  const double lp = p_laplacian(w, p);
  const double lhs = trace_square(endo_X(w, {p, 0.0, 0.0}));
  const double t1 = lp * lp / (n - 1.0);
  const double t2 = -2.0 / ((n - 1.0) * p) / F * AgF.dot(W) * lp;
  const double t3 = n * (p - 1.0) / ((n - 1.0) * p * p) * std::pow(F, -2.0 / p) * AgF.dot(gradF);
  return {lhs, t1 + t2 + t3, std::abs(lhs) + std::abs(t1) + std::abs(t2) + std::abs(t3)};
}

struct KatoPlan {
  std::uint64_t samples = 100000;  // per (n, p) cell
  std::vector<int> dims{2, 3, 4, 6};
  std::vector<double> ps{1.5, 2.0, 3.0};
  std::uint64_t seed = 42;
};

inline InequalityReport check_kato(const KatoPlan& plan, double tol_neg = 1e-10) {
  MarginAccumulator acc("kato", tol_neg);
  const std::uint64_t stream = stream_id("kato-jet");
  std::uint64_t index = 0;
  for (int n : plan.dims) {
    if (n < 2) throw InputError("kato inequality needs n >= 2");
    for (double p : plan.ps) {
      for (std::uint64_t i = 0; i < plan.samples; ++i, ++index) {
        SampleRng rng(plan.seed, stream, index);
        Jet2 w = random_jet2(n, rng);
        w.u = 1.0;  // w need not be positive; the inequality never reads it
        if (detail::near_critical(w)) {
          acc.skip();
          continue;
        }
        const auto s = kato_sides(w, p);
        acc.add((s.lhs - s.rhs) / s.scale, [&](std::ostream& os) {
          os << "seed=" << plan.seed << " index=" << index << " n=" << n << " p=" << p;
        });
      }
    }
  }
  return acc.finish();
}

}  // namespace plap
