#pragma once
/// The closed set of vector fields whose divergences appear on the left-hand
/// sides of the pointwise identities, built from a third-order jet of u and
/// differentiated by the calculus policy.

#include <stdexcept>
#include <string>

#include "plap/calculus.hpp"
#include "plap/errors.hpp"

namespace plap {

enum class VectorFieldKind {
  U,            // |grad u|^{p-2} grad u
  X,            // u^b U
  CovXX,        // nabla_X X
  BochnerX,     // nabla_X X - div X X
  Combination1, // u^a (nabla_X X - div X X) - ((p-1)/p) <X, grad u^a> X
  Combination2, // u^a (nabla_X X - (div X / n) X) - c u^{a-1} <X, grad u> X
  LinearizedP,  // |grad u|^{p-2} A_u(grad |grad u|^p)
  W,            // |grad w|^{p-2} grad w,  w = ln u
  MoserField,   // |grad w|^{p-2} A_w(grad |grad w|^lambda),  w = ln u
};

inline std::string to_string(VectorFieldKind k) {
  switch (k) {
    case VectorFieldKind::U: return "U";
    case VectorFieldKind::X: return "X";
    case VectorFieldKind::CovXX: return "cov_XX";
    case VectorFieldKind::BochnerX: return "bochner_X";
    case VectorFieldKind::Combination1: return "combination_1";
    case VectorFieldKind::Combination2: return "combination_2";
    case VectorFieldKind::LinearizedP: return "linearized_p";
    case VectorFieldKind::W: return "W";
    case VectorFieldKind::MoserField: return "moser";
  }
  return "?";
}

struct VectorFieldSpec {
  VectorFieldKind kind = VectorFieldKind::U;
  PJetParams prm;
  double lambda = 2.0;  // MoserField only
};

/// Coefficient c of the second combination: (n(p-1)a + (n-1)p b) / (n p).
inline double combination2_coefficient(int n, const PJetParams& prm) {
  return (n * (prm.p - 1.0) * prm.a + (n - 1.0) * prm.p * prm.b) / (n * prm.p);
}

/// Value of the selected field at the jet's base point, in the frame.
template <class C>
Vec field_value_at(const C& calc, const typename C::template Scalar<3>& u, const VectorFieldSpec& spec);

/// div of the selected field at the jet's base point.
template <class C>
double divergence_at(const C& calc, const typename C::template Scalar<3>& u, const VectorFieldSpec& spec) {
  const auto& prm = spec.prm;
  const double p = prm.p;
  const int n = calc.dim();
  switch (spec.kind) {
    case VectorFieldKind::U: return calc.div(vf_U<C, 3>(calc, u, p)).value();
    case VectorFieldKind::X: return calc.div(vf_X<C, 3>(calc, u, prm)).value();
    case VectorFieldKind::W: return calc.div(vf_U<C, 3>(calc, log(u), p)).value();
    case VectorFieldKind::LinearizedP: {
      const auto g = calc.template grad<3>(u);
      const auto h = dot(g, g);
      detail::require_grad(h, kEpsGrad, "linearized field");
      const auto grad_hp = calc.template grad<2>(pow(h, 0.5 * p));
      const auto g1 = truncate<1>(g);
      const auto field = pow(h.template truncate<1>(), 0.5 * (p - 2.0)) * apply_A(g1, grad_hp, p);
      return calc.div(field).value();
    }
    case VectorFieldKind::MoserField: {
      const auto w = log(u);
      const auto g = calc.template grad<3>(w);
      const auto h = dot(g, g);
      detail::require_grad(h, kEpsGrad, "moser field");
      const auto grad_hl = calc.template grad<2>(pow(h, 0.5 * spec.lambda));
      const auto g1 = truncate<1>(g);
      const auto field = pow(h.template truncate<1>(), 0.5 * (p - 2.0)) * apply_A(g1, grad_hl, p);
      return calc.div(field).value();
    }
    default: break;
  }
  // Remaining kinds are built from X and nabla_X X.
  const auto X = vf_X<C, 3>(calc, u, prm);
  const auto X1 = truncate<1>(X);
  const auto divX = calc.div(X);
  const auto covXX = calc.cov(X, X);
  switch (spec.kind) {
    case VectorFieldKind::CovXX: return calc.div(covXX).value();
    case VectorFieldKind::BochnerX: return calc.div(covXX - divX * X1).value();
    case VectorFieldKind::Combination1: {
      const auto ua = pow(u, prm.a);
      const auto grad_ua = truncate<1>(calc.template grad<3>(ua));
      const auto field =
          ua.template truncate<1>() * (covXX - divX * X1) - ((p - 1.0) / p) * (dot(X1, grad_ua) * X1);
      return calc.div(field).value();
    }
    case VectorFieldKind::Combination2: {
      const double c = combination2_coefficient(n, prm);
      const auto u1 = u.template truncate<1>();
      const auto grad_u = truncate<1>(calc.template grad<3>(u));
      const auto field = pow(u1, prm.a) * (covXX - (1.0 / n) * (divX * X1)) -
                         c * ((pow(u1, prm.a - 1.0) * dot(X1, grad_u)) * X1);
      return calc.div(field).value();
    }
    default: break;
  }
  throw std::logic_error("divergence_at: unhandled field kind");
}

template <class C>
Vec field_value_at(const C& calc, const typename C::template Scalar<3>& u, const VectorFieldSpec& spec) {
  switch (spec.kind) {
    case VectorFieldKind::U: return calc.frame(vf_U<C, 3>(calc, u, spec.prm.p));
    case VectorFieldKind::X: return calc.frame(vf_X<C, 3>(calc, u, spec.prm));
    case VectorFieldKind::W: return calc.frame(vf_U<C, 3>(calc, log(u), spec.prm.p));
    case VectorFieldKind::CovXX: {
      const auto X = vf_X<C, 3>(calc, u, spec.prm);
      return calc.frame(calc.cov(X, X));
    }
    default: throw CapabilityError("field_value_at: only U, X, W and cov_XX expose values");
  }
}

}  // namespace plap
