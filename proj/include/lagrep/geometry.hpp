#pragma once

#include <optional>
#include <span>
#include <string>

#include "lagrep/expr.hpp"
#include "lagrep/linalg.hpp"
#include "lagrep/tensor.hpp"

namespace lagrep {

/// Exact inverse of a metric; MathError when it is singular.
FMatrix invert_metric(const FMatrix& g);

/// Gamma(i, j, k) = Gamma^i_{jk} = 1/2 G^{is} (G_{sj,k} + G_{sk,j} - G_{jk,s}).
Tensor christoffel(const FMatrix& g);

/// Lowered Riemann tensor R(i, j, k, l) = G_{im} R^m_{jkl} with
/// R^i_{jkl} = Gamma^i_{jl,k} - Gamma^i_{jk,l} + Gamma^i_{kp} Gamma^p_{jl} - Gamma^i_{lp} Gamma^p_{jk}.
/// Constant curvature k means R_{ijkl} = k (G_{ik} G_{jl} - G_{il} G_{jk}),
/// so the round sphere has k > 0.
Tensor riemann(const FMatrix& g);

/// R_{ijkl} = -R_{jikl} = -R_{ijlk} = R_{klij}.
bool riemann_symmetries(const Tensor& r);
/// R_{ijkl} + R_{iklj} + R_{iljk} = 0.
bool first_bianchi(const Tensor& r);
/// nabla_m R_{ijkl} + nabla_k R_{ijlm} + nabla_l R_{ijmk} = 0.
bool second_bianchi(const FMatrix& g, const Tensor& r);

struct CurvatureReport {
  /// Set when the metric has constant sectional curvature.
  std::optional<Rational> kappa;
  bool symmetries = false;
  bool bianchi = false;
  /// First component violating the constant-curvature form, if any.
  std::string residual;
};
CurvatureReport constant_curvature_test(const FMatrix& g, const Names& names);

/// Signature of the metric evaluated at a rational point.
Signature signature_at(const FMatrix& g, std::span<const Rational> point);

}  // namespace lagrep
