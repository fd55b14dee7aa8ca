#pragma once

#include <array>

#include "binn/geometry.hpp"
#include "binn/material.hpp"

namespace binn {

// 2x2 kernel block U_ij or T_ij evaluated at a (P, Q) pair.
using KernelBlock = std::array<std::array<double, 2>, 2>;

// 2x2 tensors (stress, displacement gradient) share the layout.
using Tensor2 = std::array<std::array<double, 2>, 2>;

// Kelvin displacement fundamental solution:
//   U_ij = [(4 nu - 3) ln(r) d_ij + r_,i r_,j] / (8 pi mu (1 - nu)),
// r = |P - Q|, r_,i the derivative of r with respect to Q (field point).
KernelBlock kelvin_U(Vec2 P, Vec2 Q, const Material& mat);

// Kelvin traction fundamental solution, n the unit outward normal at Q:
//   T_ij = -1/(4 pi (1-nu) r) { dr/dn [(1-2nu) d_ij + 2 r_,i r_,j]
//                               - (1-2nu)(r_,i n_j - r_,j n_i) }.
KernelBlock kelvin_T(Vec2 P, Vec2 Q, Vec2 n, const Material& mat);

// sigma = lambda tr(eps) I + 2 mu eps with eps = sym(grad_u); lambda is the
// mode-appropriate Lame constant.
Tensor2 stress_from_gradient(const Tensor2& grad_u, const Material& mat);

// t_i = sigma_ij n_j.
Vec2 traction(const Tensor2& sigma, Vec2 n);

} // namespace binn
