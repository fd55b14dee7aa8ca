#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "binn/kernels.hpp"
#include "binn/mesh.hpp"

namespace binn {

enum class Activation { Tanh, Swish, Sinusoid, Sigmoid, Softplus, Arctan, Relu };

Activation activation_from_name(const std::string& name);
std::string activation_name(Activation a);

// Displacement: two outputs (u1, u2); tractions follow from the input
// Jacobian and the constitutive law. DirectTraction: four outputs
// (u1, u2, t1, t2) with tractions unconstrained by the constitutive law.
enum class OutputMode { Displacement, DirectTraction };

// Fully connected network mapping boundary coordinates to boundary fields.
// Inputs are affinely normalized, outputs scaled per channel; both maps are
// part of the model and are stored in checkpoints.
struct Network {
    std::vector<int> widths; // [2, M_1, ..., M_L, out]
    std::vector<Eigen::MatrixXd> weights; // weights[l]: widths[l+1] x widths[l]
    std::vector<Eigen::VectorXd> biases;
    Activation activation = Activation::Tanh;
    OutputMode mode = OutputMode::Displacement;
    Vec2 in_shift{0.0, 0.0};
    Vec2 in_scale{1.0, 1.0};
    Eigen::VectorXd out_scale; // size = widths.back()

    int layer_count() const { return static_cast<int>(weights.size()); }
    int output_count() const { return widths.back(); }
    int param_count() const;

    // Deterministic flat parameter view: per layer, row-major weights then
    // biases. Round-trips bit-exactly.
    Eigen::VectorXd flatten_params() const;
    void unflatten_params(const Eigen::VectorXd& p);
};

// Glorot-uniform weights and zero biases. Randomness comes from mt19937_64
// seeded with `seed`; uniforms are built as (x >> 11) * 2^-53, so identical
// seeds give bit-identical parameters on any IEEE-754 platform.
Network init_network(const std::vector<int>& widths, Activation activation, std::uint64_t seed,
                     OutputMode mode = OutputMode::Displacement);

// Cached state of one forward + input-tangent sweep at a point.
struct ForwardEval {
    Eigen::VectorXd y;      // outputs, physical scale
    Eigen::MatrixXd dy_dx;  // out x 2 Jacobian wrt physical coordinates
    std::vector<Eigen::VectorXd> act;  // act[l]: layer inputs (act[0] = normalized x)
    std::vector<Eigen::VectorXd> pre;  // pre[l]: pre-activations of hidden layer l
    std::vector<Eigen::MatrixXd> tact; // d act[l] / d x_norm
    std::vector<Eigen::MatrixXd> tpre; // d pre[l] / d x_norm
};

ForwardEval forward_eval(const Network& net, Vec2 x);

Eigen::VectorXd forward(const Network& net, Vec2 x);

// Exact d(outputs)/d(x1, x2) by forward-mode tangents (never finite
// differences).
Eigen::MatrixXd input_jacobian(const Network& net, Vec2 x);

// Traction at a collocation node. Displacement mode: constitutive closure of
// the input Jacobian; DirectTraction mode: reads outputs 3-4.
Vec2 boundary_traction(const Network& net, const CollocationNode& node, const Material& mat);

// Reverse sweep: accumulate into `grad` (layout of flatten_params) the
// gradient of the scalar  g = ybar . y  +  sum_ij Jbar_ij dy_dx_ij,
// with ybar/Jbar given in physical scale. This is the building block for
// exact loss gradients including the parameter-derivative of the input
// Jacobian (the traction path).
void accumulate_param_gradient(const Network& net, const ForwardEval& eval,
                               const Eigen::VectorXd& ybar, const Eigen::MatrixXd& Jbar,
                               Eigen::VectorXd& grad);

} // namespace binn
