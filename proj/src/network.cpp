#include "binn/network.hpp"

#include <cmath>
#include <random>

#include "binn/errors.hpp"

namespace binn {

Activation activation_from_name(const std::string& name) {
    if (name == "tanh") return Activation::Tanh;
    if (name == "swish") return Activation::Swish;
    if (name == "sinusoid" || name == "sin") return Activation::Sinusoid;
    if (name == "sigmoid") return Activation::Sigmoid;
    if (name == "softplus") return Activation::Softplus;
    if (name == "arctan") return Activation::Arctan;
    if (name == "relu") return Activation::Relu;
    throw ConfigError("unknown activation '" + name + "'");
}

std::string activation_name(Activation a) {
    switch (a) {
        case Activation::Tanh: return "tanh";
        case Activation::Swish: return "swish";
        case Activation::Sinusoid: return "sinusoid";
        case Activation::Sigmoid: return "sigmoid";
        case Activation::Softplus: return "softplus";
        case Activation::Arctan: return "arctan";
        case Activation::Relu: return "relu";
    }
    return "?";
}

namespace {

// sigma, sigma', sigma'' at z.
struct ActEval {
    double v, d1, d2;
};

ActEval eval_activation(Activation a, double z) {
    switch (a) {
        case Activation::Tanh: {
            double t = std::tanh(z);
            double d1 = 1.0 - t * t;
            return {t, d1, -2.0 * t * d1};
        }
        case Activation::Swish: {
            double s = 1.0 / (1.0 + std::exp(-z));
            double s1 = s * (1.0 - s);
            double s2 = s1 * (1.0 - 2.0 * s);
            return {z * s, s + z * s1, 2.0 * s1 + z * s2};
        }
        case Activation::Sinusoid:
            return {std::sin(z), std::cos(z), -std::sin(z)};
        case Activation::Sigmoid: {
            double s = 1.0 / (1.0 + std::exp(-z));
            double s1 = s * (1.0 - s);
            return {s, s1, s1 * (1.0 - 2.0 * s)};
        }
        case Activation::Softplus: {
            double s = 1.0 / (1.0 + std::exp(-z));
            double v = z > 30.0 ? z : std::log1p(std::exp(z));
            return {v, s, s * (1.0 - s)};
        }
        case Activation::Arctan: {
            double q = 1.0 + z * z;
            return {std::atan(z), 1.0 / q, -2.0 * z / (q * q)};
        }
        case Activation::Relu:
            return {z > 0.0 ? z : 0.0, z > 0.0 ? 1.0 : 0.0, 0.0};
    }
    return {0.0, 0.0, 0.0};
}

} // namespace

int Network::param_count() const {
    int n = 0;
    for (int l = 0; l < layer_count(); ++l)
        n += static_cast<int>(weights[l].size() + biases[l].size());
    return n;
}

Eigen::VectorXd Network::flatten_params() const {
    Eigen::VectorXd p(param_count());
    int at = 0;
    for (int l = 0; l < layer_count(); ++l) {
        for (int i = 0; i < weights[l].rows(); ++i)
            for (int j = 0; j < weights[l].cols(); ++j) p[at++] = weights[l](i, j);
        for (int i = 0; i < biases[l].size(); ++i) p[at++] = biases[l][i];
    }
    return p;
}

void Network::unflatten_params(const Eigen::VectorXd& p) {
    if (p.size() != param_count()) throw ConfigError("unflatten_params: size mismatch");
    int at = 0;
    for (int l = 0; l < layer_count(); ++l) {
        for (int i = 0; i < weights[l].rows(); ++i)
            for (int j = 0; j < weights[l].cols(); ++j) weights[l](i, j) = p[at++];
        for (int i = 0; i < biases[l].size(); ++i) biases[l][i] = p[at++];
    }
}

Network init_network(const std::vector<int>& widths, Activation activation, std::uint64_t seed,
                     OutputMode mode) {
    if (widths.size() < 2) throw ConfigError("init_network: need input and output widths");
    if (widths.front() != 2) throw ConfigError("init_network: input width must be 2");
    int out = widths.back();
    if ((mode == OutputMode::Displacement && out != 2) ||
        (mode == OutputMode::DirectTraction && out != 4))
        throw ConfigError("init_network: output width must be 2 (displacement) or 4 (direct traction)");
    for (int w : widths)
        if (w < 1) throw ConfigError("init_network: widths must be positive");
    if (activation == Activation::Relu && mode == OutputMode::Displacement)
        throw ConfigError("init_network: relu lacks the second derivative needed for "
                          "autodiff tractions; use direct-traction mode");

    Network net;
    net.widths = widths;
    net.activation = activation;
    net.mode = mode;
    net.out_scale = Eigen::VectorXd::Ones(out);

    std::mt19937_64 rng(seed);
    auto uniform = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (size_t l = 0; l + 1 < widths.size(); ++l) {
        int fan_in = widths[l], fan_out = widths[l + 1];
        double limit = std::sqrt(6.0 / (fan_in + fan_out));
        Eigen::MatrixXd W(fan_out, fan_in);
        for (int i = 0; i < fan_out; ++i)
            for (int j = 0; j < fan_in; ++j) W(i, j) = (2.0 * uniform() - 1.0) * limit;
        net.weights.push_back(std::move(W));
        net.biases.push_back(Eigen::VectorXd::Zero(fan_out));
    }
    return net;
}

ForwardEval forward_eval(const Network& net, Vec2 x) {
    const int L = net.layer_count();
    ForwardEval ev;
    ev.act.resize(L);
    ev.pre.resize(L - 1);
    ev.tact.resize(L);
    ev.tpre.resize(L - 1);

    Eigen::VectorXd a(2);
    a << (x.x - net.in_shift.x) / net.in_scale.x, (x.y - net.in_shift.y) / net.in_scale.y;
    Eigen::MatrixXd ta = Eigen::MatrixXd::Identity(2, 2);

    for (int l = 0; l < L - 1; ++l) {
        ev.act[l] = a;
        ev.tact[l] = ta;
        Eigen::VectorXd z = net.weights[l] * a + net.biases[l];
        Eigen::MatrixXd tz = net.weights[l] * ta;
        ev.pre[l] = z;
        ev.tpre[l] = tz;
        a.resize(z.size());
        ta.resize(z.size(), 2);
        for (int i = 0; i < z.size(); ++i) {
            ActEval s = eval_activation(net.activation, z[i]);
            a[i] = s.v;
            ta.row(i) = s.d1 * tz.row(i);
        }
    }
    ev.act[L - 1] = a;
    ev.tact[L - 1] = ta;

    Eigen::VectorXd y = net.weights[L - 1] * a + net.biases[L - 1];
    Eigen::MatrixXd J = net.weights[L - 1] * ta;
    // Physical scale: multiply outputs by out_scale, divide tangent columns by
    // the input normalization scale.
    ev.y = net.out_scale.cwiseProduct(y);
    ev.dy_dx.resize(J.rows(), 2);
    ev.dy_dx.col(0) = net.out_scale.cwiseProduct(J.col(0)) / net.in_scale.x;
    ev.dy_dx.col(1) = net.out_scale.cwiseProduct(J.col(1)) / net.in_scale.y;
    return ev;
}

Eigen::VectorXd forward(const Network& net, Vec2 x) { return forward_eval(net, x).y; }

Eigen::MatrixXd input_jacobian(const Network& net, Vec2 x) { return forward_eval(net, x).dy_dx; }

Vec2 boundary_traction(const Network& net, const CollocationNode& node, const Material& mat) {
    if (net.mode == OutputMode::DirectTraction) {
        Eigen::VectorXd y = forward(net, node.position);
        return {y[2], y[3]};
    }
    Eigen::MatrixXd J = input_jacobian(net, node.position);
    Tensor2 grad_u = {{{J(0, 0), J(0, 1)}, {J(1, 0), J(1, 1)}}};
    return traction(stress_from_gradient(grad_u, mat), node.normal);
}

void accumulate_param_gradient(const Network& net, const ForwardEval& eval,
                               const Eigen::VectorXd& ybar, const Eigen::MatrixXd& Jbar,
                               Eigen::VectorXd& grad) {
    const int L = net.layer_count();

    // Seeds back to network scale.
    Eigen::VectorXd yb = net.out_scale.cwiseProduct(ybar);
    Eigen::MatrixXd jb(Jbar.rows(), 2);
    jb.col(0) = net.out_scale.cwiseProduct(Jbar.col(0)) / net.in_scale.x;
    jb.col(1) = net.out_scale.cwiseProduct(Jbar.col(1)) / net.in_scale.y;

    // Flat offsets per layer.
    std::vector<int> offset(L);
    {
        int at = 0;
        for (int l = 0; l < L; ++l) {
            offset[l] = at;
            at += static_cast<int>(net.weights[l].size() + net.biases[l].size());
        }
    }
    auto add_layer_grad = [&](int l, const Eigen::VectorXd& zbar, const Eigen::MatrixXd& tzbar) {
        int at = offset[l];
        const auto& a = eval.act[l];
        const auto& ta = eval.tact[l];
        for (int i = 0; i < net.weights[l].rows(); ++i)
            for (int j = 0; j < net.weights[l].cols(); ++j)
                grad[at++] += zbar[i] * a[j] + tzbar.row(i).dot(ta.row(j));
        for (int i = 0; i < net.biases[l].size(); ++i) grad[at++] += zbar[i];
    };

    // Output layer is linear: z = W a + b, tz = W ta.
    Eigen::VectorXd abar = net.weights[L - 1].transpose() * yb;
    Eigen::MatrixXd tabar = net.weights[L - 1].transpose() * jb;
    add_layer_grad(L - 1, yb, jb);

    for (int l = L - 2; l >= 0; --l) {
        const auto& z = eval.pre[l];
        const auto& tz = eval.tpre[l];
        Eigen::VectorXd zbar(z.size());
        Eigen::MatrixXd tzbar(z.size(), 2);
        for (int i = 0; i < z.size(); ++i) {
            ActEval s = eval_activation(net.activation, z[i]);
            // act = sigma(z), tact = sigma'(z) * tz: z feeds both paths.
            zbar[i] = abar[i] * s.d1 + s.d2 * tabar.row(i).dot(tz.row(i));
            tzbar.row(i) = s.d1 * tabar.row(i);
        }
        add_layer_grad(l, zbar, tzbar);
        abar = net.weights[l].transpose() * zbar;
        tabar = net.weights[l].transpose() * tzbar;
    }
}

} // namespace binn
