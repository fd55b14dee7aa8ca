#pragma once

#include "binn/errors.hpp"

namespace binn {

enum class ElasticMode { PlaneStrain, PlaneStress };

// Isotropic linear-elastic constants. Kernel formulas are written for plane
// strain; plane stress is handled by the effective Poisson ratio nu/(1+nu).
struct Material {
    double E = 1.0;
    double nu = 0.0;
    ElasticMode mode = ElasticMode::PlaneStrain;

    Material() = default;
    Material(double E_, double nu_, ElasticMode mode_ = ElasticMode::PlaneStrain)
        : E(E_), nu(nu_), mode(mode_) {
        if (!(E > 0.0)) throw ConfigError("material: E must be positive");
        if (!(nu > -1.0 && nu < 0.5)) throw ConfigError("material: nu must lie in (-1, 0.5)");
    }

    double shear_modulus() const { return E / (2.0 * (1.0 + nu)); }

    // Poisson ratio entering the fundamental-solution formulas.
    double kernel_nu() const {
        return mode == ElasticMode::PlaneStrain ? nu : nu / (1.0 + nu);
    }

    // Lame lambda for the active mode: the plane-stress value is the reduced
    // constant 2*mu*lambda/(lambda+2*mu) so sigma = lambda*tr(eps)*I + 2*mu*eps
    // holds in both modes.
    double lame_lambda() const {
        double mu = shear_modulus();
        if (mode == ElasticMode::PlaneStrain)
            return E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
        return 2.0 * mu * nu / (1.0 - nu);
    }
};

} // namespace binn
