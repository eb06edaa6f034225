#ifndef MEMSTEFAN_CORE_PARAMS_HPP
#define MEMSTEFAN_CORE_PARAMS_HPP

namespace memstefan::core {

/// Thermophysical constants of the liquid phase.
struct PhysicalParams {
    double k = 1.0;   ///< thermal conductivity
    double rho = 1.0; ///< mass density
    double c = 1.0;   ///< specific heat
    double l = 1.0;   ///< latent heat per unit mass
    double T0 = 1.0;  ///< temperature imposed at x = 0
    double Tm = 0.0;  ///< melt temperature

    /// Throws InputError naming the first field that violates
    /// k, rho, c, l > 0 or T0 > Tm.
    void validate() const;

    double diffusivity() const noexcept { return k / (rho * c); }
    double stefan_number() const noexcept { return c * (T0 - Tm) / l; }
};

/// Order and scale of the memory flux J = -k mu D^{1-alpha} u_x.
struct MemoryParams {
    double alpha = 1.0;
    double mu = 1.0;

    /// Requires 0 < alpha <= 1, mu > 0 and mu == 1 when alpha == 1.
    void validate() const;

    bool classical() const noexcept { return alpha == 1.0; }
};

/// Same problem with rho = c = k = 1: lengths are divided by sqrt(d) and the
/// latent heat becomes l / c. Times and temperatures are unchanged.
PhysicalParams nondimensional(const PhysicalParams& phys);

} // namespace memstefan::core

#endif // MEMSTEFAN_CORE_PARAMS_HPP
