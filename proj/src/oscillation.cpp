#include "cslmeson/oscillation.hpp"

#include "cslmeson/error.hpp"

#include <cmath>
#include <numbers>

namespace cslmeson
{
namespace
{

void require_time(double t)
{
    if (!(t >= 0.0) || !std::isfinite(t))
    {
        throw DomainError("negative or non-finite time");
    }
}

// m_h^2/E_h - m_l^2/E_l without cancellation:
//   dm (m_h + m_l) [E_l - m_l^2 / (E_h + E_l)] / (E_h E_l)
double relativistic_mass_contrast(const MesonSpecies& s, double p_mev)
{
    const double mh = s.m_heavy_mev;
    const double ml = s.m_light_mev;
    const double eh = energy(mh, p_mev, EnergyMode::relativistic);
    const double el = energy(ml, p_mev, EnergyMode::relativistic);
    return s.delta_m_mev * (mh + ml) * (el - ml * ml / (eh + el)) / (eh * el);
}

} // namespace

std::array<Complex, 2> flavor_coefficients(Flavor f)
{
    const double h = std::numbers::sqrt2 / 2.0;
    if (f == Flavor::particle)
    {
        return {Complex(h, 0.0), Complex(h, 0.0)};
    }
    return {Complex(-h, 0.0), Complex(h, 0.0)};
}

void validate(const DampingSpec& spec)
{
    if (const auto* csl = std::get_if<CslDamping>(&spec))
    {
        csl->params.validate();
        if (!(csl->momentum_mev >= 0.0))
        {
            throw DomainError("CSL damping: negative momentum");
        }
    }
    else if (const auto* lind = std::get_if<LindbladDamping>(&spec))
    {
        if (!(lind->lambda_single >= 0.0) || !std::isfinite(lind->lambda_single))
        {
            throw DomainError("Lindblad damping: lambda must be non-negative");
        }
    }
}

double csl_damping_rate(const CslParams& params, const MesonSpecies& species)
{
    params.validate();
    const double dm = species.delta_m_mev;
    const double rc3 = params.r_c_cm * params.r_c_cm * params.r_c_cm;
    return params.gamma_cm3_per_s * dm * dm /
           (16.0 * std::pow(std::numbers::pi, 1.5) * rc3 * params.m0_mev * params.m0_mev);
}

double csl_damping_rate_relativistic(const CslParams& params, const MesonSpecies& species, double p_mev)
{
    params.validate();
    const double contrast = relativistic_mass_contrast(species, p_mev) / params.m0_mev;
    return 0.5 * params.gamma_cm3_per_s * spatial_zero(params.r_c_cm) * contrast * contrast;
}

double damping_exponent(const DampingSpec& spec, const MesonSpecies& species, Eigenstate j, Eigenstate k, double t)
{
    require_time(t);
    if (j == k)
    {
        return 0.0;
    }
    if (const auto* lind = std::get_if<LindbladDamping>(&spec))
    {
        return lind->lambda_single * t;
    }
    if (const auto* csl = std::get_if<CslDamping>(&spec))
    {
        const auto& p = csl->params;
        p.validate();
        const double contrast =
            (csl->relativistic ? relativistic_mass_contrast(species, csl->momentum_mev) : species.delta_m_mev) /
            p.m0_mev;
        return p.gamma_cm3_per_s * spatial_zero(p.r_c_cm) * contrast * contrast * growth_integral(csl->kernel, t);
    }
    return 0.0;
}

Complex pkj(const MesonSpecies& species, Eigenstate j, Eigenstate k, double t, const DampingSpec& spec,
            const Kinematics& kin)
{
    require_time(t);
    const double hbar = kConstants.hbar_mev_s;
    const double decay =
        kin.include_decay ? -0.5 * (species.width(j) + species.width(k)) * t / hbar : 0.0;
    const double envelope = std::exp(decay - damping_exponent(spec, species, j, k, t));
    if (j == k)
    {
        return {envelope, 0.0};
    }
    const double phase = energy_difference(species, j, k, kin.momentum_mev, kin.mode) * t / hbar;
    return std::polar(envelope, phase);
}

double transition_probability(Flavor initial, Flavor final_flavor, const MesonSpecies& species, double t,
                              const DampingSpec& spec, const Kinematics& kin)
{
    // alpha_j beta_j* alpha_k* beta_k is +-1/4 for flavor states; using the
    // signs keeps P(t = 0) exactly 1 or 0.
    const auto sign = [](Flavor f, Eigenstate e) {
        return f == Flavor::antiparticle && e == Eigenstate::light ? -1.0 : 1.0;
    };
    Complex sum{};
    for (auto j : kEigenstates)
    {
        for (auto k : kEigenstates)
        {
            const double weight =
                0.25 * sign(initial, j) * sign(final_flavor, j) * sign(initial, k) * sign(final_flavor, k);
            sum += weight * pkj(species, j, k, t, spec, kin);
        }
    }
    return sum.real();
}

Matrix2 lindblad_density_matrix(const MesonSpecies& species, double t, double lambda_single, Flavor initial)
{
    const DampingSpec spec = LindbladDamping{lambda_single};
    validate(spec);
    const auto alpha = flavor_coefficients(initial);
    Matrix2 rho{};
    for (auto j : kEigenstates)
    {
        for (auto k : kEigenstates)
        {
            rho[index(j)][index(k)] =
                alpha[index(j)] * std::conj(alpha[index(k)]) * pkj(species, j, k, t, spec);
        }
    }
    return rho;
}

double flavor_expectation(const Matrix2& rho, Flavor f)
{
    const auto b = flavor_coefficients(f);
    Complex sum{};
    for (std::size_t j = 0; j < 2; ++j)
    {
        for (std::size_t k = 0; k < 2; ++k)
        {
            sum += std::conj(b[j]) * rho[j][k] * b[k];
        }
    }
    return sum.real();
}

MomentumSpreadDiagnostic momentum_spread_diagnostic(const MesonSpecies& species, double r_c_cm, double t)
{
    if (!(r_c_cm > 0.0))
    {
        throw DomainError("momentum_spread_diagnostic: non-positive r_C");
    }
    require_time(t);
    constexpr double kMevToEv = 1e6;
    const double hbar = kConstants.hbar_mev_s;
    MomentumSpreadDiagnostic d;
    d.sigma_hbar_ev = hbar * kConstants.c_cm_per_s / r_c_cm * kMevToEv;
    d.sigma_h_ev = kPlanckMevS * kConstants.c_cm_per_s / r_c_cm * kMevToEv;
    const double mass_term = species.delta_m_mev / (species.m_light_mev * species.m_heavy_mev);
    // (MeV/c)^-2 -> (eV/c)^-2
    d.phase_coefficient_hbar = t / (2.0 * hbar) * mass_term / (kMevToEv * kMevToEv);
    d.phase_coefficient_h = t / (2.0 * kPlanckMevS) * mass_term / (kMevToEv * kMevToEv);
    d.phase_at_sigma = d.phase_coefficient_hbar * d.sigma_hbar_ev * d.sigma_hbar_ev;
    return d;
}

} // namespace cslmeson
