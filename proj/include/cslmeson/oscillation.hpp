#pragma once

// Single-particle flavor oscillation with decay under CSL collapse noise or
// Lindblad decoherence in the mass basis.
//
// Phase convention: the mass-basis coherence between eigenstates j and k
// carries exp(+i (E_j - E_k) t / hbar), and the density matrix evolves as
// rho_jk(t) = rho_jk(0) * pkj(j, k, t). Observables built from real flavor
// coefficients do not depend on this choice.

#include "cslmeson/noise_kernels.hpp"
#include "cslmeson/units.hpp"

#include <array>
#include <complex>
#include <variant>

namespace cslmeson
{

using Complex = std::complex<double>;
using Matrix2 = std::array<std::array<Complex, 2>, 2>;

enum class Flavor
{
    particle,    // K0, B0, Bs0, D0
    antiparticle // the charge conjugates
};

/// Mass-basis coefficients (light, heavy) of a flavor eigenstate:
/// particle = (1, 1)/sqrt2, antiparticle = (-1, 1)/sqrt2.
std::array<Complex, 2> flavor_coefficients(Flavor f);

struct NoDamping
{
};

struct CslDamping
{
    CslParams params;
    NoiseKernel kernel = NoiseKernel::white();
    double momentum_mev = 0.0; // enters only when relativistic is set
    bool relativistic = false;
};

struct LindbladDamping
{
    double lambda_single = 0.0; // 1/s
};

using DampingSpec = std::variant<NoDamping, CslDamping, LindbladDamping>;

/// Throws DomainError if the spec violates its invariants.
void validate(const DampingSpec& spec);

/// How energies and decay enter the oscillation factors.
struct Kinematics
{
    double momentum_mev = 0.0;
    EnergyMode mode = EnergyMode::nonrelativistic;
    bool include_decay = true;
};

/// Lambda_CSL = gamma dm^2 / (16 pi^{3/2} r_C^3 m0^2), in 1/s.
double csl_damping_rate(const CslParams& params, const MesonSpecies& species);

/// Relativistic generalization: (gamma F(0) / (2 m0^2)) (m_h^2/E_h - m_l^2/E_l)^2
/// with relativistic energies at momentum p. Equals csl_damping_rate at p = 0.
double csl_damping_rate_relativistic(const CslParams& params, const MesonSpecies& species, double p_mev);

/// Exponent of the interference suppression between eigenstates j and k
/// after time t. Zero for j == k.
double damping_exponent(const DampingSpec& spec, const MesonSpecies& species, Eigenstate j, Eigenstate k, double t);

/// Mass-basis coherence factor
///   exp(-(G_j + G_k) t / 2hbar) exp(i (E_j - E_k) t / hbar) exp(-damping_exponent).
/// pkj(k, j) == conj(pkj(j, k)) and pkj(j, j) == exp(-G_j t / hbar).
Complex pkj(const MesonSpecies& species, Eigenstate j, Eigenstate k, double t, const DampingSpec& spec,
            const Kinematics& kin = {});

/// Probability of finding `final_flavor` at time t for a meson produced as
/// `initial`. Without decay, flip + survive = 1.
double transition_probability(Flavor initial, Flavor final_flavor, const MesonSpecies& species, double t,
                              const DampingSpec& spec, const Kinematics& kin = {});

/// Mass-basis density matrix at time t under Lindblad dephasing with rate
/// lambda_single, starting from the given flavor state.
Matrix2 lindblad_density_matrix(const MesonSpecies& species, double t, double lambda_single,
                                Flavor initial = Flavor::particle);

/// <f|rho|f> for a flavor eigenstate.
double flavor_expectation(const Matrix2& rho, Flavor f);

/// Magnitude estimates used to justify setting p_f = p_i in the momentum
/// integrals of the collapse kernels.
struct MomentumSpreadDiagnostic
{
    double sigma_hbar_ev = 0.0;            // hbar c / r_C in eV/c
    double sigma_h_ev = 0.0;               // h c / r_C in eV/c
    double phase_coefficient_hbar = 0.0;   // (t / 2hbar) dm / (m_l m_h) in (eV/c)^-2
    double phase_coefficient_h = 0.0;      // same with h in place of hbar
    double phase_at_sigma = 0.0;           // phase_coefficient_hbar * sigma_hbar^2
    static constexpr double quoted_sigma_ev = 12.0;
    static constexpr double quoted_phase_coefficient = 2.7e-16;
};

MomentumSpreadDiagnostic momentum_spread_diagnostic(const MesonSpecies& species, double r_c_cm, double t);

} // namespace cslmeson
