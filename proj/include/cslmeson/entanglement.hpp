#pragma once

// Joint decay-time probabilities for meson pairs produced back to back.
//
// The general quadruple sum is the reference implementation; the closed
// forms below (zeta model, min-time model, equal widths) are checked
// against it in the tests.

#include "cslmeson/oscillation.hpp"

#include <array>

namespace cslmeson
{

/// alpha[j][k]: amplitude for eigenstate j on the left and k on the right.
struct TwoParticleState
{
    std::array<std::array<Complex, 2>, 2> alpha{};

    /// Throws DomainError unless sum |alpha|^2 = 1 to 1e-12.
    void validate() const;
};

/// (|KS KL> - |KL KS>) / sqrt2 and its analogs.
TwoParticleState antisymmetric_state();

/// Left projection beta and right projection gamma, mass-basis coefficients.
struct FinalProjection
{
    std::array<Complex, 2> beta{};
    std::array<Complex, 2> gamma{};

    void validate() const;
};

FinalProjection flavor_projection(Flavor left, Flavor right);
FinalProjection mass_projection(Eigenstate left, Eigenstate right);

struct JointQuery
{
    double t_left = 0.0;  // s
    double t_right = 0.0; // s
    MesonSpecies species;
    DampingSpec spec = NoDamping{};
    Kinematics kin; // both mesons carry the same |p|
};

/// sum_{j k j' k'} a_jk b_j* g_k* a*_j'k' b_j' g_k' P_jj'(t_l) P_kk'(t_r).
/// Throws NumericError if the imaginary residue exceeds 1e-12 or the result
/// is below -1e-12; tiny negative values are clamped to 0.
double joint_probability(const TwoParticleState& state, const FinalProjection& proj, const JointQuery& q);

/// Pieces of the antisymmetric-state flavor probabilities:
/// P(like) = (A - 2 C s) / 8, P(unlike) = (A + 2 C s) / 8, with s the
/// interference suppression factor.
struct InterferenceTerms
{
    double A = 0.0; // exp(-G_S t_l - G_L t_r) + exp(-G_L t_l - G_S t_r)
    double C = 0.0; // cos(dE (t_r - t_l)/hbar) exp(-(G_S + G_L)(t_l + t_r)/2)
};

InterferenceTerms interference_terms(const MesonSpecies& species, double t_left, double t_right,
                                     const Kinematics& kin = {});

/// Sum over the four flavor outcomes: A / 2.
double outcome_total(const MesonSpecies& species, double t_left, double t_right, const Kinematics& kin = {});

/// Antisymmetric state with the interference term scaled by (1 - zeta).
double zeta_joint_probability(const MesonSpecies& species, double t_left, double t_right, Flavor left, Flavor right,
                              double zeta, const Kinematics& kin = {});

/// Conditional outcome probability given the decay times; the four values
/// sum to 1.
double zeta_conditional_probability(const MesonSpecies& species, double t_left, double t_right, Flavor left,
                                    Flavor right, double zeta, const Kinematics& kin = {});

/// As the zeta model with (1 - zeta) -> exp(-lambda_two * min(t_l, t_r)).
double min_time_joint_probability(const MesonSpecies& species, double t_left, double t_right, Flavor left,
                                  Flavor right, double lambda_two, const Kinematics& kin = {});

struct EqualWidthResult
{
    /// Quadruple sum with both widths set to their mean:
    /// (e^{-G (t_l + t_r)} / 4)(1 -+ cos), minus for like flavors.
    double derived = 0.0;
    /// The two-term expression (e^{-G (t_l + t_r)} / 2)(1 + cos). It equals
    /// the sum of the two unlike-flavor outcomes, not a like-flavor one.
    double printed = 0.0;
    /// |G_L - G_H| <= 1% of the mean width.
    bool widths_comparable = true;
};

EqualWidthResult equal_width_joint_probability(const MesonSpecies& species, double t_left, double t_right,
                                               Flavor left, Flavor right, const Kinematics& kin = {});

} // namespace cslmeson
