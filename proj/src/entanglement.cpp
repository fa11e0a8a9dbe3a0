#include "cslmeson/entanglement.hpp"

#include "cslmeson/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace cslmeson
{
namespace
{

constexpr double kNormTol = 1e-12;
constexpr double kResidueTol = 1e-12;

void require_times(double t_left, double t_right)
{
    if (!(t_left >= 0.0) || !(t_right >= 0.0) || !std::isfinite(t_left) || !std::isfinite(t_right))
    {
        throw DomainError("decay times must be finite and non-negative");
    }
}

void require_normalized(const std::array<Complex, 2>& v, const char* what)
{
    const double norm = std::norm(v[0]) + std::norm(v[1]);
    if (std::abs(norm - 1.0) > kNormTol)
    {
        throw DomainError(std::string(what) + " is not normalized");
    }
}

bool is_like(Flavor left, Flavor right) { return left == right; }

double pair_probability(const InterferenceTerms& terms, bool like, double suppression)
{
    const double sign = like ? -1.0 : 1.0;
    return std::max(0.0, (terms.A + sign * 2.0 * terms.C * suppression) / 8.0);
}

} // namespace

void TwoParticleState::validate() const
{
    double norm = 0.0;
    for (const auto& row : alpha)
    {
        for (const auto& a : row)
        {
            norm += std::norm(a);
        }
    }
    if (std::abs(norm - 1.0) > kNormTol)
    {
        throw DomainError("two-particle state is not normalized");
    }
}

TwoParticleState antisymmetric_state()
{
    const double h = std::numbers::sqrt2 / 2.0;
    TwoParticleState s;
    s.alpha[index(Eigenstate::light)][index(Eigenstate::heavy)] = h;
    s.alpha[index(Eigenstate::heavy)][index(Eigenstate::light)] = -h;
    return s;
}

void FinalProjection::validate() const
{
    require_normalized(beta, "left projection");
    require_normalized(gamma, "right projection");
}

FinalProjection flavor_projection(Flavor left, Flavor right)
{
    return {flavor_coefficients(left), flavor_coefficients(right)};
}

FinalProjection mass_projection(Eigenstate left, Eigenstate right)
{
    FinalProjection p;
    p.beta[index(left)] = 1.0;
    p.gamma[index(right)] = 1.0;
    return p;
}

double joint_probability(const TwoParticleState& state, const FinalProjection& proj, const JointQuery& q)
{
    state.validate();
    proj.validate();
    validate(q.spec);
    require_times(q.t_left, q.t_right);

    std::array<std::array<Complex, 2>, 2> left{};
    std::array<std::array<Complex, 2>, 2> right{};
    for (auto j : kEigenstates)
    {
        for (auto k : kEigenstates)
        {
            left[index(j)][index(k)] = pkj(q.species, j, k, q.t_left, q.spec, q.kin);
            right[index(j)][index(k)] = pkj(q.species, j, k, q.t_right, q.spec, q.kin);
        }
    }

    const auto& a = state.alpha;
    const auto& b = proj.beta;
    const auto& g = proj.gamma;
    Complex sum{};
    double scale = 0.0;
    for (std::size_t j = 0; j < 2; ++j)
    {
        for (std::size_t k = 0; k < 2; ++k)
        {
            const Complex amp = a[j][k] * std::conj(b[j]) * std::conj(g[k]);
            if (amp == Complex{})
            {
                continue;
            }
            for (std::size_t jp = 0; jp < 2; ++jp)
            {
                for (std::size_t kp = 0; kp < 2; ++kp)
                {
                    const Complex term =
                        amp * std::conj(a[jp][kp]) * b[jp] * g[kp] * left[j][jp] * right[k][kp];
                    sum += term;
                    scale += std::abs(term);
                }
            }
        }
    }
    if (std::abs(sum.imag()) > kResidueTol * std::max(1.0, scale))
    {
        throw NumericError("joint_probability: imaginary residue " + std::to_string(sum.imag()));
    }
    if (sum.real() < -kResidueTol * std::max(1.0, scale))
    {
        throw NumericError("joint_probability: negative probability " + std::to_string(sum.real()));
    }
    return std::max(0.0, sum.real());
}

InterferenceTerms interference_terms(const MesonSpecies& species, double t_left, double t_right,
                                     const Kinematics& kin)
{
    require_times(t_left, t_right);
    const double gl = kin.include_decay ? species.decay_rate(Eigenstate::light) : 0.0;
    const double gh = kin.include_decay ? species.decay_rate(Eigenstate::heavy) : 0.0;
    const double de = energy_difference(species, Eigenstate::heavy, Eigenstate::light, kin.momentum_mev, kin.mode);
    InterferenceTerms terms;
    terms.A = std::exp(-gl * t_left - gh * t_right) + std::exp(-gh * t_left - gl * t_right);
    terms.C = std::cos(de * (t_right - t_left) / kConstants.hbar_mev_s) *
              std::exp(-0.5 * (gl + gh) * (t_left + t_right));
    return terms;
}

double outcome_total(const MesonSpecies& species, double t_left, double t_right, const Kinematics& kin)
{
    return 0.5 * interference_terms(species, t_left, t_right, kin).A;
}

double zeta_joint_probability(const MesonSpecies& species, double t_left, double t_right, Flavor left, Flavor right,
                              double zeta, const Kinematics& kin)
{
    if (!(zeta >= 0.0 && zeta <= 1.0))
    {
        throw DomainError("zeta must lie in [0, 1]");
    }
    return pair_probability(interference_terms(species, t_left, t_right, kin), is_like(left, right), 1.0 - zeta);
}

double zeta_conditional_probability(const MesonSpecies& species, double t_left, double t_right, Flavor left,
                                    Flavor right, double zeta, const Kinematics& kin)
{
    if (!(zeta >= 0.0 && zeta <= 1.0))
    {
        throw DomainError("zeta must lie in [0, 1]");
    }
    const auto terms = interference_terms(species, t_left, t_right, kin);
    if (!(terms.A > 0.0))
    {
        throw NumericError("zeta_conditional_probability: decay envelope underflows");
    }
    const double ratio = 2.0 * terms.C / terms.A;
    const double sign = is_like(left, right) ? -1.0 : 1.0;
    return std::max(0.0, (1.0 + sign * ratio * (1.0 - zeta)) / 4.0);
}

double min_time_joint_probability(const MesonSpecies& species, double t_left, double t_right, Flavor left,
                                  Flavor right, double lambda_two, const Kinematics& kin)
{
    if (!(lambda_two >= 0.0) || !std::isfinite(lambda_two))
    {
        throw DomainError("lambda_two must be non-negative");
    }
    const double suppression = std::exp(-lambda_two * std::min(t_left, t_right));
    return pair_probability(interference_terms(species, t_left, t_right, kin), is_like(left, right), suppression);
}

EqualWidthResult equal_width_joint_probability(const MesonSpecies& species, double t_left, double t_right,
                                               Flavor left, Flavor right, const Kinematics& kin)
{
    require_times(t_left, t_right);
    const double gl = species.decay_rate(Eigenstate::light);
    const double gh = species.decay_rate(Eigenstate::heavy);
    const double mean = 0.5 * (gl + gh);
    const double rate = kin.include_decay ? mean : 0.0;
    const double de = energy_difference(species, Eigenstate::heavy, Eigenstate::light, kin.momentum_mev, kin.mode);
    const double c = std::cos(de * (t_right - t_left) / kConstants.hbar_mev_s);
    const double envelope = std::exp(-rate * (t_left + t_right));
    const double sign = is_like(left, right) ? -1.0 : 1.0;

    EqualWidthResult r;
    r.derived = std::max(0.0, 0.25 * envelope * (1.0 + sign * c));
    r.printed = 0.5 * envelope * (1.0 + c);
    r.widths_comparable = std::abs(gl - gh) <= 0.01 * mean;
    return r;
}

} // namespace cslmeson
