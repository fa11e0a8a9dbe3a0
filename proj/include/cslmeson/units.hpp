#pragma once

// Physical constants, particle data and CSL parameter sets.
//
// Unit convention used throughout the library:
//   masses MeV/c^2, momenta MeV/c, energies and widths MeV, times s,
//   lengths cm, CSL strength gamma in cm^3/s.
// With masses and momenta expressed in those units the factors of c cancel
// numerically in every energy expression, so E = m + p^2/(2m) is evaluated
// directly on the stored numbers.

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace cslmeson
{

struct PhysicalConstants
{
    double hbar_mev_s = 6.582119569e-22;
    double c_cm_per_s = 2.99792458e10;
};

inline constexpr PhysicalConstants kConstants{};

/// Planck constant h = 2 pi hbar, MeV s.
inline constexpr double kPlanckMevS = 2.0 * 3.14159265358979323846 * kConstants.hbar_mev_s;

enum class Eigenstate
{
    light,
    heavy
};

inline constexpr Eigenstate kEigenstates[] = {Eigenstate::light, Eigenstate::heavy};

inline constexpr std::size_t index(Eigenstate e) { return e == Eigenstate::light ? 0 : 1; }

enum class EnergyMode
{
    nonrelativistic,
    relativistic
};

/// The two mass eigenstates of one neutral-meson system.
///
/// The mass splitting is stored separately from the two masses: a splitting
/// of 1e-12 MeV on top of ~500 MeV is below the resolution of a double, so
/// m_heavy - m_light is never used in physics formulas.
struct MesonSpecies
{
    std::string name;
    double m_light_mev = 0.0;
    double m_heavy_mev = 0.0;
    double delta_m_mev = 0.0; // m_heavy - m_light, authoritative
    double tau_light_s = 0.0;
    double tau_heavy_s = 0.0;
    double gamma_light_mev = 0.0; // hbar / tau_light
    double gamma_heavy_mev = 0.0; // hbar / tau_heavy
    std::string label_light;
    std::string label_heavy;

    double mass(Eigenstate e) const { return e == Eigenstate::light ? m_light_mev : m_heavy_mev; }
    double width(Eigenstate e) const { return e == Eigenstate::light ? gamma_light_mev : gamma_heavy_mev; }
    const std::string& label(Eigenstate e) const { return e == Eigenstate::light ? label_light : label_heavy; }

    /// m_j - m_k computed from the stored splitting.
    double mass_difference(Eigenstate j, Eigenstate k) const;

    /// Gamma_e / hbar in 1/s.
    double decay_rate(Eigenstate e) const { return width(e) / kConstants.hbar_mev_s; }

    /// Width of the shorter-lived eigenstate, the reference for Lambda/Gamma.
    double reference_width() const;
};

/// Builds a species from lifetimes, deriving widths as hbar/tau and checking
/// every invariant. Throws ConfigError.
MesonSpecies make_species(std::string name, double m_light_mev, double delta_m_mev, double tau_light_s,
                          double tau_heavy_s, std::string label_light, std::string label_heavy);

struct CslParams
{
    double gamma_cm3_per_s = 0.0;
    double r_c_cm = 1e-5;
    double m0_mev = 9.4e2;

    /// gamma = 1e-30 cm^3/s, the original GRW-like strength.
    static CslParams grw();
    /// gamma = 1e-22 cm^3/s, the enhanced strength from latent image formation.
    static CslParams adler();

    /// Throws DomainError. gamma == 0 is accepted and means "no collapse".
    void validate() const;
};

/// Species and CSL presets loaded from a configuration document.
/// Immutable after construction.
class Registry
{
public:
    Registry(std::vector<MesonSpecies> species, std::map<std::string, CslParams> csl,
             std::vector<std::string> warnings = {});

    const PhysicalConstants& constants() const { return kConstants; }

    /// Throws ConfigError for unknown names.
    const MesonSpecies& species(std::string_view name) const;
    const CslParams& csl_preset(std::string_view name) const;

    const std::vector<MesonSpecies>& all_species() const { return species_; }
    const std::map<std::string, CslParams>& csl_presets() const { return csl_; }

    /// Non-fatal validation findings (e.g. an unusually small kaon width ratio).
    const std::vector<std::string>& warnings() const { return warnings_; }

private:
    std::vector<MesonSpecies> species_;
    std::map<std::string, CslParams> csl_;
    std::vector<std::string> warnings_;
};

/// Parses the JSON configuration schema:
///   { "species": [ { "name", "m_light_mev", "m_heavy_mev", "tau_light_s",
///                    "tau_heavy_s", "label_light", "label_heavy",
///                    optional "delta_m_mev" } ],
///     "csl": [ { "name", "gamma_cm3_per_s", "r_c_cm", "m0_mev" } ] }
/// Throws ConfigError on malformed input.
Registry load_config(std::string_view text);

/// Inverse of load_config; load_config(serialize_config(r)) reproduces r.
std::string serialize_config(const Registry& registry);

/// JSON text of the built-in configuration.
std::string_view default_config_text();

/// The built-in configuration (kaon, B0, Bs, D0; GRW and Adler presets).
const Registry& default_registry();

/// Total energy in MeV. Throws DomainError for m <= 0 or p < 0.
double energy(double m_mev, double p_mev, EnergyMode mode);

/// E_j(p) - E_k(p) evaluated without cancellation from the stored splitting.
double energy_difference(const MesonSpecies& species, Eigenstate j, Eigenstate k, double p_mev,
                         EnergyMode mode);

} // namespace cslmeson
