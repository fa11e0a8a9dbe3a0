#include "cslmeson/units.hpp"

#include "cslmeson/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <utility>

namespace cslmeson
{
namespace
{

using nlohmann::json;

// Splitting values are configuration chosen to match the published CSL rate
// table; see README ("Shipped particle data").
constexpr std::string_view kDefaultConfig = R"json({
  "species": [
    {
      "name": "K0",
      "m_light_mev": 497.614,
      "m_heavy_mev": 497.6140000000035,
      "delta_m_mev": 3.5e-12,
      "tau_light_s": 8.95e-11,
      "tau_heavy_s": 5.116e-8,
      "label_light": "K_S",
      "label_heavy": "K_L",
      "source": "mass splitting 3.5e-12 MeV and tau_S 8.95e-11 s"
    },
    {
      "name": "B0",
      "m_light_mev": 5279.5,
      "m_heavy_mev": 5279.5000000003337,
      "delta_m_mev": 3.337e-10,
      "tau_light_s": 1.519e-12,
      "tau_heavy_s": 1.519e-12,
      "label_light": "B_L",
      "label_heavy": "B_H",
      "source": "PDG 2010 era: dm_d = 0.507 /ps, equal lifetimes"
    },
    {
      "name": "Bs",
      "m_light_mev": 5366.3,
      "m_heavy_mev": 5366.300000011696,
      "delta_m_mev": 1.1696e-8,
      "tau_light_s": 1.472e-12,
      "tau_heavy_s": 1.472e-12,
      "label_light": "B_sL",
      "label_heavy": "B_sH",
      "source": "PDG 2010 era: dm_s = 17.77 /ps, equal lifetimes"
    },
    {
      "name": "D0",
      "m_light_mev": 1864.83,
      "m_heavy_mev": 1864.8300000000160,
      "delta_m_mev": 1.605e-11,
      "tau_light_s": 4.101e-13,
      "tau_heavy_s": 4.101e-13,
      "label_light": "D_1",
      "label_heavy": "D_2",
      "source": "PDG 2010 era: x_D = 0.0100, equal lifetimes"
    }
  ],
  "csl": [
    { "name": "grw",   "gamma_cm3_per_s": 1e-30, "r_c_cm": 1e-5, "m0_mev": 940.0 },
    { "name": "adler", "gamma_cm3_per_s": 1e-22, "r_c_cm": 1e-5, "m0_mev": 940.0 }
  ]
}
)json";

void require_positive(double value, const char* what, const std::string& name)
{
    if (!(value > 0.0) || !std::isfinite(value))
    {
        std::ostringstream msg;
        msg << "non-positive " << what << " for '" << name << "': " << value;
        throw ConfigError(msg.str());
    }
}

MesonSpecies build_species(std::string name, double m_light, double m_heavy, double delta, double tau_light,
                           double tau_heavy, std::string label_light, std::string label_heavy)
{
    require_positive(m_light, "mass", name);
    require_positive(m_heavy, "mass", name);
    require_positive(tau_light, "lifetime", name);
    require_positive(tau_heavy, "lifetime", name);
    if (m_heavy < m_light || delta < 0.0 || !std::isfinite(delta))
    {
        throw ConfigError("species '" + name + "': m_heavy must not be below m_light");
    }
    const double ulp = std::nextafter(m_heavy, std::numeric_limits<double>::infinity()) - m_heavy;
    if (std::abs((m_heavy - m_light) - delta) > 8.0 * ulp)
    {
        throw ConfigError("species '" + name + "': inconsistent mass splitting (delta_m_mev vs masses)");
    }

    MesonSpecies s;
    s.name = std::move(name);
    s.m_light_mev = m_light;
    s.m_heavy_mev = m_heavy;
    s.delta_m_mev = delta;
    s.tau_light_s = tau_light;
    s.tau_heavy_s = tau_heavy;
    s.gamma_light_mev = kConstants.hbar_mev_s / tau_light;
    s.gamma_heavy_mev = kConstants.hbar_mev_s / tau_heavy;
    s.label_light = std::move(label_light);
    s.label_heavy = std::move(label_heavy);
    return s;
}

template <typename T>
T field(const json& obj, const char* key, const std::string& context)
{
    auto it = obj.find(key);
    if (it == obj.end())
    {
        throw ConfigError("missing required field '" + std::string(key) + "' in " + context);
    }
    try
    {
        return it->get<T>();
    }
    catch (const json::exception&)
    {
        throw ConfigError("field '" + std::string(key) + "' in " + context + " has the wrong type");
    }
}

void check_csl(const CslParams& p, const std::string& name)
{
    try
    {
        p.validate();
    }
    catch (const DomainError& e)
    {
        throw ConfigError("csl preset '" + name + "': " + e.what());
    }
}

} // namespace

double MesonSpecies::mass_difference(Eigenstate j, Eigenstate k) const
{
    if (j == k)
    {
        return 0.0;
    }
    return j == Eigenstate::heavy ? delta_m_mev : -delta_m_mev;
}

double MesonSpecies::reference_width() const { return std::max(gamma_light_mev, gamma_heavy_mev); }

MesonSpecies make_species(std::string name, double m_light_mev, double delta_m_mev, double tau_light_s,
                          double tau_heavy_s, std::string label_light, std::string label_heavy)
{
    return build_species(std::move(name), m_light_mev, m_light_mev + delta_m_mev, delta_m_mev, tau_light_s,
                         tau_heavy_s, std::move(label_light), std::move(label_heavy));
}

CslParams CslParams::grw() { return CslParams{1e-30, 1e-5, 9.4e2}; }

CslParams CslParams::adler() { return CslParams{1e-22, 1e-5, 9.4e2}; }

void CslParams::validate() const
{
    if (!(gamma_cm3_per_s >= 0.0) || !std::isfinite(gamma_cm3_per_s))
    {
        throw DomainError("collapse strength gamma must be non-negative");
    }
    if (!(r_c_cm > 0.0) || !std::isfinite(r_c_cm))
    {
        throw DomainError("correlation length r_C must be positive");
    }
    if (!(m0_mev > 0.0) || !std::isfinite(m0_mev))
    {
        throw DomainError("reference mass m0 must be positive");
    }
}

Registry::Registry(std::vector<MesonSpecies> species, std::map<std::string, CslParams> csl,
                   std::vector<std::string> warnings)
    : species_(std::move(species)), csl_(std::move(csl)), warnings_(std::move(warnings))
{
    std::set<std::string> seen;
    for (const auto& s : species_)
    {
        if (!seen.insert(s.name).second)
        {
            throw ConfigError("duplicate species '" + s.name + "'");
        }
    }
}

const MesonSpecies& Registry::species(std::string_view name) const
{
    auto it = std::find_if(species_.begin(), species_.end(), [&](const auto& s) { return s.name == name; });
    if (it == species_.end())
    {
        throw ConfigError("unknown species '" + std::string(name) + "'");
    }
    return *it;
}

const CslParams& Registry::csl_preset(std::string_view name) const
{
    auto it = csl_.find(std::string(name));
    if (it == csl_.end())
    {
        throw ConfigError("unknown csl preset '" + std::string(name) + "'");
    }
    return it->second;
}

Registry load_config(std::string_view text)
{
    json doc;
    try
    {
        doc = json::parse(text.begin(), text.end());
    }
    catch (const json::parse_error& e)
    {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object())
    {
        throw ConfigError("configuration root must be an object");
    }

    std::vector<MesonSpecies> species;
    std::vector<std::string> warnings;
    std::set<std::string> names;
    for (const auto& entry : field<json>(doc, "species", "configuration"))
    {
        const auto name = field<std::string>(entry, "name", "species entry");
        const std::string ctx = "species '" + name + "'";
        if (!names.insert(name).second)
        {
            throw ConfigError("duplicate species '" + name + "'");
        }
        const auto m_light = field<double>(entry, "m_light_mev", ctx);
        const auto m_heavy = field<double>(entry, "m_heavy_mev", ctx);
        const double delta = entry.contains("delta_m_mev") ? field<double>(entry, "delta_m_mev", ctx) : m_heavy - m_light;
        auto s = build_species(name, m_light, m_heavy, delta, field<double>(entry, "tau_light_s", ctx),
                               field<double>(entry, "tau_heavy_s", ctx), field<std::string>(entry, "label_light", ctx),
                               field<std::string>(entry, "label_heavy", ctx));
        if (s.name == "K0" && s.gamma_light_mev < 100.0 * s.gamma_heavy_mev)
        {
            warnings.push_back("K0 width ratio gamma_light/gamma_heavy = " +
                               std::to_string(s.gamma_light_mev / s.gamma_heavy_mev) + " is not of order 600");
        }
        species.push_back(std::move(s));
    }

    std::map<std::string, CslParams> csl;
    if (doc.contains("csl"))
    {
        for (const auto& entry : doc["csl"])
        {
            const auto name = field<std::string>(entry, "name", "csl entry");
            const std::string ctx = "csl preset '" + name + "'";
            CslParams p{field<double>(entry, "gamma_cm3_per_s", ctx), field<double>(entry, "r_c_cm", ctx),
                        field<double>(entry, "m0_mev", ctx)};
            check_csl(p, name);
            if (!csl.emplace(name, p).second)
            {
                throw ConfigError("duplicate csl preset '" + name + "'");
            }
        }
    }
    return Registry(std::move(species), std::move(csl), std::move(warnings));
}

std::string serialize_config(const Registry& registry)
{
    nlohmann::ordered_json doc;
    doc["species"] = nlohmann::ordered_json::array();
    for (const auto& s : registry.all_species())
    {
        nlohmann::ordered_json e;
        e["name"] = s.name;
        e["m_light_mev"] = s.m_light_mev;
        e["m_heavy_mev"] = s.m_heavy_mev;
        e["delta_m_mev"] = s.delta_m_mev;
        e["tau_light_s"] = s.tau_light_s;
        e["tau_heavy_s"] = s.tau_heavy_s;
        e["label_light"] = s.label_light;
        e["label_heavy"] = s.label_heavy;
        doc["species"].push_back(std::move(e));
    }
    doc["csl"] = nlohmann::ordered_json::array();
    for (const auto& [name, p] : registry.csl_presets())
    {
        doc["csl"].push_back({{"name", name},
                              {"gamma_cm3_per_s", p.gamma_cm3_per_s},
                              {"r_c_cm", p.r_c_cm},
                              {"m0_mev", p.m0_mev}});
    }
    return doc.dump(2);
}

std::string_view default_config_text() { return kDefaultConfig; }

const Registry& default_registry()
{
    static const Registry registry = load_config(kDefaultConfig);
    return registry;
}

double energy(double m_mev, double p_mev, EnergyMode mode)
{
    if (!(m_mev > 0.0))
    {
        throw DomainError("energy: non-positive mass");
    }
    if (!(p_mev >= 0.0))
    {
        throw DomainError("energy: negative momentum");
    }
    if (mode == EnergyMode::nonrelativistic)
    {
        return m_mev + p_mev * p_mev / (2.0 * m_mev);
    }
    return std::hypot(p_mev, m_mev);
}

double energy_difference(const MesonSpecies& species, Eigenstate j, Eigenstate k, double p_mev, EnergyMode mode)
{
    if (j == k)
    {
        return 0.0;
    }
    const double ml = species.m_light_mev;
    const double mh = species.m_heavy_mev;
    double heavy_minus_light = 0.0;
    if (mode == EnergyMode::nonrelativistic)
    {
        // dm + p^2/2 (1/mh - 1/ml) = dm (1 - p^2 / (2 mh ml))
        heavy_minus_light = species.delta_m_mev * (1.0 - p_mev * p_mev / (2.0 * mh * ml));
    }
    else
    {
        // (Eh^2 - El^2) / (Eh + El) = dm (mh + ml) / (Eh + El)
        const double eh = energy(mh, p_mev, mode);
        const double el = energy(ml, p_mev, mode);
        heavy_minus_light = species.delta_m_mev * (mh + ml) / (eh + el);
    }
    return j == Eigenstate::heavy ? heavy_minus_light : -heavy_minus_light;
}

} // namespace cslmeson
