#include "cslmeson/entanglement.hpp"
#include "cslmeson/error.hpp"
#include "cslmeson/inference.hpp"
#include "cslmeson/noise_kernels.hpp"
#include "cslmeson/oscillation.hpp"
#include "cslmeson/stochastic_oracle.hpp"
#include "cslmeson/units.hpp"
#include "cslmeson/wavepackets.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace cslmeson;

namespace
{

// Python-side damping description: model is "none", "csl" or "lindblad".
DampingSpec make_spec(const std::string& model, const CslParams* csl, const std::string& kernel, double lambda,
                      double momentum, bool relativistic)
{
    if (model == "none")
    {
        return NoDamping{};
    }
    if (model == "csl")
    {
        if (!csl)
        {
            throw DomainError("model 'csl' needs csl parameters");
        }
        return CslDamping{*csl, parse_kernel_spec(kernel), momentum, relativistic};
    }
    if (model == "lindblad")
    {
        return LindbladDamping{lambda};
    }
    throw DomainError("model must be none, csl or lindblad");
}

Kinematics make_kin(double momentum, bool relativistic, bool include_decay)
{
    return {momentum, relativistic ? EnergyMode::relativistic : EnergyMode::nonrelativistic, include_decay};
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "CSL damping of neutral-meson oscillations";
    m.attr("__version__") = CSLMESON_VERSION;
    m.attr("HBAR_MEV_S") = kConstants.hbar_mev_s;
    m.attr("C_CM_PER_S") = kConstants.c_cm_per_s;

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<NumericError>(m, "NumericError", base.ptr());

    py::enum_<Eigenstate>(m, "Eigenstate").value("light", Eigenstate::light).value("heavy", Eigenstate::heavy);
    py::enum_<Flavor>(m, "Flavor").value("particle", Flavor::particle).value("antiparticle", Flavor::antiparticle);

    py::class_<MesonSpecies>(m, "MesonSpecies")
        .def_readonly("name", &MesonSpecies::name)
        .def_readonly("m_light_mev", &MesonSpecies::m_light_mev)
        .def_readonly("m_heavy_mev", &MesonSpecies::m_heavy_mev)
        .def_readonly("delta_m_mev", &MesonSpecies::delta_m_mev)
        .def_readonly("tau_light_s", &MesonSpecies::tau_light_s)
        .def_readonly("tau_heavy_s", &MesonSpecies::tau_heavy_s)
        .def_readonly("gamma_light_mev", &MesonSpecies::gamma_light_mev)
        .def_readonly("gamma_heavy_mev", &MesonSpecies::gamma_heavy_mev)
        .def_readonly("label_light", &MesonSpecies::label_light)
        .def_readonly("label_heavy", &MesonSpecies::label_heavy)
        .def("decay_rate", &MesonSpecies::decay_rate)
        .def("reference_width", &MesonSpecies::reference_width)
        .def("__repr__", [](const MesonSpecies& s) { return "<MesonSpecies " + s.name + ">"; });

    m.def("make_species", &make_species, py::arg("name"), py::arg("m_light_mev"), py::arg("delta_m_mev"),
          py::arg("tau_light_s"), py::arg("tau_heavy_s"), py::arg("label_light") = "light",
          py::arg("label_heavy") = "heavy");

    py::class_<CslParams>(m, "CslParams")
        .def(py::init([](double gamma, double r_c, double m0) {
                 CslParams p{gamma, r_c, m0};
                 p.validate();
                 return p;
             }),
             py::arg("gamma_cm3_per_s"), py::arg("r_c_cm") = 1e-5, py::arg("m0_mev") = 940.0)
        .def_readonly("gamma_cm3_per_s", &CslParams::gamma_cm3_per_s)
        .def_readonly("r_c_cm", &CslParams::r_c_cm)
        .def_readonly("m0_mev", &CslParams::m0_mev)
        .def_static("grw", &CslParams::grw)
        .def_static("adler", &CslParams::adler);

    py::class_<Registry>(m, "Registry")
        .def("species", &Registry::species, py::return_value_policy::copy)
        .def("csl_preset", &Registry::csl_preset, py::return_value_policy::copy)
        .def("species_names",
             [](const Registry& r) {
                 std::vector<std::string> names;
                 for (const auto& s : r.all_species())
                 {
                     names.push_back(s.name);
                 }
                 return names;
             })
        .def_property_readonly("warnings", &Registry::warnings);

    m.def("load_config", &load_config, py::arg("text"));
    m.def("default_config_text", [] { return std::string(default_config_text()); });
    m.def("default_registry", &default_registry, py::return_value_policy::reference);

    m.def("csl_damping_rate", &csl_damping_rate, py::arg("params"), py::arg("species"));
    m.def("csl_damping_rate_relativistic", &csl_damping_rate_relativistic, py::arg("params"), py::arg("species"),
          py::arg("momentum_mev"));
    m.def("growth_integral",
          [](const std::string& kernel, double t) { return growth_integral(parse_kernel_spec(kernel), t); },
          py::arg("kernel"), py::arg("t"));

    m.def(
        "transition_probability",
        [](Flavor initial, Flavor final_flavor, const MesonSpecies& s, double t, const std::string& model,
           const CslParams* csl, const std::string& kernel, double lambda, double momentum, bool relativistic,
           bool include_decay) {
            const auto spec = make_spec(model, csl, kernel, lambda, momentum, relativistic);
            validate(spec);
            return transition_probability(initial, final_flavor, s, t, spec,
                                          make_kin(momentum, relativistic, include_decay));
        },
        py::arg("initial"), py::arg("final"), py::arg("species"), py::arg("t"), py::arg("model") = "none",
        py::arg("csl") = nullptr, py::arg("kernel") = "white", py::arg("lambda_single") = 0.0,
        py::arg("momentum_mev") = 0.0, py::arg("relativistic") = false, py::arg("include_decay") = true);

    m.def(
        "joint_probability",
        [](const MesonSpecies& s, double tl, double tr, Flavor left, Flavor right, const std::string& model,
           const CslParams* csl, double lambda, bool include_decay) {
            const auto spec = make_spec(model, csl, "white", lambda, 0.0, false);
            validate(spec);
            return joint_probability(antisymmetric_state(), flavor_projection(left, right),
                                     JointQuery{tl, tr, s, spec, make_kin(0.0, false, include_decay)});
        },
        py::arg("species"), py::arg("t_left"), py::arg("t_right"), py::arg("left"), py::arg("right"),
        py::arg("model") = "none", py::arg("csl") = nullptr, py::arg("lambda_single") = 0.0,
        py::arg("include_decay") = true);

    m.def(
        "zeta_joint_probability",
        [](const MesonSpecies& s, double tl, double tr, Flavor left, Flavor right, double zeta) {
            return zeta_joint_probability(s, tl, tr, left, right, zeta);
        },
        py::arg("species"), py::arg("t_left"), py::arg("t_right"), py::arg("left"), py::arg("right"),
        py::arg("zeta"));

    py::class_<OracleResult>(m, "OracleResult")
        .def_readonly("mean_interference", &OracleResult::mean_interference)
        .def_readonly("std_error", &OracleResult::std_error)
        .def_readonly("analytic_prediction", &OracleResult::analytic_prediction)
        .def_readonly("discrete_prediction", &OracleResult::discrete_prediction)
        .def_readonly("exponent", &OracleResult::exponent)
        .def_readonly("n_trajectories", &OracleResult::n_trajectories)
        .def_readonly("n_steps", &OracleResult::n_steps)
        .def_readonly("dt", &OracleResult::dt);

    m.def(
        "simulate_damping",
        [](double gj, double gk, double f0, double t, std::size_t n_traj, std::size_t n_steps, std::uint64_t seed,
           const std::string& kernel, unsigned threads) {
            SimulationPlan plan;
            plan.n_trajectories = n_traj;
            plan.n_steps = n_steps;
            plan.dt = t / static_cast<double>(n_steps);
            plan.seed = seed;
            plan.kernel = parse_kernel_spec(kernel);
            plan.threads = threads;
            py::gil_scoped_release release;
            return simulate_damping(gj, gk, f0, t, plan);
        },
        py::arg("gamma_j"), py::arg("gamma_k"), py::arg("f0"), py::arg("t"), py::arg("n_trajectories") = 100000,
        py::arg("n_steps") = 100, py::arg("seed") = 1, py::arg("kernel") = "white", py::arg("threads") = 1);

    py::class_<EventRecord>(m, "EventRecord")
        .def_readonly("t_left", &EventRecord::t_left)
        .def_readonly("t_right", &EventRecord::t_right)
        .def_readonly("flavor_left", &EventRecord::flavor_left)
        .def_readonly("flavor_right", &EventRecord::flavor_right);

    py::class_<FitResult>(m, "FitResult")
        .def_readonly("zeta_hat", &FitResult::zeta_hat)
        .def_readonly("ci_low", &FitResult::ci_low)
        .def_readonly("ci_high", &FitResult::ci_high)
        .def_readonly("confidence_level", &FitResult::confidence_level)
        .def_readonly("log_likelihood", &FitResult::log_likelihood)
        .def_readonly("n_events", &FitResult::n_events)
        .def_readonly("converged", &FitResult::converged);

    m.def(
        "generate_events",
        [](const MesonSpecies& s, double zeta, std::size_t n, std::uint64_t seed, double t_max, std::size_t cells,
           bool equal_times) { return generate_events(s, zeta, n, seed, TimeSampling{t_max, cells, equal_times}); },
        py::arg("species"), py::arg("zeta"), py::arg("n"), py::arg("seed") = 1, py::arg("t_max_s") = 0.0,
        py::arg("n_cells") = 200, py::arg("equal_times") = false);
    m.def(
        "fit_zeta", [](const std::vector<EventRecord>& ev, const MesonSpecies& s, double cl) { return fit_zeta(ev, s, cl); },
        py::arg("events"), py::arg("species"), py::arg("cl") = 0.9);
    m.def(
        "events_to_csv",
        [](const std::vector<EventRecord>& ev) {
            std::ostringstream out;
            write_events_csv(out, ev);
            return out.str();
        },
        py::arg("events"));
    m.def("events_from_csv", &read_events_csv, py::arg("text"));
    m.def("zeta_to_lambda", &zeta_to_lambda, py::arg("zeta"), py::arg("t_min_s"));
    m.def("lambda_to_zeta", &lambda_to_zeta, py::arg("lambda_"), py::arg("t_min_s"));
    m.def("lambda_ratio", &lambda_ratio, py::arg("lambda_"), py::arg("species"));

    m.def("cross_term_kernel_overlap", &cross_term_kernel_overlap, py::arg("d_cm"), py::arg("sigma_cm"),
          py::arg("r_c_cm"), py::arg("dims") = 1);
    m.def("log_cross_term_kernel_overlap", &log_cross_term_kernel_overlap, py::arg("d_cm"), py::arg("sigma_cm"),
          py::arg("r_c_cm"), py::arg("dims") = 1);
}
