#include "cli.hpp"

#include "cslmeson/entanglement.hpp"
#include "cslmeson/error.hpp"
#include "cslmeson/inference.hpp"
#include "cslmeson/oscillation.hpp"
#include "cslmeson/stochastic_oracle.hpp"
#include "cslmeson/units.hpp"
#include "cslmeson/wavepackets.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <variant>

namespace cslmeson::cli
{
namespace
{

using ordered_json = nlohmann::ordered_json;
using Cell = std::variant<std::monostate, double, long long, std::string, bool>;

struct Table
{
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    bool record = false; // a single object rather than a list
};

std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

std::string csv_cell(const Cell& c)
{
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>)
                return "";
            else if constexpr (std::is_same_v<T, double>)
                return format_double(v);
            else if constexpr (std::is_same_v<T, long long>)
                return std::to_string(v);
            else if constexpr (std::is_same_v<T, bool>)
                return v ? "true" : "false";
            else
                return v;
        },
        c);
}

ordered_json json_cell(const Cell& c)
{
    return std::visit(
        [](const auto& v) -> ordered_json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>)
                return nullptr;
            else if constexpr (std::is_same_v<T, double>)
                return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
            else
                return v;
        },
        c);
}

void render(const Table& t, const std::string& format, std::ostream& out)
{
    if (format == "csv")
    {
        for (std::size_t i = 0; i < t.columns.size(); ++i)
        {
            out << (i ? "," : "") << t.columns[i];
        }
        out << '\n';
        for (const auto& row : t.rows)
        {
            for (std::size_t i = 0; i < row.size(); ++i)
            {
                out << (i ? "," : "") << csv_cell(row[i]);
            }
            out << '\n';
        }
        return;
    }
    auto object = [&](const std::vector<Cell>& row) {
        ordered_json o = ordered_json::object();
        for (std::size_t i = 0; i < t.columns.size(); ++i)
        {
            o[t.columns[i]] = json_cell(row[i]);
        }
        return o;
    };
    ordered_json doc;
    if (t.record && t.rows.size() == 1)
    {
        doc = object(t.rows.front());
    }
    else
    {
        doc = ordered_json::array();
        for (const auto& row : t.rows)
        {
            doc.push_back(object(row));
        }
    }
    out << doc.dump(2) << '\n';
}

std::uint64_t fnv1a64(std::string_view text)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text)
    {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string read_file(const std::string& path, const char* what)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw ConfigError(std::string("cannot open ") + what + " '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<double> linspace(double lo, double hi, std::size_t n)
{
    if (n == 0 || !(lo >= 0.0) || !(hi >= lo) || !std::isfinite(hi))
    {
        throw DomainError("invalid grid: need 0 <= min <= max and at least one point");
    }
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        g[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return g;
}

NoiseKernel kernel_from_option(const std::string& spec)
{
    constexpr std::string_view kFile = "file:";
    if (spec.rfind(kFile, 0) == 0)
    {
        return load_tabulated_kernel_csv(read_file(spec.substr(kFile.size()), "kernel file"));
    }
    return parse_kernel_spec(spec);
}

// Options shared by commands that evaluate a damping model.
struct ModelOptions
{
    std::string model = "none";
    std::string preset = "adler";
    std::optional<double> gamma;
    std::string kernel = "white";
    std::optional<double> lambda;
    double zeta = 0.0;
    double momentum = 0.0;
    bool relativistic = false;
    bool no_decay = false;

    void add_to(CLI::App* app, bool with_joint_models)
    {
        std::vector<std::string> models{"none", "csl", "lindblad"};
        if (with_joint_models)
        {
            models.insert(models.end(), {"zeta", "min-time"});
        }
        app->add_option("--model", model, "Damping model")->check(CLI::IsMember(models))->capture_default_str();
        app->add_option("--preset", preset, "CSL parameter preset")->capture_default_str();
        app->add_option("--gamma", gamma, "Override the preset CSL gamma (cm^3/s)");
        app->add_option("--kernel", kernel, "Noise kernel: white, exp:TAU, gauss:TAU, file:PATH")
            ->capture_default_str();
        app->add_option("--lambda", lambda,
                        with_joint_models ? "Lindblad rate (default: the CSL rate) or min-time rate (required), 1/s"
                                          : "Lindblad rate (1/s); defaults to the CSL rate");
        if (with_joint_models)
        {
            app->add_option("--zeta", zeta, "Zeta-model parameter")->capture_default_str();
        }
        app->add_option("--momentum", momentum, "Meson momentum (MeV/c)")->capture_default_str();
        app->add_flag("--relativistic", relativistic, "Relativistic energies and damping factors");
        app->add_flag("--no-decay", no_decay, "Drop the decay widths");
    }

    CslParams csl(const Registry& reg) const
    {
        CslParams p = reg.csl_preset(preset);
        if (gamma)
        {
            p.gamma_cm3_per_s = *gamma;
        }
        p.validate();
        return p;
    }

    DampingSpec spec(const Registry& reg, const MesonSpecies& species) const
    {
        if (model == "csl")
        {
            return CslDamping{csl(reg), kernel_from_option(kernel), momentum, relativistic};
        }
        if (model == "lindblad")
        {
            return LindbladDamping{lambda ? *lambda : csl_damping_rate(csl(reg), species)};
        }
        return NoDamping{};
    }

    Kinematics kinematics() const
    {
        return {momentum, relativistic ? EnergyMode::relativistic : EnergyMode::nonrelativistic, !no_decay};
    }
};

struct Globals
{
    std::string config;
    std::uint64_t seed = 1;
    std::string out;
    std::string format;
};

struct Context
{
    Registry registry;
    std::string config_text;
};

Context load_context(const Globals& g)
{
    std::string text = g.config.empty() ? std::string(default_config_text()) : read_file(g.config, "config");
    Registry reg = load_config(text);
    return {std::move(reg), std::move(text)};
}

double reference_lifetime(const MesonSpecies& s) { return kConstants.hbar_mev_s / s.reference_width(); }

// --- commands -------------------------------------------------------------

struct RatesOptions
{
    std::string preset = "adler";
    std::vector<std::string> species;
    double momentum = 0.0;
};

Table cmd_rates(const Context& ctx, const RatesOptions& o)
{
    const CslParams params = ctx.registry.csl_preset(o.preset);
    std::vector<const MesonSpecies*> rows;
    if (o.species.empty())
    {
        for (const auto& s : ctx.registry.all_species())
        {
            rows.push_back(&s);
        }
    }
    else
    {
        for (const auto& name : o.species)
        {
            rows.push_back(&ctx.registry.species(name));
        }
    }
    Table t;
    t.columns = {"species",           "preset",           "gamma_cm3_per_s",        "delta_m_mev",
                 "reference_lifetime_s", "lambda_csl_per_s", "lambda_relativistic_per_s", "lambda_ratio"};
    for (const auto* s : rows)
    {
        const double lambda = csl_damping_rate(params, *s);
        t.rows.push_back({s->name, o.preset, params.gamma_cm3_per_s, s->delta_m_mev, reference_lifetime(*s), lambda,
                          csl_damping_rate_relativistic(params, *s, o.momentum), lambda_ratio(lambda, *s)});
    }
    return t;
}

struct SingleOptions
{
    std::string species = "K0";
    ModelOptions model;
    double t_min = 0.0;
    std::optional<double> t_max;
    std::size_t n = 101;
};

Table cmd_single(const Context& ctx, const SingleOptions& o)
{
    const auto& s = ctx.registry.species(o.species);
    const DampingSpec spec = o.model.spec(ctx.registry, s);
    validate(spec);
    const Kinematics kin = o.model.kinematics();
    Table t;
    t.columns = {"t_s", "p_survive", "p_flip", "p_survive_anti", "p_flip_anti", "sum_check"};
    for (double time : linspace(o.t_min, o.t_max.value_or(10.0 * reference_lifetime(s)), o.n))
    {
        const double ps = transition_probability(Flavor::particle, Flavor::particle, s, time, spec, kin);
        const double pf = transition_probability(Flavor::particle, Flavor::antiparticle, s, time, spec, kin);
        const double as =
            transition_probability(Flavor::antiparticle, Flavor::antiparticle, s, time, spec, kin);
        const double af = transition_probability(Flavor::antiparticle, Flavor::particle, s, time, spec, kin);
        t.rows.push_back({time, ps, pf, as, af, ps + pf});
    }
    return t;
}

struct JointOptions
{
    std::string species = "K0";
    std::string state = "psi-minus";
    ModelOptions model;
    std::optional<double> tl_max;
    std::optional<double> tr_max;
    std::size_t n_left = 21;
    std::size_t n_right = 21;
    bool diagonal = false;
};

Table cmd_joint(const Context& ctx, const JointOptions& o)
{
    const auto& s = ctx.registry.species(o.species);
    const Kinematics kin = o.model.kinematics();
    const double tau = reference_lifetime(s);
    const auto left = linspace(0.0, o.tl_max.value_or(5.0 * tau), o.n_left);
    const auto right = o.diagonal ? left : linspace(0.0, o.tr_max.value_or(5.0 * tau), o.n_right);

    const std::array<std::pair<Flavor, Flavor>, 4> outcomes{{{Flavor::particle, Flavor::particle},
                                                             {Flavor::particle, Flavor::antiparticle},
                                                             {Flavor::antiparticle, Flavor::particle},
                                                             {Flavor::antiparticle, Flavor::antiparticle}}};
    std::function<double(double, double, Flavor, Flavor)> eval;
    const auto& m = o.model.model;
    if (m == "zeta")
    {
        eval = [&](double tl, double tr, Flavor a, Flavor b) {
            return zeta_joint_probability(s, tl, tr, a, b, o.model.zeta, kin);
        };
    }
    else if (m == "min-time")
    {
        if (!o.model.lambda)
        {
            throw DomainError("joint: --model min-time needs --lambda");
        }
        const double lambda = *o.model.lambda;
        eval = [&, lambda](double tl, double tr, Flavor a, Flavor b) {
            return min_time_joint_probability(s, tl, tr, a, b, lambda, kin);
        };
    }
    else
    {
        const DampingSpec spec = o.model.spec(ctx.registry, s);
        validate(spec);
        const auto state = antisymmetric_state();
        eval = [&, spec, state](double tl, double tr, Flavor a, Flavor b) {
            return joint_probability(state, flavor_projection(a, b), JointQuery{tl, tr, s, spec, kin});
        };
    }

    Table t;
    t.columns = {"t_left_s", "t_right_s", "p_PP", "p_PA", "p_AP", "p_AA", "total"};
    auto add_row = [&](double tl, double tr) {
        std::vector<Cell> row{tl, tr};
        double total = 0.0;
        for (const auto& [a, b] : outcomes)
        {
            const double p = eval(tl, tr, a, b);
            total += p;
            row.emplace_back(p);
        }
        row.emplace_back(total);
        t.rows.push_back(std::move(row));
    };
    if (o.diagonal)
    {
        for (double time : left)
        {
            add_row(time, time);
        }
    }
    else
    {
        for (double tl : left)
        {
            for (double tr : right)
            {
                add_row(tl, tr);
            }
        }
    }
    return t;
}

struct McOptions
{
    std::string kernel = "white";
    double exponent = 1.0;
    double t = 1.0;
    std::size_t n_traj = 100000;
    std::size_t n_steps = 0;
    unsigned threads = 1;
    std::optional<double> gamma_j;
    double gamma_k = 0.0;
    double f0 = 1.0;
    std::size_t sweep = 0;
};

Table cmd_mc(const McOptions& o, std::uint64_t seed)
{
    SimulationPlan plan;
    plan.kernel = parse_kernel_spec(o.kernel);
    plan.n_trajectories = o.n_traj;
    plan.seed = seed;
    plan.threads = o.threads;
    plan.n_steps = o.n_steps;
    if (plan.n_steps == 0)
    {
        const auto* k = std::get_if<NoiseKernel::Exponential>(&plan.kernel.kind());
        plan.n_steps = k ? static_cast<std::size_t>(std::ceil(20.0 * o.t / k->tau)) : 10;
        plan.n_steps = std::max<std::size_t>(plan.n_steps, 10);
    }
    if (!(o.t > 0.0))
    {
        throw DomainError("mc: --t must be positive");
    }
    plan.dt = o.t / static_cast<double>(plan.n_steps);

    double gj = 0.0;
    double gk = o.gamma_k;
    double f0 = o.f0;
    if (o.gamma_j)
    {
        gj = *o.gamma_j;
    }
    else
    {
        // --exponent is the coupling product (sqrt gj - sqrt gk)^2 F0 t; the
        // kernel then sets the damping, e^{-exponent / 2} for white noise.
        gj = o.exponent / (f0 * o.t);
        gk = 0.0;
    }

    Table t;
    t.columns = {"kernel",      "t_s",      "gamma_j", "gamma_k", "f0", "n_trajectories", "n_steps", "dt_s",
                 "exponent",    "mean_interference",   "std_error", "analytic_prediction", "discrete_prediction",
                 "deviation_sigma", "within_3sigma"};
    auto row = [&](const OracleResult& r) {
        const double dev = std::abs(r.mean_interference - r.analytic_prediction);
        const double sigmas = r.std_error > 0.0 ? dev / r.std_error : (dev == 0.0 ? 0.0 : INFINITY);
        return std::vector<Cell>{plan.kernel.describe(),
                                 o.t,
                                 gj,
                                 gk,
                                 f0,
                                 static_cast<long long>(r.n_trajectories),
                                 static_cast<long long>(r.n_steps),
                                 r.dt,
                                 r.exponent,
                                 r.mean_interference,
                                 r.std_error,
                                 r.analytic_prediction,
                                 r.discrete_prediction,
                                 sigmas,
                                 dev <= 3.0 * r.std_error};
    };
    if (o.sweep > 0)
    {
        for (const auto& level : convergence_sweep(plan, o.t, gj, gk, f0, o.sweep))
        {
            t.rows.push_back(row(level.result));
        }
        return t;
    }
    t.rows.push_back(row(simulate_damping(gj, gk, f0, o.t, plan)));
    t.record = true;
    return t;
}

struct FitOptions
{
    std::string species = "K0";
    std::string events;
    double zeta_true = 0.13;
    std::size_t n = 50000;
    double t_max = 0.0;
    std::size_t cells = 200;
    bool equal_times = false;
    double cl = 0.9;
    std::optional<double> t_min;
    std::string write_events;
};

Table cmd_fit(const Context& ctx, const FitOptions& o, std::uint64_t seed)
{
    const auto& s = ctx.registry.species(o.species);
    std::vector<EventRecord> events;
    const bool generated = o.events.empty();
    if (generated)
    {
        events = generate_events(s, o.zeta_true, o.n, seed, TimeSampling{o.t_max, o.cells, o.equal_times});
    }
    else
    {
        events = read_events_csv(read_file(o.events, "event file"));
    }
    if (!o.write_events.empty())
    {
        std::ofstream f(o.write_events, std::ios::binary);
        if (!f)
        {
            throw ConfigError("cannot write event file '" + o.write_events + "'");
        }
        write_events_csv(f, events);
    }
    const FitResult r = fit_zeta(events, s, o.cl);
    if (!r.converged)
    {
        throw NumericError("fit did not converge");
    }
    Table t;
    t.record = true;
    t.columns = {"species", "source", "zeta_true", "n_events", "zeta_hat", "ci_low", "ci_high", "confidence_level",
                 "log_likelihood", "converged"};
    t.rows.push_back({s.name, generated ? std::string("generated") : o.events,
                      generated ? Cell(o.zeta_true) : Cell(std::monostate{}), static_cast<long long>(r.n_events),
                      r.zeta_hat, r.ci_low, r.ci_high, r.confidence_level, r.log_likelihood, r.converged});
    if (o.t_min)
    {
        const double upper = r.ci_high < 1.0 ? zeta_to_lambda(r.ci_high, *o.t_min) : INFINITY;
        t.columns.insert(t.columns.end(), {"t_min_s", "lambda_hat_per_s", "lambda_upper_per_s", "lambda_ratio_upper"});
        auto& row = t.rows.back();
        row.emplace_back(*o.t_min);
        row.emplace_back(r.zeta_hat < 1.0 ? zeta_to_lambda(r.zeta_hat, *o.t_min) : INFINITY);
        row.emplace_back(upper);
        row.emplace_back(std::isfinite(upper) ? lambda_ratio(upper, s) : INFINITY);
    }
    return t;
}

struct OverlapOptions
{
    double sigma = 1e-4;
    std::optional<double> r_c;
    std::string preset = "adler";
    double beta = 0.2;
    double d0 = 0.0;
    double t_max = 1e-12;
    std::size_t n = 11;
    int dims = 1;
};

Table cmd_overlap(const Context& ctx, const OverlapOptions& o)
{
    const double r_c = o.r_c ? *o.r_c : ctx.registry.csl_preset(o.preset).r_c_cm;
    const double v = o.beta * kConstants.c_cm_per_s;
    const GaussianPacket left{0.0, o.sigma, -v};
    const GaussianPacket right{o.d0, o.sigma, v};
    const double zero = cross_term_kernel_overlap(0.0, o.sigma, r_c, o.dims);
    Table t;
    t.columns = {"t_s", "separation_cm", "overlap", "log_ratio", "ratio"};
    for (double time : linspace(0.0, o.t_max, o.n))
    {
        const double d = packet_separation(time, left, right);
        const double log_overlap = log_cross_term_kernel_overlap(d, o.sigma, r_c, o.dims);
        const double log_ratio = log_overlap - std::log(zero);
        t.rows.push_back({time, d, std::exp(log_overlap), log_ratio, std::exp(log_ratio)});
    }
    return t;
}

struct DiagOptions
{
    std::string species = "K0";
    std::string preset = "adler";
    double t = 1.6e-7; // 10 m at 0.2c
};

Table cmd_diag(const Context& ctx, const DiagOptions& o)
{
    const auto& s = ctx.registry.species(o.species);
    const double r_c = ctx.registry.csl_preset(o.preset).r_c_cm;
    const double t = o.t;
    const auto d = momentum_spread_diagnostic(s, r_c, t);
    const double qs = MomentumSpreadDiagnostic::quoted_sigma_ev;
    const double qp = MomentumSpreadDiagnostic::quoted_phase_coefficient;
    Table tab;
    tab.columns = {"quantity", "computed", "quoted", "computed_over_quoted", "note"};
    tab.rows.push_back({"sigma_hbar_over_rc_ev", d.sigma_hbar_ev, qs, d.sigma_hbar_ev / qs,
                        "hbar c / r_C; the quoted value matches h c / r_C"});
    tab.rows.push_back({"sigma_h_over_rc_ev", d.sigma_h_ev, qs, d.sigma_h_ev / qs, "h c / r_C"});
    tab.rows.push_back({"phase_coefficient_hbar_per_ev2", d.phase_coefficient_hbar, qp, d.phase_coefficient_hbar / qp,
                        "(t / 2 hbar) dm / (m_l m_h)"});
    tab.rows.push_back({"phase_coefficient_h_per_ev2", d.phase_coefficient_h, qp, d.phase_coefficient_h / qp,
                        "same with h in place of hbar"});
    tab.rows.push_back({"phase_at_sigma", d.phase_at_sigma, std::monostate{}, std::monostate{},
                        "phase coefficient times sigma^2; << 1 justifies p_f = p_i"});
    tab.rows.push_back({"time_s", t, std::monostate{}, std::monostate{}, "evaluation time"});
    return tab;
}

// --- manifest -------------------------------------------------------------

ordered_json parameter_echo(const CLI::App& app, const CLI::App* sub)
{
    ordered_json p = ordered_json::object();
    auto add = [&](const CLI::App& a) {
        for (const CLI::Option* opt : a.get_options())
        {
            if (opt->get_lnames().empty() || opt->get_lnames().front() == "help" ||
                opt->get_lnames().front() == "version")
            {
                continue;
            }
            const std::string& name = opt->get_lnames().front();
            const bool flag = opt->get_type_size_max() == 0 || opt->get_expected_max() == 0;
            if (opt->count() > 0)
            {
                const auto res = opt->reduced_results();
                if (flag)
                {
                    p[name] = true;
                }
                else if (res.size() == 1)
                {
                    p[name] = res.front();
                }
                else
                {
                    p[name] = res;
                }
            }
            else if (flag)
            {
                p[name] = false;
            }
            else if (!opt->get_default_str().empty())
            {
                p[name] = opt->get_default_str();
            }
            else
            {
                p[name] = nullptr;
            }
        }
    };
    add(app);
    if (sub)
    {
        add(*sub);
    }
    return p;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    const auto start = std::chrono::steady_clock::now();
    CLI::App app{"Neutral-meson oscillations under CSL collapse noise and decoherence models", "cslmeson"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(CSLMESON_VERSION));

    Globals g;
    app.add_option("--config", g.config, "Particle/CSL configuration JSON (default: built-in)");
    app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
    app.add_option("--out", g.out, "Output file (default: stdout)");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

    RatesOptions rates;
    auto* rates_cmd = app.add_subcommand("rates", "CSL damping rates for every species");
    rates_cmd->add_option("--preset", rates.preset, "CSL parameter preset")->capture_default_str();
    rates_cmd->add_option("--species", rates.species, "Restrict to these species");
    rates_cmd->add_option("--momentum", rates.momentum, "Momentum for the relativistic column (MeV/c)")
        ->capture_default_str();

    SingleOptions single;
    auto* single_cmd = app.add_subcommand("single", "Single-meson flavor probabilities versus time");
    single_cmd->add_option("--species", single.species, "Species name")->capture_default_str();
    single.model.add_to(single_cmd, false);
    single_cmd->add_option("--t-min", single.t_min, "First time (s)")->capture_default_str();
    single_cmd->add_option("--t-max", single.t_max, "Last time (s); default 10 reference lifetimes");
    single_cmd->add_option("--n", single.n, "Number of time points")->capture_default_str();

    JointOptions joint;
    auto* joint_cmd = app.add_subcommand("joint", "Joint flavor probabilities of an entangled pair");
    joint_cmd->add_option("--species", joint.species, "Species name")->capture_default_str();
    joint_cmd->add_option("--state", joint.state, "Initial pair state")
        ->check(CLI::IsMember({"psi-minus"}))
        ->capture_default_str();
    joint.model.add_to(joint_cmd, true);
    joint_cmd->add_option("--tl-max", joint.tl_max, "Last left time (s); default 5 reference lifetimes");
    joint_cmd->add_option("--tr-max", joint.tr_max, "Last right time (s); default 5 reference lifetimes");
    joint_cmd->add_option("--n-left", joint.n_left, "Left grid points")->capture_default_str();
    joint_cmd->add_option("--n-right", joint.n_right, "Right grid points")->capture_default_str();
    joint_cmd->add_flag("--diagonal", joint.diagonal, "Only t_left = t_right");

    McOptions mc;
    auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo check of the damping law");
    mc_cmd->add_option("--kernel", mc.kernel, "white or exp:TAU")->capture_default_str();
    mc_cmd->add_option("--exponent", mc.exponent, "Coupling product (sqrt gamma_j - sqrt gamma_k)^2 F0 t")->capture_default_str();
    mc_cmd->add_option("--t", mc.t, "Evolution time")->capture_default_str();
    mc_cmd->add_option("--n-traj", mc.n_traj, "Trajectories")->capture_default_str();
    mc_cmd->add_option("--n-steps", mc.n_steps, "Steps (0: 10 for white, 20 per tau for exp)")
        ->capture_default_str();
    mc_cmd->add_option("--threads", mc.threads, "Worker threads")->capture_default_str();
    mc_cmd->add_option("--gamma-j", mc.gamma_j, "Coupling gamma_j (overrides --exponent)");
    mc_cmd->add_option("--gamma-k", mc.gamma_k, "Coupling gamma_k")->capture_default_str();
    mc_cmd->add_option("--f0", mc.f0, "Noise power F0")->capture_default_str();
    mc_cmd->add_option("--sweep", mc.sweep, "Halve dt this many times (>= 3) instead of one run");

    FitOptions fit;
    auto* fit_cmd = app.add_subcommand("fit", "Fit zeta to an event file or to generated events");
    fit_cmd->add_option("--species", fit.species, "Species name")->capture_default_str();
    fit_cmd->add_option("--events", fit.events, "Event CSV to fit");
    fit_cmd->add_option("--zeta-true", fit.zeta_true, "Generator zeta")->capture_default_str();
    fit_cmd->add_option("--n", fit.n, "Generated events")->capture_default_str();
    fit_cmd->add_option("--t-max", fit.t_max, "Generator time range (s); 0 for 5 reference lifetimes")
        ->capture_default_str();
    fit_cmd->add_option("--cells", fit.cells, "Generator time cells")->capture_default_str();
    fit_cmd->add_flag("--equal-times", fit.equal_times, "Generate t_right = t_left");
    fit_cmd->add_option("--cl", fit.cl, "Confidence level")->capture_default_str();
    fit_cmd->add_option("--t-min", fit.t_min, "Convert zeta to a rate with this minimum time (s)");
    fit_cmd->add_option("--write-events", fit.write_events, "Also write the events to this CSV");

    OverlapOptions overlap;
    auto* overlap_cmd = app.add_subcommand("overlap", "Cross-term suppression for separating wave packets");
    overlap_cmd->add_option("--sigma", overlap.sigma, "Packet width (cm)")->capture_default_str();
    overlap_cmd->add_option("--r-c", overlap.r_c, "Correlation length (cm); default from --preset");
    overlap_cmd->add_option("--preset", overlap.preset, "CSL parameter preset")->capture_default_str();
    overlap_cmd->add_option("--beta", overlap.beta, "Speed of each packet over c")->capture_default_str();
    overlap_cmd->add_option("--d0", overlap.d0, "Initial separation (cm)")->capture_default_str();
    overlap_cmd->add_option("--t-max", overlap.t_max, "Last time (s)")->capture_default_str();
    overlap_cmd->add_option("--n", overlap.n, "Time points")->capture_default_str();
    overlap_cmd->add_option("--dims", overlap.dims, "1 or 3")->check(CLI::IsMember({1, 3}))->capture_default_str();

    DiagOptions diag;
    auto* diag_cmd = app.add_subcommand("diag", "Momentum-spread and phase-magnitude diagnostics");
    diag_cmd->add_option("--species", diag.species, "Species name")->capture_default_str();
    diag_cmd->add_option("--preset", diag.preset, "CSL parameter preset")->capture_default_str();
    diag_cmd->add_option("--t", diag.t, "Evaluation time (s)")->capture_default_str();

    try
    {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    const CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    const bool record_command = name == "mc" || name == "fit";
    const std::string format = g.format.empty() ? (record_command ? "json" : "csv") : g.format;

    try
    {
        const Context ctx = load_context(g);
        Table table;
        if (name == "rates")
            table = cmd_rates(ctx, rates);
        else if (name == "single")
            table = cmd_single(ctx, single);
        else if (name == "joint")
            table = cmd_joint(ctx, joint);
        else if (name == "mc")
            table = cmd_mc(mc, g.seed);
        else if (name == "fit")
            table = cmd_fit(ctx, fit, g.seed);
        else if (name == "overlap")
            table = cmd_overlap(ctx, overlap);
        else
            table = cmd_diag(ctx, diag);

        for (const auto& w : ctx.registry.warnings())
        {
            err << "warning: " << w << '\n';
        }

        std::ostringstream data;
        render(table, format, data);

        ordered_json manifest;
        manifest["command"] = name;
        manifest["parameters"] = parameter_echo(app, sub);
        manifest["config_hash"] = "fnv1a64:" + hex64(fnv1a64(ctx.config_text));
        manifest["seed"] = g.seed;
        manifest["tool_version"] = CSLMESON_VERSION;
        manifest["wall_clock_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        if (g.out.empty())
        {
            out << data.str();
            err << manifest.dump(2) << '\n';
        }
        else
        {
            std::ofstream f(g.out, std::ios::binary);
            std::ofstream m(g.out + ".manifest.json", std::ios::binary);
            if (!f || !m)
            {
                throw ConfigError("cannot write output '" + g.out + "'");
            }
            f << data.str();
            m << manifest.dump(2) << '\n';
        }
        return kOk;
    }
    catch (const ConfigError& e)
    {
        err << "config error: " << e.what() << '\n';
        return kConfig;
    }
    catch (const DomainError& e)
    {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    }
    catch (const NumericError& e)
    {
        err << "numeric error: " << e.what() << '\n';
        return kNumeric;
    }
    catch (const std::exception& e)
    {
        err << "error: " << e.what() << '\n';
        return kNumeric;
    }
}

} // namespace cslmeson::cli
