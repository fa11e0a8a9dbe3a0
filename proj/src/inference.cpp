#include "cslmeson/inference.hpp"

#include "cslmeson/error.hpp"
#include "cslmeson/random.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>

namespace cslmeson
{
namespace
{

constexpr double kLogFloor = 1e-300;
constexpr double kFitTol = 1e-6;
constexpr int kMaxIterations = 200;
constexpr double kDefaultLifetimes = 5.0;
constexpr char kCsvHeader[] = "t_left_s,t_right_s,flavor_left,flavor_right";

constexpr std::array<std::pair<Flavor, Flavor>, 4> kOutcomes{{{Flavor::particle, Flavor::particle},
                                                              {Flavor::particle, Flavor::antiparticle},
                                                              {Flavor::antiparticle, Flavor::particle},
                                                              {Flavor::antiparticle, Flavor::antiparticle}}};

// Per-event pieces of p(zeta) = (1 + sign * ratio * (1 - zeta)) / 4.
struct EventTerm
{
    double sign = 1.0;
    double ratio = 0.0;
};

std::vector<EventTerm> event_terms(const std::vector<EventRecord>& events, const MesonSpecies& species,
                                   const Kinematics& kin)
{
    std::vector<EventTerm> terms;
    terms.reserve(events.size());
    for (const auto& e : events)
    {
        const auto it = interference_terms(species, e.t_left, e.t_right, kin);
        if (!(it.A > 0.0))
        {
            throw NumericError("event decay envelope underflows");
        }
        terms.push_back({e.flavor_left == e.flavor_right ? -1.0 : 1.0, 2.0 * it.C / it.A});
    }
    return terms;
}

double total_log_likelihood(const std::vector<EventTerm>& terms, double zeta)
{
    double sum = 0.0;
    for (const auto& t : terms)
    {
        const double p = 0.25 * (1.0 + t.sign * t.ratio * (1.0 - zeta));
        sum += std::log(std::max(p, kLogFloor));
    }
    return sum;
}

char flavor_code(Flavor f) { return f == Flavor::particle ? 'P' : 'A'; }

Flavor parse_flavor(const std::string& s, std::size_t line_no)
{
    if (s == "P")
    {
        return Flavor::particle;
    }
    if (s == "A")
    {
        return Flavor::antiparticle;
    }
    throw ConfigError("event CSV line " + std::to_string(line_no) + ": flavor must be P or A");
}

} // namespace

std::vector<double> sampling_grid(const MesonSpecies& species, const TimeSampling& sampling)
{
    if (sampling.n_cells == 0)
    {
        throw DomainError("time sampling: empty grid");
    }
    double t_max = sampling.t_max_s;
    if (t_max == 0.0)
    {
        t_max = kDefaultLifetimes * kConstants.hbar_mev_s / species.reference_width();
    }
    if (!(t_max > 0.0) || !std::isfinite(t_max))
    {
        throw DomainError("time sampling: t_max must be positive");
    }
    std::vector<double> grid(sampling.n_cells);
    const double cell = t_max / static_cast<double>(sampling.n_cells);
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
        grid[i] = (static_cast<double>(i) + 0.5) * cell;
    }
    return grid;
}

std::vector<EventRecord> generate_events(const MesonSpecies& species, double zeta_true, std::size_t n,
                                         std::uint64_t seed, const TimeSampling& sampling, const Kinematics& kin)
{
    if (!(zeta_true >= 0.0 && zeta_true <= 1.0))
    {
        throw DomainError("generate_events: zeta must lie in [0, 1]");
    }
    if (n == 0)
    {
        throw DomainError("generate_events: need at least one event");
    }
    const auto grid = sampling_grid(species, sampling);
    const double gl = kin.include_decay ? species.decay_rate(Eigenstate::light) : 0.0;
    const double gh = kin.include_decay ? species.decay_rate(Eigenstate::heavy) : 0.0;
    std::vector<double> cdf(grid.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
        acc += 0.5 * (std::exp(-gl * grid[i]) + std::exp(-gh * grid[i]));
        cdf[i] = acc;
    }
    if (!(acc > 0.0))
    {
        throw NumericError("generate_events: time weights underflow");
    }
    for (double& c : cdf)
    {
        c /= acc;
    }
    auto draw_time = [&](double u) {
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), grid.size() - 1);
        return grid[idx];
    };

    std::vector<EventRecord> events(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        CounterStream rng(seed, i);
        EventRecord& e = events[i];
        e.t_left = draw_time(rng.uniform());
        e.t_right = sampling.equal_times ? e.t_left : draw_time(rng.uniform());
        const double u = rng.uniform();
        double cumulative = 0.0;
        std::size_t pick = kOutcomes.size() - 1;
        for (std::size_t o = 0; o < kOutcomes.size(); ++o)
        {
            cumulative += zeta_conditional_probability(species, e.t_left, e.t_right, kOutcomes[o].first,
                                                       kOutcomes[o].second, zeta_true, kin);
            if (u < cumulative)
            {
                pick = o;
                break;
            }
        }
        e.flavor_left = kOutcomes[pick].first;
        e.flavor_right = kOutcomes[pick].second;
    }
    return events;
}

double log_likelihood(const std::vector<EventRecord>& events, const MesonSpecies& species, double zeta,
                      const Kinematics& kin)
{
    if (!(zeta >= 0.0 && zeta <= 1.0))
    {
        throw DomainError("log_likelihood: zeta must lie in [0, 1]");
    }
    return total_log_likelihood(event_terms(events, species, kin), zeta);
}

FitResult fit_zeta(const std::vector<EventRecord>& events, const MesonSpecies& species, double cl,
                   const Kinematics& kin)
{
    if (events.size() < 100)
    {
        throw DomainError("fit_zeta: need at least 100 events");
    }
    if (!(cl > 0.0 && cl < 1.0))
    {
        throw DomainError("fit_zeta: confidence level must lie in (0, 1)");
    }
    const auto& first = events.front();
    const bool degenerate = std::all_of(events.begin(), events.end(), [&](const EventRecord& e) {
        return e.t_left == first.t_left && e.t_right == first.t_right && e.flavor_left == first.flavor_left &&
               e.flavor_right == first.flavor_right;
    });
    if (degenerate)
    {
        throw DomainError("fit_zeta: degenerate dataset (all events identical)");
    }

    const auto terms = event_terms(events, species, kin);
    auto ll = [&](double z) { return total_log_likelihood(terms, z); };

    FitResult r;
    r.n_events = events.size();
    r.confidence_level = cl;

    // The log likelihood is concave in zeta.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 0.0;
    double b = 1.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = ll(c);
    double fd = ll(d);
    int iter = 0;
    while (b - a > kFitTol && iter < kMaxIterations)
    {
        if (fc >= fd)
        {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = ll(c);
        }
        else
        {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = ll(d);
        }
        ++iter;
    }
    r.converged = b - a <= kFitTol;
    double best = 0.5 * (a + b);
    double best_ll = ll(best);
    for (double edge : {0.0, 1.0})
    {
        const double v = ll(edge);
        if (v >= best_ll)
        {
            best = edge;
            best_ll = v;
        }
    }
    r.zeta_hat = best;
    r.log_likelihood = best_ll;

    const double threshold = boost::math::quantile(boost::math::chi_squared_distribution<double>(1.0), cl);
    const double target = best_ll - 0.5 * threshold;
    auto excess = [&](double z) { return ll(z) - target; };
    boost::math::tools::eps_tolerance<double> tol(40);
    if (best == 0.0 || excess(0.0) >= 0.0)
    {
        r.ci_low = 0.0;
    }
    else
    {
        const auto root = boost::math::tools::bisect(excess, 0.0, best, tol);
        r.ci_low = 0.5 * (root.first + root.second);
    }
    if (best == 1.0 || excess(1.0) >= 0.0)
    {
        r.ci_high = 1.0;
    }
    else
    {
        const auto root = boost::math::tools::bisect(excess, best, 1.0, tol);
        r.ci_high = 0.5 * (root.first + root.second);
    }
    r.ci_low = std::min(r.ci_low, r.zeta_hat);
    r.ci_high = std::max(r.ci_high, r.zeta_hat);
    return r;
}

double zeta_to_lambda(double zeta, double t_min_s)
{
    if (!(zeta >= 0.0 && zeta < 1.0))
    {
        throw DomainError("zeta_to_lambda: zeta must lie in [0, 1)");
    }
    if (!(t_min_s > 0.0))
    {
        throw DomainError("zeta_to_lambda: t_min must be positive");
    }
    return -std::log1p(-zeta) / t_min_s;
}

double lambda_to_zeta(double lambda, double t_min_s)
{
    if (!(lambda >= 0.0) || !(t_min_s > 0.0))
    {
        throw DomainError("lambda_to_zeta: need lambda >= 0 and t_min > 0");
    }
    return -std::expm1(-lambda * t_min_s);
}

double lambda_ratio(double lambda, const MesonSpecies& species)
{
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
    {
        throw DomainError("lambda_ratio: lambda must be non-negative");
    }
    return lambda * kConstants.hbar_mev_s / species.reference_width();
}

void write_events_csv(std::ostream& out, const std::vector<EventRecord>& events)
{
    out << kCsvHeader << '\n';
    char buf[96];
    for (const auto& e : events)
    {
        std::snprintf(buf, sizeof buf, "%.16e,%.16e,%c,%c\n", e.t_left, e.t_right, flavor_code(e.flavor_left),
                      flavor_code(e.flavor_right));
        out << buf;
    }
}

std::vector<EventRecord> read_events_csv(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line))
    {
        throw ConfigError("event CSV: missing header");
    }
    if (!line.empty() && line.back() == '\r')
    {
        line.pop_back();
    }
    if (line != kCsvHeader)
    {
        throw ConfigError(std::string("event CSV: header must be ") + kCsvHeader);
    }
    std::vector<EventRecord> events;
    std::size_t line_no = 1;
    while (std::getline(in, line))
    {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
        {
            line.pop_back();
        }
        if (line.empty())
        {
            continue;
        }
        std::vector<std::string> cols;
        std::istringstream fields(line);
        std::string col;
        while (std::getline(fields, col, ','))
        {
            cols.push_back(col);
        }
        if (cols.size() != 4)
        {
            throw ConfigError("event CSV line " + std::to_string(line_no) + ": expected four columns");
        }
        EventRecord e;
        try
        {
            e.t_left = std::stod(cols[0]);
            e.t_right = std::stod(cols[1]);
        }
        catch (const std::exception&)
        {
            throw ConfigError("event CSV line " + std::to_string(line_no) + ": times are not numeric");
        }
        if (!(e.t_left >= 0.0) || !(e.t_right >= 0.0))
        {
            throw ConfigError("event CSV line " + std::to_string(line_no) + ": negative time");
        }
        e.flavor_left = parse_flavor(cols[2], line_no);
        e.flavor_right = parse_flavor(cols[3], line_no);
        events.push_back(e);
    }
    return events;
}

} // namespace cslmeson
