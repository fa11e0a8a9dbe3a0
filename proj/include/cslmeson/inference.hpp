#pragma once

// Synthetic two-time flavor events from the zeta model and a maximum
// likelihood fit of zeta using the flavor outcome conditional on the
// observed decay times.

#include "cslmeson/entanglement.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace cslmeson
{

struct EventRecord
{
    double t_left = 0.0;  // s
    double t_right = 0.0; // s
    Flavor flavor_left = Flavor::particle;
    Flavor flavor_right = Flavor::particle;
};

/// Decay times are drawn cell by cell on [0, t_max] (cell midpoints), each
/// side independently with weight (e^{-G_l t} + e^{-G_h t}) / 2.
struct TimeSampling
{
    double t_max_s = 0.0; // 0 means 5 reference lifetimes
    std::size_t n_cells = 200;
    bool equal_times = false; // force t_right = t_left
};

std::vector<double> sampling_grid(const MesonSpecies& species, const TimeSampling& sampling);

std::vector<EventRecord> generate_events(const MesonSpecies& species, double zeta_true, std::size_t n,
                                         std::uint64_t seed, const TimeSampling& sampling = {},
                                         const Kinematics& kin = {});

struct FitResult
{
    double zeta_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
    double confidence_level = 0.9;
    double log_likelihood = 0.0;
    std::size_t n_events = 0;
    bool converged = false;
};

/// Log likelihood of the events at zeta, with probabilities floored at
/// 1e-300.
double log_likelihood(const std::vector<EventRecord>& events, const MesonSpecies& species, double zeta,
                      const Kinematics& kin = {});

/// Golden-section maximum on [0, 1] to 1e-6. The interval collects zeta with
/// 2 (logL_max - logL) <= chi2_1 quantile at `cl` (2.706 at 90%); an MLE on
/// the boundary gives a one-sided interval. Requires >= 100 events that are
/// not all identical.
FitResult fit_zeta(const std::vector<EventRecord>& events, const MesonSpecies& species, double cl = 0.9,
                   const Kinematics& kin = {});

/// -ln(1 - zeta) / t_min.
double zeta_to_lambda(double zeta, double t_min_s);
/// 1 - exp(-lambda t_min).
double lambda_to_zeta(double lambda, double t_min_s);

/// lambda hbar / Gamma_ref, with the larger width as reference.
double lambda_ratio(double lambda, const MesonSpecies& species);

/// CSV with header t_left_s,t_right_s,flavor_left,flavor_right; flavors P/A.
void write_events_csv(std::ostream& out, const std::vector<EventRecord>& events);
std::vector<EventRecord> read_events_csv(std::string_view text);

} // namespace cslmeson
