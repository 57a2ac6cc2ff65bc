#pragma once

#include <optional>
#include <string>

#include "lcnf/cycle.hpp"
#include "lcnf/models.hpp"
#include "lcnf/types.hpp"

namespace lcnf {

struct Codim2Point {
    BifKind kind = BifKind::LPNS;
    std::string model;
    PeriodicOrbit orbit;
    std::vector<std::string> free_params;
    double omega1 = 0.0;  // theta / T, theta = Arg(mu_NS) in (0, pi)
    double omega2 = 0.0;  // second frequency (NSNS only), omega1 > omega2
    Vec test_residuals;
    std::vector<Cplx> multipliers;
};

struct LocateOptions {
    int ntst = 40;
    int ncol = 4;
    double locate_tol = 1e-8;
    double criticality_tol = 1e-6;
    double guard_tol = 1e-3;
    int max_iter = 60;
    NewtonOptions newton;
    // Seeding controls: explicit starting orbit wins, otherwise simulate
    // from seed_state (possibly at seed_params, walking the two free
    // parameters toward their initial values in walk_steps stages).
    std::optional<PeriodicOrbit> start_orbit;
    std::optional<Vec> seed_state;
    std::optional<std::pair<double, double>> seed_params;
    int walk_steps = 1;
    double t_transient = 600.0;
    double t_max = 5000.0;
};

// Two multiplier test functions, both zero at the codim-2 point.
Vec codim2_tests(BifKind kind, const FloquetSpectrum& sp);

// Finds the codim-2 point in the two named parameters by Broyden iteration
// on the multiplier test functions; every evaluation is a Newton-converged
// cycle plus a Floquet computation.
Codim2Point locate(const OdeSystem& sys, BifKind kind, const std::string& p1,
                   double v1, const std::string& p2, double v2,
                   const LocateOptions& opts = {});

// Validates criticality and non-resonance of an already-critical cycle and
// assembles the Codim2Point (used for systems built exactly at criticality).
Codim2Point make_codim2_point(const OdeSystem& sys, BifKind kind,
                              const PeriodicOrbit& orbit,
                              double criticality_tol = 1e-6,
                              double guard_tol = 1e-3);

// Greedy nearest-neighbor pairing of two spectra in the complex plane;
// result[i] is the index in `current` matched to previous[i].
std::vector<int> multiplier_matching(const std::vector<Cplx>& previous,
                                     const std::vector<Cplx>& current);

void check_nonresonance(BifKind kind, double theta1, double theta2, double tol);

}  // namespace lcnf
