#pragma once

#include "lcnf/models.hpp"
#include "lcnf/types.hpp"

namespace lcnf {

struct LyapunovOptions {
    double t_transient = 1e4;
    double t_total = 5e4;
    double renorm_dt = 1.0;
    double dt = 0.02;  // RK4 step inside renormalization windows
    double zero_threshold = 1e-2;
    double divergence_bound = 1e6;
};

struct LyapunovResult {
    Vec exponents;     // sorted descending
    double trace_avg;  // time average of div f along the trajectory
    Vec final_state;
    int zeroCount(double threshold) const;
};

// Benettin QR-reorthonormalized tangent integration.
LyapunovResult lyapunov_spectrum(const CompiledRhs& f, const Vec& x0,
                                 const LyapunovOptions& opts = {});

struct LyapunovSweep {
    std::string model;
    Vec base_params;
    std::string sweep_param;
    double lo = 0.0, hi = 0.0;
    int samples = 0;
    bool increasing = true;  // attractor-following direction
    Vec x0;
    LyapunovOptions opts;
};

struct SweepResult {
    std::vector<double> param;
    std::vector<Vec> exponents;
    std::vector<int> zero_count;
    // Parameter midpoints where the zero count changes.
    std::vector<double> transitions;
};

SweepResult lyapunov_sweep(const OdeSystem& sys, const LyapunovSweep& spec);

}  // namespace lcnf
