#pragma once

#include <functional>

#include "lcnf/mesh.hpp"
#include "lcnf/models.hpp"
#include "lcnf/types.hpp"

namespace lcnf {

// Adaptive 8th-order Runge-Kutta integration (Fehlberg 7/8 pair).
Vec integrate_to(const CompiledRhs& f, Vec x0, double t0, double t1,
                 double tol = 1e-12);

// States at the requested times (monotone increasing, times[0] >= t0).
std::vector<Vec> integrate_samples(const CompiledRhs& f, Vec x0, double t0,
                                   const std::vector<double>& times,
                                   double tol = 1e-12);

struct CycleGuess {
    Vec anchor;       // point on (near) the cycle
    double period;    // estimated period
    double closure;   // |x(period) - anchor| relative miss
};

// Runs a transient, then detects returns to a Poincare section through the
// trajectory point to estimate a nearby periodic orbit. max_loops bounds the
// number of section returns examined (subharmonics).
CycleGuess find_cycle_guess(const CompiledRhs& f, Vec x0, double t_transient,
                            double t_max, int max_loops = 12, double tol = 1e-10);

// Fundamental matrix solution over one period of the variational equation
// along the given profile: dY/dt = A(u0(t)) Y, Y(0) = I.
Mat monodromy_by_integration(const CompiledRhs& f, const MeshFunction& profile,
                             double T, double tol = 1e-12);

// Flow map and its state derivative over [0, T] from x0.
std::pair<Vec, Mat> flow_with_jacobian(const CompiledRhs& f, const Vec& x0, double T,
                                       double tol = 1e-12);

}  // namespace lcnf
