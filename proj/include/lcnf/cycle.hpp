#pragma once

#include "lcnf/mesh.hpp"
#include "lcnf/models.hpp"
#include "lcnf/types.hpp"

namespace lcnf {

struct PeriodicOrbit {
    MeshFunction profile;  // real-valued
    double period = 0.0;
    Vec params;
    double converged_residual = 0.0;

    Vec stateAt(double tau) const { return profile.interpolate(tau).real(); }
};

struct FloquetSpectrum {
    std::vector<Cplx> multipliers;
    int trivial_index = -1;  // multiplier closest to 1
    double criticality_tol = 1e-6;

    std::vector<int> criticalIndices() const;
    Cplx trivial() const { return multipliers[trivial_index]; }
};

struct NewtonOptions {
    double tol = 1e-10;
    int max_iter = 20;
};

// Converges a periodic orbit by Newton on the collocation system with the
// integral phase condition anchored at the initial guess profile.
PeriodicOrbit newton_cycle(const CompiledRhs& rhs, const Vec& params,
                           const MeshFunction& guess_profile, double guess_period,
                           const NewtonOptions& opts = {});

// Convenience: seeds the guess by time integration from x0 (transient plus
// Poincare return detection), then converges.
PeriodicOrbit cycle_from_simulation(const CompiledRhs& rhs, const Vec& params,
                                    std::shared_ptr<const Mesh> mesh, const Vec& x0,
                                    double t_transient, double t_max,
                                    const NewtonOptions& opts = {});

// Floquet multipliers from the collocation discretization: per-interval
// condensation of the linearized system into the n-by-n period map.
FloquetSpectrum floquet(const CompiledRhs& rhs, const PeriodicOrbit& orbit,
                        double criticality_tol = 1e-6);

// Interpolates the orbit onto a new mesh and re-converges.
PeriodicOrbit remesh_orbit(const CompiledRhs& rhs, const PeriodicOrbit& orbit,
                           std::shared_ptr<const Mesh> mesh,
                           const NewtonOptions& opts = {});

// Breakpoints equidistributing the arclength of the profile (for the
// optional adapted mesh).
std::vector<double> arclength_breaks(const PeriodicOrbit& orbit, int ntst);

}  // namespace lcnf
