#pragma once

#include "lcnf/json_io.hpp"

namespace lcnf {

// Seeding presets for the built-in models: a state in the basin of a stable
// cycle and a parameter point where that cycle is easy to reach, from which
// the locator walks to the requested initial point.
LocateOptions preset_locate(const std::string& model, BifKind kind, double v1, double v2);

// Exact starting orbit for the synthetic embeddings (unit circle).
PeriodicOrbit embedding_start_orbit(const OdeSystem& sys, int ntst, int ncol);

// Period-1 cycle of a periodically forced system by shooting on the return
// map over the forcing period; converges to saddle cycles as well. The
// forcing oscillator occupies coordinates (fi, fi+1) and is started at
// (1, 0); x_init seeds the remaining coordinates.
PeriodicOrbit forced_cycle(const CompiledRhs& rhs, const Vec& params,
                           std::shared_ptr<const Mesh> mesh, double T_force, int fi,
                           const Vec& x_init, const NewtonOptions& opts = {});

// locate() with embedding-aware seeding.
Codim2Point locate_model(const OdeSystem& sys, BifKind kind, const std::string& p1,
                         double v1, const std::string& p2, double v2,
                         LocateOptions opts);

// Bundle construction, coefficients, unfolding quantities, verdict.
AnalysisReport analyze_point(const OdeSystem& sys, const Codim2Point& pt,
                             bool high_order, const NfOptions& nf_opts = {});

// Validates that a (possibly re-read) point still satisfies the criticality
// tests; throws CriticalityCheckFailed otherwise.
void verify_point(const OdeSystem& sys, const Codim2Point& pt, double tol = 1e-6);

}  // namespace lcnf
