#include "lcnf/pipeline.hpp"

#include <cmath>

#include "lcnf/sim.hpp"

namespace lcnf {

LocateOptions preset_locate(const std::string& model, BifKind kind, double v1, double v2) {
    (void)kind;
    LocateOptions o;
    if (model == "laser") {
        Vec x0(9);
        x0 << 1.0, 0.5, 0.2, 0.05, 0.05, 0.05, 0.05, 0.05, 0.05;
        o.seed_state = x0;
        o.t_transient = 3000.0;
        o.t_max = 30000.0;
        o.walk_steps = 4;
        o.seed_params = v2 < 0.0 ? std::make_pair(3.45, -1.60)
                                 : std::make_pair(4.80, 1.64);
    } else if (model == "preypredator") {
        Vec x0(6);
        x0 << 0.6, 0.2, 0.6, 0.2, 1.0, 0.0;
        o.seed_state = x0;
        o.t_transient = 800.0;
        o.t_max = 8000.0;
        o.walk_steps = 4;
        o.seed_params = v1 > 0.2 ? std::make_pair(v1, 0.45) : std::make_pair(v1, 0.48);
    } else if (model == "vibration") {
        Vec x0(6);
        x0 << 0.1, 0.1, 0.0, 0.0, 1.0, 0.0;
        o.seed_state = x0;
        o.t_transient = 1500.0;
        o.t_max = 15000.0;
        o.walk_steps = 6;
        o.seed_params = std::make_pair(v1, 0.35);
    }
    return o;
}

PeriodicOrbit embedding_start_orbit(const OdeSystem& sys, int ntst, int ncol) {
    auto mesh = Mesh::uniform(ntst, ncol);
    const double T = 2.0 * M_PI;
    MeshFunction prof(mesh, T, sys.dim);
    for (int idx = 0; idx < mesh->nPoints(); ++idx) {
        const double tau = T * mesh->repSigma(idx);
        prof.values()(0, idx) = std::cos(tau);
        prof.values()(1, idx) = std::sin(tau);
    }
    auto rhs = sys.compile(sys.default_params);
    return newton_cycle(*rhs, sys.default_params, prof, T);
}

PeriodicOrbit forced_cycle(const CompiledRhs& rhs, const Vec& params,
                           std::shared_ptr<const Mesh> mesh, double T_force, int fi,
                           const Vec& x_init, const NewtonOptions& opts) {
    const int n = rhs.dim();
    Vec x0 = x_init;
    x0[fi] = 1.0;
    x0[fi + 1] = 0.0;

    // Reduced unknowns: all coordinates except the forcing pair, which
    // returns to (1,0) after one forcing period by construction.
    std::vector<int> free;
    for (int i = 0; i < n; ++i)
        if (i != fi && i != fi + 1) free.push_back(i);
    const int m = static_cast<int>(free.size());

    for (int it = 0; it < 40; ++it) {
        auto [xT, M] = flow_with_jacobian(rhs, x0, T_force, 1e-12);
        Vec r(m);
        for (int i = 0; i < m; ++i) r[i] = xT[free[i]] - x0[free[i]];
        if (r.norm() < 1e-12 * std::max(1.0, x0.norm())) break;
        Mat J(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                J(i, j) = M(free[i], free[j]) - (i == j ? 1.0 : 0.0);
        const Vec dx = J.partialPivLu().solve(r);
        double lambda = 1.0;
        if (dx.norm() > 0.5 * (1.0 + x0.norm())) lambda = 0.5 * (1.0 + x0.norm()) / dx.norm();
        for (int i = 0; i < m; ++i) x0[free[i]] -= lambda * dx[i];
        if (it == 39) throw NoConvergence("forced cycle shooting did not converge");
    }

    std::vector<double> times(mesh->nPoints());
    for (int i = 0; i < mesh->nPoints(); ++i) times[i] = T_force * mesh->repSigma(i);
    auto samples = integrate_samples(rhs, x0, 0.0, times);
    MeshFunction prof(mesh, T_force, n);
    for (int i = 0; i < mesh->nPoints(); ++i) prof.values().col(i) = samples[i].cast<Cplx>();
    prof.values().col(mesh->nPoints() - 1) = prof.values().col(0);
    return newton_cycle(rhs, params, prof, T_force, opts);
}

Codim2Point locate_model(const OdeSystem& sys, BifKind kind, const std::string& p1,
                         double v1, const std::string& p2, double v2,
                         LocateOptions opts) {
    if (!opts.start_orbit) {
        if (sys.name.rfind("nf_embed", 0) == 0) {
            opts.start_orbit = embedding_start_orbit(sys, opts.ntst, opts.ncol);
        } else if (sys.name == "preypredator" || sys.name == "vibration") {
            Vec params = sys.default_params;
            params[sys.paramIndex(p1)] = v1;
            params[sys.paramIndex(p2)] = v2;
            auto rhs = sys.compile(params);
            Vec xi = opts.seed_state ? *opts.seed_state : Vec::Constant(sys.dim, 0.2);
            // Rough averaging transient keeps the shooting in a sane basin.
            xi = integrate_to(*rhs, xi, 0.0, 50.0, 1e-10);
            const double Tf = sys.name == "preypredator"
                                  ? 2.0 * M_PI
                                  : 2.0 * M_PI / params[sys.paramIndex("eta")];
            opts.start_orbit = forced_cycle(*rhs, params, Mesh::uniform(opts.ntst, opts.ncol),
                                            Tf, 4, xi, opts.newton);
        }
    }
    return locate(sys, kind, p1, v1, p2, v2, opts);
}

AnalysisReport analyze_point(const OdeSystem& sys, const Codim2Point& pt,
                             bool high_order, const NfOptions& nf_opts) {
    AnalysisReport ar;
    ar.point = pt;
    ar.report = normal_form(sys, pt, high_order, nf_opts);
    ar.unfolding = derive_unfolding(ar.report);
    ar.verdict = classify(ar.unfolding);
    return ar;
}

void verify_point(const OdeSystem& sys, const Codim2Point& pt, double tol) {
    auto rhs = sys.compile(pt.orbit.params);
    PeriodicOrbit orbit;
    try {
        orbit = newton_cycle(*rhs, pt.orbit.params, pt.orbit.profile, pt.orbit.period);
    } catch (const NoConvergence&) {
        throw CriticalityCheckFailed("stored orbit does not converge to a cycle");
    }
    FloquetSpectrum sp = floquet(*rhs, orbit, tol);
    const Vec g = codim2_tests(pt.kind, sp).cwiseAbs();
    if (g.maxCoeff() > tol)
        throw CriticalityCheckFailed("criticality residual " + std::to_string(g.maxCoeff()) +
                                     " above " + std::to_string(tol));
}

}  // namespace lcnf
