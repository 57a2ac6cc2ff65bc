#include "lcnf/locator.hpp"

#include <cmath>
#include <iostream>

#include "lcnf/sim.hpp"

namespace lcnf {

namespace {

bool isRealMu(const Cplx& mu) { return std::abs(mu.imag()) < 1e-9 * (1.0 + std::abs(mu)); }

// Complex pair representative with positive imaginary part whose modulus is
// closest to 1, excluding angles below `minAngle`.
int nsPairIndex(const std::vector<Cplx>& mus, double minAngle, int exclude = -1) {
    int best = -1;
    double bestd = 1e30;
    for (size_t i = 0; i < mus.size(); ++i) {
        if (static_cast<int>(i) == exclude) continue;
        const Cplx mu = mus[i];
        if (mu.imag() <= 1e-9) continue;
        if (std::arg(mu) < minAngle || std::arg(mu) > M_PI - 1e-6) continue;
        const double d = std::abs(std::abs(mu) - 1.0);
        if (d < bestd) {
            bestd = d;
            best = static_cast<int>(i);
        }
    }
    return best;
}

}  // namespace

Vec codim2_tests(BifKind kind, const FloquetSpectrum& sp) {
    const auto& mus = sp.multipliers;
    Vec g(2);
    switch (kind) {
        case BifKind::LPNS: {
            // Fold test: second-closest-to-1 real multiplier; if the
            // near-unit pair went complex the imaginary part measures the
            // distance to the collision.
            int fold = -1;
            double bestd = 1e30;
            for (size_t i = 0; i < mus.size(); ++i) {
                if (static_cast<int>(i) == sp.trivial_index || !isRealMu(mus[i])) continue;
                const double d = std::abs(mus[i].real() - 1.0);
                if (d < bestd) {
                    bestd = d;
                    fold = static_cast<int>(i);
                }
            }
            if (isRealMu(mus[sp.trivial_index]) && fold >= 0 &&
                bestd < std::abs(mus[sp.trivial_index].imag()) + 0.5) {
                g[0] = mus[fold].real() - 1.0;
            } else {
                // Trivial pair collided and is complex.
                g[0] = std::abs(mus[sp.trivial_index].imag());
            }
            const int ns = nsPairIndex(mus, 0.3);
            if (ns < 0) throw NoConvergence("LPNS test: no Neimark-Sacker pair");
            g[1] = std::abs(mus[ns]) - 1.0;
            break;
        }
        case BifKind::PDNS: {
            int pd = -1;
            double bestd = 1e30;
            for (size_t i = 0; i < mus.size(); ++i) {
                if (!isRealMu(mus[i])) continue;
                const double d = std::abs(mus[i].real() + 1.0);
                if (d < bestd) {
                    bestd = d;
                    pd = static_cast<int>(i);
                }
            }
            if (pd < 0) throw NoConvergence("PDNS test: no real multiplier near -1");
            g[0] = mus[pd].real() + 1.0;
            const int ns = nsPairIndex(mus, 0.05);
            if (ns < 0) throw NoConvergence("PDNS test: no Neimark-Sacker pair");
            g[1] = std::abs(mus[ns]) - 1.0;
            break;
        }
        case BifKind::NSNS: {
            const int ns1 = nsPairIndex(mus, 0.02);
            const int ns2 = nsPairIndex(mus, 0.02, ns1);
            if (ns1 < 0 || ns2 < 0)
                throw NoConvergence("NSNS test: need two Neimark-Sacker pairs");
            // Order by angle, largest first.
            const int a = std::arg(mus[ns1]) > std::arg(mus[ns2]) ? ns1 : ns2;
            const int b = a == ns1 ? ns2 : ns1;
            g[0] = std::abs(mus[a]) - 1.0;
            g[1] = std::abs(mus[b]) - 1.0;
            break;
        }
    }
    return g;
}

void check_nonresonance(BifKind kind, double theta1, double theta2, double tol) {
    const int jmax = kind == BifKind::NSNS ? 6 : 4;
    auto checkTheta = [&](double th) {
        for (int j = 1; j <= jmax; ++j)
            if (std::abs(th - 2.0 * M_PI / j) < tol)
                throw ResonanceGuardTripped("theta within " + std::to_string(tol) +
                                            " of 2*pi/" + std::to_string(j));
    };
    checkTheta(theta1);
    if (kind == BifKind::NSNS) {
        checkTheta(theta2);
        static const int combos[][2] = {{1, 1}, {1, 2}, {2, 1}, {1, 3}, {3, 1}, {2, 2}};
        for (auto& c : combos)
            if (std::abs(c[0] * theta1 - c[1] * theta2) < tol)
                throw ResonanceGuardTripped("low-order resonance l*theta1 = j*theta2");
    }
}

std::vector<int> multiplier_matching(const std::vector<Cplx>& previous,
                                     const std::vector<Cplx>& current) {
    if (previous.size() != current.size())
        throw LcnfError("multiplier_matching: dimension mismatch");
    const int n = static_cast<int>(previous.size());
    std::vector<int> match(n, -1);
    std::vector<bool> usedPrev(n, false), usedCur(n, false);
    for (int step = 0; step < n; ++step) {
        double best = 1e300;
        int bi = -1, bj = -1;
        for (int i = 0; i < n; ++i) {
            if (usedPrev[i]) continue;
            for (int j = 0; j < n; ++j) {
                if (usedCur[j]) continue;
                const double d = std::abs(previous[i] - current[j]);
                if (d < best) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }
        }
        // Ambiguous when the winner has an equally good alternative target
        // with a genuinely different value.
        for (int j = 0; j < n; ++j) {
            if (usedCur[j] || j == bj) continue;
            const double d = std::abs(previous[bi] - current[j]);
            if (std::abs(d - best) < 1e-12 && std::abs(current[j] - current[bj]) > 1e-12)
                throw AmbiguousPairing("multiplier pairing tie within 1e-12");
        }
        usedPrev[bi] = usedCur[bj] = true;
        match[bi] = bj;
    }
    return match;
}

namespace {

void fillPoint(Codim2Point& pt, BifKind kind, const FloquetSpectrum& sp, double T,
               double guard_tol) {
    pt.multipliers = sp.multipliers;
    pt.test_residuals = codim2_tests(kind, sp).cwiseAbs();
    double th1 = 0.0, th2 = 0.0;
    if (kind == BifKind::NSNS) {
        const int ns1 = nsPairIndex(sp.multipliers, 0.02);
        const int ns2 = nsPairIndex(sp.multipliers, 0.02, ns1);
        th1 = std::arg(sp.multipliers[ns1]);
        th2 = std::arg(sp.multipliers[ns2]);
        if (th1 < th2) std::swap(th1, th2);
        pt.omega1 = th1 / T;
        pt.omega2 = th2 / T;
    } else {
        const int ns = nsPairIndex(sp.multipliers, kind == BifKind::LPNS ? 0.3 : 0.05);
        th1 = std::arg(sp.multipliers[ns]);
        pt.omega1 = th1 / T;
    }
    check_nonresonance(kind, th1, th2, guard_tol);
}

}  // namespace

Codim2Point make_codim2_point(const OdeSystem& sys, BifKind kind,
                              const PeriodicOrbit& orbit, double criticality_tol,
                              double guard_tol) {
    auto rhs = sys.compile(orbit.params);
    FloquetSpectrum sp = floquet(*rhs, orbit, criticality_tol);
    Codim2Point pt;
    pt.kind = kind;
    pt.model = sys.name;
    pt.orbit = orbit;
    fillPoint(pt, kind, sp, orbit.period, guard_tol);
    if (pt.test_residuals.maxCoeff() > criticality_tol)
        throw CriticalityCheckFailed("cycle is not at the codim-2 point (tests " +
                                     std::to_string(pt.test_residuals.maxCoeff()) + ")");
    return pt;
}

Codim2Point locate(const OdeSystem& sys, BifKind kind, const std::string& p1,
                   double v1, const std::string& p2, double v2,
                   const LocateOptions& opts) {
    const int i1 = sys.paramIndex(p1), i2 = sys.paramIndex(p2);
    auto mesh = Mesh::uniform(opts.ntst, opts.ncol);

    Vec params = sys.default_params;
    params[i1] = v1;
    params[i2] = v2;

    PeriodicOrbit orbit;
    if (opts.start_orbit) {
        orbit = *opts.start_orbit;
        if (orbit.profile.mesh()->nPoints() != mesh->nPoints())
            orbit = remesh_orbit(*sys.compile(orbit.params), orbit, mesh, opts.newton);
    } else {
        // Simulate at the seed parameters, then walk the parameters to the
        // requested initial point re-solving the cycle at each stage.
        Vec sp = params;
        if (opts.seed_params) {
            sp[i1] = opts.seed_params->first;
            sp[i2] = opts.seed_params->second;
        }
        Vec x0 = opts.seed_state ? *opts.seed_state : Vec::Constant(sys.dim, 0.1);
        orbit = cycle_from_simulation(*sys.compile(sp), sp, mesh, x0, opts.t_transient,
                                      opts.t_max, opts.newton);
        const int steps = std::max(1, opts.walk_steps);
        for (int s = 1; s <= steps; ++s) {
            Vec ps = sp + (params - sp) * (double(s) / steps);
            orbit = newton_cycle(*sys.compile(ps), ps, orbit.profile, orbit.period,
                                 opts.newton);
        }
    }

    auto evaluate = [&](const Vec& p, PeriodicOrbit& warm) -> Vec {
        auto rhs = sys.compile(p);
        warm = newton_cycle(*rhs, p, warm.profile, warm.period, opts.newton);
        FloquetSpectrum sp = floquet(*rhs, warm, opts.criticality_tol);
        return codim2_tests(kind, sp);
    };

    Vec p(2);
    p << v1, v2;
    auto withP = [&](const Vec& p2v) {
        Vec full = params;
        full[i1] = p2v[0];
        full[i2] = p2v[1];
        return full;
    };

    PeriodicOrbit cur = orbit;
    Vec g = evaluate(withP(p), cur);

    Mat J(2, 2);
    bool haveJ = false;
    int iter = 0;
    while (g.cwiseAbs().maxCoeff() > opts.locate_tol) {
        if (++iter > opts.max_iter)
            throw NoConvergence("locate: no convergence in " + std::to_string(opts.max_iter) +
                                " iterations");
        if (!haveJ) {
            for (int k = 0; k < 2; ++k) {
                const double h = 1e-5 * std::max(1.0, std::abs(p[k]));
                Vec pk = p;
                pk[k] += h;
                PeriodicOrbit tmp = cur;
                Vec gk = evaluate(withP(pk), tmp);
                J.col(k) = (gk - g) / h;
            }
            haveJ = true;
        }
        Vec dp = J.partialPivLu().solve(g);
        double lambda = 1.0;
        for (int half = 0;; ++half) {
            Vec pn = p - lambda * dp;
            PeriodicOrbit trial = cur;
            try {
                Vec gn = evaluate(withP(pn), trial);
                // Broyden update.
                const Vec s = pn - p, y = gn - g;
                J += (y - J * s) * s.transpose() / s.squaredNorm();
                p = pn;
                g = gn;
                cur = trial;
                break;
            } catch (const NoConvergence&) {
                if (half >= 6) throw;
                lambda *= 0.5;
            }
        }
    }

    auto rhs = sys.compile(withP(p));
    FloquetSpectrum sp = floquet(*rhs, cur, opts.criticality_tol);
    Codim2Point pt;
    pt.kind = kind;
    pt.model = sys.name;
    pt.orbit = cur;
    pt.free_params = {p1, p2};
    fillPoint(pt, kind, sp, cur.period, opts.guard_tol);
    return pt;
}

}  // namespace lcnf
