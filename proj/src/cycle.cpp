#include "lcnf/cycle.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <cmath>

#include "lcnf/sim.hpp"

namespace lcnf {

std::vector<int> FloquetSpectrum::criticalIndices() const {
    std::vector<int> out;
    for (size_t i = 0; i < multipliers.size(); ++i)
        if (std::abs(std::abs(multipliers[i]) - 1.0) < criticality_tol)
            out.push_back(static_cast<int>(i));
    return out;
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

// Unknown layout: values at rep points (n each), then the period.
struct CycleSystem {
    const CompiledRhs& rhs;
    const Mesh& mesh;
    int n;

    int unknowns() const { return n * mesh.nPoints() + 1; }

    Eigen::VectorXd residual(const MeshFunction& u, double T,
                             const MeshFunction& phase_ref) const {
        Eigen::VectorXd r(unknowns());
        int row = 0;
        for (int j = 0; j < mesh.ntst(); ++j) {
            for (int g = 0; g < mesh.ncol(); ++g) {
                // du/dsigma - T f(u) at the Gauss node.
                const Vec du = (u.derivAtGauss(j, g) * u.period()).real();
                const Vec uv = u.atGauss(j, g).real();
                r.segment(row, n) = du - T * rhs.rhs(uv);
                row += n;
            }
        }
        const int last = mesh.nPoints() - 1;
        r.segment(row, n) = (u.atPoint(last) - u.atPoint(0)).real();
        row += n;
        // Phase: int <phase_ref', u> dsigma = 0.
        double ph = 0.0;
        for (int j = 0; j < mesh.ntst(); ++j)
            for (int g = 0; g < mesh.ncol(); ++g)
                ph += mesh.gaussWeight(j, g) *
                      (phase_ref.derivAtGauss(j, g) * phase_ref.period())
                          .real()
                          .dot(u.atGauss(j, g).real());
        r[row] = ph;
        return r;
    }

    SpMat jacobian(const MeshFunction& u, double T, const MeshFunction& phase_ref) const {
        const int N = unknowns();
        std::vector<Triplet> trip;
        const Mat& Lg = mesh.basisAtGauss();
        const Mat& Lgd = mesh.basisDerivAtGauss();
        int row = 0;
        for (int j = 0; j < mesh.ntst(); ++j) {
            const double invLen = 1.0 / mesh.intervalLen(j);
            for (int g = 0; g < mesh.ncol(); ++g) {
                const Vec uv = u.atGauss(j, g).real();
                const Mat A = rhs.jacobian(uv);
                const Vec fv = rhs.rhs(uv);
                for (int i = 0; i <= mesh.ncol(); ++i) {
                    const int colBase = n * (j * mesh.ncol() + i);
                    const double dl = Lgd(g, i) * invLen;
                    const double l = Lg(g, i);
                    for (int r = 0; r < n; ++r) {
                        trip.emplace_back(row + r, colBase + r, dl);
                        for (int c = 0; c < n; ++c) {
                            const double a = A(r, c);
                            if (a != 0.0) trip.emplace_back(row + r, colBase + c, -T * l * a);
                        }
                    }
                }
                for (int r = 0; r < n; ++r) trip.emplace_back(row + r, N - 1, -fv[r]);
                row += n;
            }
        }
        const int last = n * (mesh.nPoints() - 1);
        for (int r = 0; r < n; ++r) {
            trip.emplace_back(row + r, last + r, 1.0);
            trip.emplace_back(row + r, r, -1.0);
        }
        row += n;
        for (int j = 0; j < mesh.ntst(); ++j)
            for (int g = 0; g < mesh.ncol(); ++g) {
                const Vec pr = (phase_ref.derivAtGauss(j, g) * phase_ref.period()).real();
                const double wq = mesh.gaussWeight(j, g);
                for (int i = 0; i <= mesh.ncol(); ++i) {
                    const int colBase = n * (j * mesh.ncol() + i);
                    const double l = Lg(g, i);
                    for (int c = 0; c < n; ++c)
                        trip.emplace_back(row, colBase + c, wq * l * pr[c]);
                }
            }
        SpMat J(N, N);
        J.setFromTriplets(trip.begin(), trip.end());
        return J;
    }
};

}  // namespace

PeriodicOrbit newton_cycle(const CompiledRhs& rhs, const Vec& params,
                           const MeshFunction& guess_profile, double guess_period,
                           const NewtonOptions& opts) {
    const auto mesh = guess_profile.mesh();
    const int n = rhs.dim();
    CycleSystem sys{rhs, *mesh, n};

    MeshFunction u = guess_profile;
    double T = guess_period;
    const MeshFunction phase_ref = guess_profile;

    double resNorm = 1e30;
    double fscale = 1.0;
    for (int it = 0; it < opts.max_iter; ++it) {
        u = MeshFunction(mesh, T, u.values());  // keep tau-scaling in sync with T
        Eigen::VectorXd r = sys.residual(u, T, phase_ref);
        fscale = std::max(1.0, T * rhs.rhs(u.atPoint(0).real()).norm());
        resNorm = r.cwiseAbs().maxCoeff() / fscale;
        if (resNorm < opts.tol) break;

        SpMat J = sys.jacobian(u, T, phase_ref);
        Eigen::SparseLU<SpMat> lu;
        lu.compute(J);
        if (lu.info() != Eigen::Success)
            throw NoConvergence("cycle Newton: singular Jacobian");
        Eigen::VectorXd dx = lu.solve(r);

        // Damped update: halve until the residual does not grow badly.
        double lambda = 1.0;
        for (int half = 0; half < 5; ++half) {
            CMat vals = u.values();
            for (int idx = 0; idx < mesh->nPoints(); ++idx)
                vals.col(idx) -= (lambda * dx.segment(n * idx, n)).cast<Cplx>();
            const double Tn = T - lambda * dx[sys.unknowns() - 1];
            if (Tn < 1e-6) throw PeriodCollapse("cycle Newton: period collapsed");
            MeshFunction un(mesh, Tn, vals);
            const double rn =
                sys.residual(un, Tn, phase_ref).cwiseAbs().maxCoeff() / fscale;
            if (rn < resNorm || rn < 10.0 * opts.tol || half == 4) {
                u = std::move(un);
                T = Tn;
                break;
            }
            lambda *= 0.5;
        }
    }
    if (resNorm >= opts.tol)
        throw NoConvergence("cycle Newton: no convergence after " +
                            std::to_string(opts.max_iter) + " iterations (residual " +
                            std::to_string(resNorm) + ")");

    PeriodicOrbit orbit;
    orbit.profile = MeshFunction(mesh, T, u.values().real().cast<Cplx>());
    orbit.period = T;
    orbit.params = params;
    orbit.converged_residual = resNorm;
    return orbit;
}

PeriodicOrbit cycle_from_simulation(const CompiledRhs& rhs, const Vec& params,
                                    std::shared_ptr<const Mesh> mesh, const Vec& x0,
                                    double t_transient, double t_max,
                                    const NewtonOptions& opts) {
    CycleGuess g = find_cycle_guess(rhs, x0, t_transient, t_max);
    std::vector<double> times(mesh->nPoints());
    for (int i = 0; i < mesh->nPoints(); ++i) times[i] = g.period * mesh->repSigma(i);
    auto samples = integrate_samples(rhs, g.anchor, 0.0, times);
    MeshFunction prof(mesh, g.period, rhs.dim());
    for (int i = 0; i < mesh->nPoints(); ++i) prof.values().col(i) = samples[i].cast<Cplx>();
    prof.values().col(mesh->nPoints() - 1) = prof.values().col(0);  // enforce closure
    return newton_cycle(rhs, params, prof, g.period, opts);
}

FloquetSpectrum floquet(const CompiledRhs& rhs, const PeriodicOrbit& orbit,
                        double criticality_tol) {
    const Mesh& mesh = *orbit.profile.mesh();
    const int n = rhs.dim(), ncol = mesh.ncol();
    const Mat& Lg = mesh.basisAtGauss();
    const Mat& Lgd = mesh.basisDerivAtGauss();

    Mat M = Mat::Identity(n, n);
    Mat B1(n * ncol, n * ncol), B0(n * ncol, n);
    for (int j = 0; j < mesh.ntst(); ++j) {
        const double invLen = 1.0 / mesh.intervalLen(j);
        B1.setZero();
        B0.setZero();
        for (int g = 0; g < ncol; ++g) {
            const Mat A = rhs.jacobian(orbit.profile.atGauss(j, g).real());
            for (int i = 0; i <= ncol; ++i) {
                const Mat block =
                    (Lgd(g, i) * invLen) * Mat::Identity(n, n) - orbit.period * Lg(g, i) * A;
                if (i == 0)
                    B0.block(n * g, 0, n, n) = block;
                else
                    B1.block(n * g, n * (i - 1), n, n) = block;
            }
        }
        // Condense: interval transfer u_end = G u_start.
        Mat S = B1.partialPivLu().solve(-B0);
        M = S.bottomRows(n) * M;
    }

    Eigen::EigenSolver<Mat> es(M);
    FloquetSpectrum sp;
    sp.criticality_tol = criticality_tol;
    for (int i = 0; i < n; ++i) sp.multipliers.push_back(es.eigenvalues()[i]);
    double best = 1e30;
    for (int i = 0; i < n; ++i) {
        const double d = std::abs(sp.multipliers[i] - 1.0);
        if (d < best) {
            best = d;
            sp.trivial_index = i;
        }
    }
    return sp;
}

PeriodicOrbit remesh_orbit(const CompiledRhs& rhs, const PeriodicOrbit& orbit,
                           std::shared_ptr<const Mesh> mesh, const NewtonOptions& opts) {
    MeshFunction prof = orbit.profile.remesh(mesh);
    return newton_cycle(rhs, orbit.params, prof, orbit.period, opts);
}

std::vector<double> arclength_breaks(const PeriodicOrbit& orbit, int ntst) {
    const Mesh& mesh = *orbit.profile.mesh();
    // Accumulate arclength density at Gauss resolution.
    std::vector<double> sig{0.0}, acc{0.0};
    double total = 0.0;
    for (int j = 0; j < mesh.ntst(); ++j)
        for (int g = 0; g < mesh.ncol(); ++g) {
            const double wq = mesh.gaussWeight(j, g);
            const double speed =
                (orbit.profile.derivAtGauss(j, g) * orbit.period).real().norm();
            total += wq * (0.1 + speed);
            sig.push_back(mesh.gaussSigma(j, g));
            acc.push_back(total);
        }
    sig.push_back(1.0);
    acc.push_back(total);

    std::vector<double> breaks(ntst + 1);
    breaks[0] = 0.0;
    breaks[ntst] = 1.0;
    size_t k = 0;
    for (int i = 1; i < ntst; ++i) {
        const double target = total * i / ntst;
        while (k + 1 < acc.size() && acc[k + 1] < target) ++k;
        const double f = (target - acc[k]) / std::max(acc[k + 1] - acc[k], 1e-300);
        breaks[i] = sig[k] + f * (sig[k + 1] - sig[k]);
    }
    return breaks;
}

}  // namespace lcnf
