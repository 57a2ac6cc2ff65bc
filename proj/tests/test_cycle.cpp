#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "lcnf/cycle.hpp"
#include "lcnf/pipeline.hpp"
#include "lcnf/sim.hpp"

using namespace lcnf;

namespace {

PeriodicOrbit hopfCircleOrbit(int ntst = 40, int ncol = 4) {
    const OdeSystem sys = builtin_models().get("hopfcircle");
    auto rhs = sys.compile(sys.default_params);
    auto mesh = Mesh::uniform(ntst, ncol);
    const double T = 2.0 * M_PI;
    MeshFunction guess(mesh, T, 2);
    for (int idx = 0; idx < mesh->nPoints(); ++idx) {
        const double tau = T * mesh->repSigma(idx);
        guess.values()(0, idx) = std::cos(tau);
        guess.values()(1, idx) = std::sin(tau);
    }
    return newton_cycle(*rhs, sys.default_params, guess, T);
}

}  // namespace

TEST_CASE("hopfcircle converges from the exact guess") {
    PeriodicOrbit orbit = hopfCircleOrbit();
    CHECK(orbit.period == doctest::Approx(2.0 * M_PI).epsilon(1e-12));
    CHECK(orbit.converged_residual < 1e-10);
    const Vec x = orbit.stateAt(1.234);
    CHECK(x.norm() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("hopfcircle multipliers are 1 and e^{-4 pi}") {
    const OdeSystem sys = builtin_models().get("hopfcircle");
    auto rhs = sys.compile(sys.default_params);
    PeriodicOrbit orbit = hopfCircleOrbit();
    FloquetSpectrum sp = floquet(*rhs, orbit);
    REQUIRE(sp.multipliers.size() == 2);
    CHECK(std::abs(sp.trivial() - 1.0) < 1e-8);
    const Cplx other = sp.multipliers[1 - sp.trivial_index];
    CHECK(std::abs(other - std::exp(-4.0 * M_PI)) < 1e-6 * std::exp(-4.0 * M_PI) + 1e-12);

    Mat M = monodromy_by_integration(*rhs, orbit.profile, orbit.period);
    Eigen::EigenSolver<Mat> es(M);
    double d1 = 1e9, d2 = 1e9;
    for (int i = 0; i < 2; ++i) {
        d1 = std::min(d1, std::abs(es.eigenvalues()[i] - 1.0));
        d2 = std::min(d2, std::abs(es.eigenvalues()[i] - std::exp(-4.0 * M_PI)));
    }
    CHECK(d1 < 1e-8);
    CHECK(d2 < 1e-8);
}

TEST_CASE("mesh doubling leaves the non-trivial multiplier unchanged") {
    const OdeSystem sys = builtin_models().get("hopfcircle");
    auto rhs = sys.compile(sys.default_params);
    PeriodicOrbit o40 = hopfCircleOrbit(40);
    PeriodicOrbit o80 = remesh_orbit(*rhs, o40, Mesh::uniform(80, 4));
    auto nontrivial = [&](const PeriodicOrbit& o) {
        FloquetSpectrum sp = floquet(*rhs, o);
        return sp.multipliers[1 - sp.trivial_index];
    };
    CHECK(std::abs(nontrivial(o40) - nontrivial(o80)) < 1e-7);
}

TEST_CASE("forced predator-prey cycle has the forcing period structure") {
    const OdeSystem sys = builtin_models().get("preypredator");
    Vec params = sys.paramsWith({{"b2", 0.277}, {"eps", 0.530}});
    auto rhs = sys.compile(params);
    Vec x0(6);
    x0 << 0.6, 0.2, 0.6, 0.2, 1.0, 0.0;
    PeriodicOrbit orbit = cycle_from_simulation(*rhs, params, Mesh::uniform(40, 4), x0,
                                                800.0, 8000.0);
    CHECK(orbit.converged_residual < 1e-10);
    const double k = orbit.period / (2.0 * M_PI);
    CHECK(std::abs(k - std::round(k)) < 1e-8);
    FloquetSpectrum sp = floquet(*rhs, orbit);
    CHECK(std::abs(sp.trivial() - 1.0) < 1e-6);
}

TEST_CASE("collocation multipliers match variational integration on a forced cycle") {
    const OdeSystem sys = builtin_models().get("preypredator");
    Vec params = sys.paramsWith({{"b2", 0.277}, {"eps", 0.530}});
    auto rhs = sys.compile(params);
    Vec x0(6);
    x0 << 0.6, 0.2, 0.6, 0.2, 1.0, 0.0;
    PeriodicOrbit orbit = cycle_from_simulation(*rhs, params, Mesh::uniform(40, 4), x0,
                                                800.0, 8000.0);
    FloquetSpectrum sp = floquet(*rhs, orbit);
    Mat M = monodromy_by_integration(*rhs, orbit.profile, orbit.period);
    Eigen::EigenSolver<Mat> es(M);
    for (const Cplx& mu : sp.multipliers) {
        if (std::abs(mu) < 1e-8) continue;  // strongly contracted directions
        double best = 1e30;
        for (int i = 0; i < 6; ++i) best = std::min(best, std::abs(es.eigenvalues()[i] - mu));
        CHECK(best < 1e-5 * std::max(1.0, std::abs(mu)));
    }
}

TEST_CASE("shooting finds the forced cycle off the attractor") {
    const OdeSystem sys = builtin_models().get("preypredator");
    Vec params = sys.paramsWith({{"b2", 0.261}, {"eps", 0.46}});
    auto rhs = sys.compile(params);
    Vec xi(6);
    xi << 0.3, 0.1, 0.15, 0.1, 1.0, 0.0;
    PeriodicOrbit orbit =
        forced_cycle(*rhs, params, Mesh::uniform(40, 4), 2.0 * M_PI, 4, xi);
    CHECK(orbit.converged_residual < 1e-10);
    CHECK(orbit.period == doctest::Approx(2.0 * M_PI));
    FloquetSpectrum sp = floquet(*rhs, orbit);
    CHECK(std::abs(sp.trivial() - 1.0) < 1e-6);
    // A genuine complex pair close to the unit circle sits in the spectrum.
    double best = 1e9;
    for (auto mu : sp.multipliers)
        if (mu.imag() > 1e-6) best = std::min(best, std::abs(std::abs(mu) - 1.0));
    CHECK(best < 0.2);
}

TEST_CASE("period collapse guard") {
    const OdeSystem sys = builtin_models().get("hopfcircle");
    auto rhs = sys.compile(sys.default_params);
    auto mesh = Mesh::uniform(10, 4);
    MeshFunction guess(mesh, 1e-5, 2);
    guess.values().setConstant(0.5);
    CHECK_THROWS(newton_cycle(*rhs, sys.default_params, guess, 1e-5));
}
