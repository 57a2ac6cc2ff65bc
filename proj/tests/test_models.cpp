#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "lcnf/embedding.hpp"
#include "lcnf/models.hpp"

using namespace lcnf;

namespace {

Vec randomVec(int n, std::mt19937& rng, double scale = 1.0) {
    std::normal_distribution<double> d(0.0, scale);
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = d(rng);
    return v;
}

CVec randomCVec(int n, std::mt19937& rng) {
    std::normal_distribution<double> d;
    CVec v(n);
    for (int i = 0; i < n; ++i) v[i] = Cplx(d(rng), d(rng));
    return v;
}

// Independent transcription of the laser equations in complex arithmetic.
Vec laser_reference_rhs(const Vec& x, const Vec& p) {
    const double Op = p[0], Dcav = p[1], g1 = p[2], g2 = p[3], g3 = p[4],
                 gcav = p[5], g = p[6], Dp = p[7];
    const double Ol = x[0], raa = x[1], rbb = x[2];
    const Cplx sab(x[3], x[4]), sac(x[5], x[6]), scb(x[7], x[8]);
    const Cplx I(0.0, 1.0);
    const double Ra = -0.505 * raa - 0.405 * rbb + 0.45;
    const double Rb = 0.0495 * raa - 0.0505 * rbb + 0.0055;
    const double Dl = Dcav + g * sab.real() * Ol;

    const double dOl = -0.5 * gcav * Ol - g * sab.imag();
    const Cplx draa = Ra - 0.5 * I * (Ol * (sab - std::conj(sab)) + Op * (sac - std::conj(sac)));
    const Cplx drbb = Rb + 0.5 * I * Ol * (sab - std::conj(sab));
    const Cplx dsab = -(g1 + I * Dl) * sab - 0.5 * I * (Ol * (raa - rbb) - Op * scb);
    const Cplx dsac = -(g2 + I * Dp) * sac -
                      0.5 * I * (Op * (2.0 * raa + rbb - 1.0) - Ol * std::conj(scb));
    const Cplx dscb = -(g3 + I * (Dl - Dp)) * scb - 0.5 * I * (Ol * std::conj(sac) - Op * sab);

    Vec f(9);
    f << dOl, draa.real(), drbb.real(), dsab.real(), dsab.imag(), dsac.real(),
        dsac.imag(), dscb.real(), dscb.imag();
    return f;
}

}  // namespace

TEST_CASE("registry contains the expected models") {
    const auto& reg = builtin_models();
    for (const char* name : {"laser", "preypredator", "vibration", "hopfcircle",
                             "nf_embed_lpns", "nf_embed_pdns", "nf_embed_nsns"})
        CHECK(reg.contains(name));
    CHECK(reg.get("laser").dim == 9);
    CHECK(reg.get("preypredator").dim == 6);
    CHECK(reg.get("vibration").dim == 6);
    CHECK(reg.get("hopfcircle").dim == 2);
}

TEST_CASE("hopfcircle on-cycle tangent and cubic form") {
    const OdeSystem sys = builtin_models().get("hopfcircle");
    Vec x(2);
    x << 1.0, 0.0;
    const Vec f = eval_rhs(sys, x, sys.default_params);
    CHECK(f[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(f[1] == doctest::Approx(1.0).epsilon(1e-14));

    CVec e1 = CVec::Zero(2);
    e1[0] = 1.0;
    const CVec c3 = eval_mlf(sys, 3, x, sys.default_params, {e1, e1, e1});
    CHECK(c3[0].real() == doctest::Approx(-6.0));
    CHECK(std::abs(c3[1]) < 1e-14);
}

TEST_CASE("preypredator vanishes at the origin") {
    const OdeSystem sys = builtin_models().get("preypredator");
    const Vec f = eval_rhs(sys, Vec::Zero(6), sys.default_params);
    CHECK(f.norm() < 1e-14);
}

TEST_CASE("laser matches an independent transcription") {
    const OdeSystem sys = builtin_models().get("laser");
    Vec p = sys.default_params;
    p[0] = 3.411;
    p[1] = -1.819;
    std::mt19937 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const Vec x = randomVec(9, rng);
        const Vec got = eval_rhs(sys, x, p);
        const Vec ref = laser_reference_rhs(x, p);
        CHECK((got - ref).norm() < 1e-12 * (1.0 + ref.norm()));
    }
}

TEST_CASE("multilinear forms are symmetric in their directions") {
    std::mt19937 rng(11);
    for (const char* name : {"laser", "preypredator", "vibration"}) {
        const OdeSystem sys = builtin_models().get(name);
        auto rhs = sys.compile(sys.default_params);
        const Vec x = randomVec(sys.dim, rng, 0.5);
        for (int k = 2; k <= 4; ++k) {
            std::vector<CVec> dirs;
            for (int i = 0; i < k; ++i) dirs.push_back(randomCVec(sys.dim, rng));
            const CVec base = rhs->mlf(k, x, dirs);
            std::vector<CVec> perm = dirs;
            std::swap(perm[0], perm[k - 1]);
            if (k > 2) std::rotate(perm.begin(), perm.begin() + 1, perm.end());
            const CVec other = rhs->mlf(k, x, perm);
            CHECK((base - other).norm() < 1e-12 * (1.0 + base.norm()));
        }
    }
}

TEST_CASE("first-order form equals the Jacobian-vector product (FD check)") {
    std::mt19937 rng(13);
    const OdeSystem sys = builtin_models().get("laser");
    auto rhs = sys.compile(sys.default_params);
    const Vec x = randomVec(9, rng, 0.5);
    const Vec v = randomVec(9, rng);
    const CVec jv = rhs->mlf(1, x, {v.cast<Cplx>()});
    const double h = 1e-7;
    const Vec fd = (rhs->rhs(x + h * v) - rhs->rhs(x - h * v)) / (2.0 * h);
    CHECK((jv.real() - fd).norm() < 1e-6 * (1.0 + fd.norm()));
    CHECK((rhs->jacobian(x) * v - jv.real()).norm() < 1e-12);
}

TEST_CASE("polynomial models have vanishing forms above their degree") {
    std::mt19937 rng(17);
    for (const char* name : {"laser", "vibration", "hopfcircle"}) {
        const OdeSystem sys = builtin_models().get(name);
        auto rhs = sys.compile(sys.default_params);
        CHECK(rhs->polyDegree() == 3);
        const Vec x = randomVec(sys.dim, rng);
        std::vector<CVec> dirs(4, randomCVec(sys.dim, rng));
        CHECK(rhs->mlf(4, x, dirs).norm() == 0.0);
    }
}

TEST_CASE("Taylor expansion of a polynomial model is exact") {
    std::mt19937 rng(19);
    const OdeSystem sys = builtin_models().get("vibration");
    auto rhs = sys.compile(sys.default_params);
    const Vec x = randomVec(6, rng, 0.4);
    const Vec v = randomVec(6, rng, 0.4);
    const double eps = 0.37;
    Vec sum = rhs->rhs(x);
    double fact = 1.0;
    for (int k = 1; k <= 3; ++k) {
        fact *= k;
        std::vector<CVec> dirs(k, v.cast<Cplx>());
        sum += std::pow(eps, k) / fact * rhs->mlf(k, x, dirs).real();
    }
    CHECK((rhs->rhs(x + eps * v) - sum).norm() < 1e-11 * (1.0 + sum.norm()));
}

TEST_CASE("linear system has zero quadratic form") {
    PolySystem lin(2, 2);
    lin.row(0) = Poly::var(2, 0) * 3.0 - Poly::var(2, 1);
    lin.row(1) = Poly::var(2, 0) + Poly::var(2, 1) * 0.5;
    PolyRhs rhs(std::move(lin));
    std::mt19937 rng(23);
    const Vec x = randomVec(2, rng);
    std::vector<CVec> dirs(2, randomCVec(2, rng));
    CHECK(rhs.mlf(2, x, dirs).norm() == 0.0);
}

namespace {

// Central polarization with one Richardson refinement; the test-side
// oracle, independent of the exact tensors under test.
Vec fd_poly_richardson(const std::function<Vec(const Vec&)>& f, int k, const Vec& x,
                       const std::vector<Vec>& dirs, double h) {
    auto polar = [&](double step) {
        const int corners = 1 << k;
        Vec acc = Vec::Zero(x.size());
        for (int mask = 0; mask < corners; ++mask) {
            Vec xp = x;
            int sgn = 1;
            for (int i = 0; i < k; ++i) {
                const int s = (mask & (1 << i)) ? 1 : -1;
                if (s < 0) sgn = -sgn;
                xp += (0.5 * step * s) * dirs[i];
            }
            acc += sgn * f(xp);
        }
        return Vec(acc / std::pow(step, k));
    };
    const Vec coarse = polar(h), fine = polar(0.5 * h);
    return (4.0 * fine - coarse) / 3.0;
}

}  // namespace

TEST_CASE("Holling terms match the FD polarization oracle") {
    std::mt19937 rng(29);
    const OdeSystem sys = builtin_models().get("preypredator");
    Vec p = sys.default_params;
    p[0] = 0.277;
    p[1] = 0.53;
    auto rhs = sys.compile(p);
    auto plain = [&](const Vec& xx) { return rhs->rhs(xx); };
    Vec x(6);
    x << 0.7, 0.3, 0.6, 0.25, 0.4, 0.2;
    for (int k = 1; k <= 3; ++k) {
        std::vector<Vec> dirs;
        for (int i = 0; i < k; ++i) {
            Vec d = randomVec(6, rng);
            dirs.push_back(d / d.norm());
        }
        std::vector<CVec> cdirs;
        for (const auto& d : dirs) cdirs.push_back(d.cast<Cplx>());
        const CVec exact = rhs->mlf(k, x, cdirs);
        const double h = std::pow(std::numeric_limits<double>::epsilon(), 1.0 / (k + 4));
        const Vec fd = fd_poly_richardson(plain, k, x, dirs, h);
        CHECK((exact.real() - fd).norm() < 1e-6 * (1.0 + exact.norm()));
        // The library fallback (plain central polarization at the standard
        // step) stays within a looser band.
        const CVec fb = fd_polarization_mlf(plain, k, x, cdirs);
        CHECK((exact - fb).norm() < 1e-4 * (1.0 + exact.norm()));
    }
}

TEST_CASE("laser quadratic form against finite-difference oracles") {
    std::mt19937 rng(31);
    const OdeSystem sys = builtin_models().get("laser");
    auto rhs = sys.compile(sys.default_params);
    auto plain = [&](const Vec& xx) { return rhs->rhs(xx); };
    const Vec x = randomVec(9, rng, 0.3);
    Vec v = randomVec(9, rng), w = randomVec(9, rng);
    v /= v.norm();
    w /= w.norm();
    const CVec exact = rhs->mlf(2, x, {v.cast<Cplx>(), w.cast<Cplx>()});

    // Forward second difference, as a coarse sanity check.
    const double h = 3e-5;
    const Vec fwd = (rhs->rhs(x + h * (v + w)) - rhs->rhs(x + h * v) -
                     rhs->rhs(x + h * w) + rhs->rhs(x)) /
                    (h * h);
    CHECK((exact.real() - fwd).norm() < 1e-3 * (1.0 + fwd.norm()));

    // Refined central polarization agrees to 1e-6 relative.
    const Vec fd = fd_poly_richardson(plain, 2, x, {v, w}, 2e-3);
    CHECK((exact.real() - fd).norm() < 1e-6 * (1.0 + fd.norm()));
}

TEST_CASE("unknown parameter name is rejected") {
    const OdeSystem sys = builtin_models().get("laser");
    CHECK_THROWS_AS(sys.paramsWith({{"bogus", 1.0}}), ModelError);
}

TEST_CASE("embedding validation") {
    EmbeddingSpec spec;
    spec.kind = BifKind::LPNS;
    spec.coeffs["a200"] = 5.0;  // too large
    CHECK_THROWS_AS(build_embedding(spec), InvalidCoefficients);
    spec.coeffs["a200"] = 0.5;
    spec.decay = 1.0;
    CHECK_THROWS_AS(build_embedding(spec), InvalidCoefficients);
}
