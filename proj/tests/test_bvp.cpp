#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "lcnf/bvp.hpp"

using namespace lcnf;

namespace {

BvpOperator scalarOp(std::shared_ptr<const Mesh> mesh, double T, double lam,
                     Cplx shift = 0.0, int bsign = +1, bool adjoint = false) {
    BvpOperator op;
    op.mesh = mesh;
    op.T = T;
    op.n = 1;
    op.shift = shift;
    op.boundary_sign = bsign;
    op.adjoint = adjoint;
    op.A.assign(mesh->nGauss(), Mat::Constant(1, 1, lam));
    return op;
}

std::vector<CVec> rhsAtGauss(const Mesh& mesh, double T,
                             const std::function<Cplx(double)>& f) {
    std::vector<CVec> out;
    for (int j = 0; j < mesh.ntst(); ++j)
        for (int g = 0; g < mesh.ncol(); ++g) {
            CVec v(1);
            v << f(T * mesh.gaussSigma(j, g));
            out.push_back(v);
        }
    return out;
}

MeshFunction constantFn(std::shared_ptr<const Mesh> mesh, double T, Cplx c) {
    MeshFunction f(mesh, T, 1);
    f.values().setConstant(c);
    return f;
}

}  // namespace

TEST_CASE("nonsingular scalar solve: dh/dt - lambda h = f") {
    auto mesh = Mesh::uniform(20, 4);
    const double T = 2.0;

    // lambda = +1, f = 1: the periodic solution is the constant -1.
    auto sol1 = solve_linear_bvp(scalarOp(mesh, T, 1.0),
                                 rhsAtGauss(*mesh, T, [](double) { return 1.0; }), {}, {});
    CHECK(std::abs(sol1.h.atPoint(3)[0] + 1.0) < 1e-11);

    // lambda = -1, f = 1: the periodic solution is the constant +1.
    auto sol2 = solve_linear_bvp(scalarOp(mesh, T, -1.0),
                                 rhsAtGauss(*mesh, T, [](double) { return 1.0; }), {}, {});
    CHECK(std::abs(sol2.h.atPoint(3)[0] - 1.0) < 1e-11);
}

TEST_CASE("singular solve with solvability satisfied") {
    auto mesh = Mesh::uniform(40, 4);
    const double T = 3.0;
    const double w = 2.0 * M_PI / T;

    // dh/dt = sin(w t), kernel constants; constraint int h = 0 picks
    // h = -(1/w) cos(w t).
    auto border = constantFn(mesh, T, 1.0);
    auto sol = solve_linear_bvp(
        scalarOp(mesh, T, 0.0),
        rhsAtGauss(*mesh, T, [&](double t) { return std::sin(w * t); }),
        {BvpConstraint{constantFn(mesh, T, 1.0), 0.0}}, {border});
    CHECK(std::abs(sol.border_multipliers[0]) < 1e-9);
    for (double tau : {0.1, 1.0, 2.7}) {
        const double expect = -std::cos(w * tau) / w;
        CHECK(std::abs(sol.h.interpolate(tau)[0] - expect) < 1e-8);
    }
}

TEST_CASE("violated solvability shows up in the border multiplier") {
    auto mesh = Mesh::uniform(20, 4);
    const double T = 3.0;
    auto border = constantFn(mesh, T, 1.0);
    auto sol = solve_linear_bvp(scalarOp(mesh, T, 0.0),
                                rhsAtGauss(*mesh, T, [](double) { return 1.0; }),
                                {BvpConstraint{constantFn(mesh, T, 1.0), 0.0}}, {border});
    // Lh + mu * b = 1 with h constant-free: mu absorbs the mean load.
    CHECK(std::abs(sol.border_multipliers[0]) > 0.1);
    CHECK(sol.constraint_residual < 1e-10);
}

TEST_CASE("kernel of a constant-coefficient system with one zero eigenvalue") {
    auto mesh = Mesh::uniform(20, 4);
    const double T = 2.0;
    BvpOperator op;
    op.mesh = mesh;
    op.T = T;
    op.n = 3;
    op.shift = 0.0;
    op.boundary_sign = +1;
    Mat A = Mat::Zero(3, 3);
    A(1, 1) = -2.0;
    A(2, 2) = -5.0;
    op.A.assign(mesh->nGauss(), A);

    MeshFunction k = solve_kernel(op, nullptr, 0.0);
    // kernel = first coordinate axis, normalized to unit L2 norm
    CHECK(std::abs(std::abs(k.atPoint(5)[0]) - 1.0 / std::sqrt(T)) < 1e-9);
    CHECK(std::abs(k.atPoint(5)[1]) < 1e-9);
    CHECK(std::abs(k.atPoint(5)[2]) < 1e-9);
}

TEST_CASE("off-critical shift raises KernelDimensionMismatch") {
    auto mesh = Mesh::uniform(20, 4);
    const double T = 2.0;
    BvpOperator op;
    op.mesh = mesh;
    op.T = T;
    op.n = 2;
    op.shift = 1e-3;  // hyperbolic: no kernel
    op.boundary_sign = +1;
    Mat A = Mat::Zero(2, 2);
    A(1, 1) = -1.0;
    op.A.assign(mesh->nGauss(), A);
    CHECK_THROWS_AS(solve_kernel(op, nullptr, 0.0), KernelDimensionMismatch);
}

TEST_CASE("deterministic resolve") {
    auto mesh = Mesh::uniform(16, 4);
    const double T = 1.0;
    auto rhs = rhsAtGauss(*mesh, T, [](double t) { return std::cos(2.0 * M_PI * t); });
    auto s1 = solve_linear_bvp(scalarOp(mesh, T, -0.7), rhs, {}, {});
    auto s2 = solve_linear_bvp(scalarOp(mesh, T, -0.7), rhs, {}, {});
    CHECK((s1.h.values() - s2.h.values()).norm() < 1e-10);
}

TEST_CASE("anti-periodic boundary rows") {
    auto mesh = Mesh::uniform(40, 4);
    const double T = 2.0 * M_PI;
    // dh/dt = 0 with h(T) + h(0) = 0 has only the zero solution; with the
    // half-frequency shift the kernel is e^{-i t/2}-like. Check the
    // operator residual of cos(t/2) for d/dt + 1/4 ... simpler: solve the
    // inhomogeneous anti-periodic problem dh/dt - 0 h = cos(t/2), whose
    // anti-periodic solution is 2 sin(t/2).
    auto sol = solve_linear_bvp(scalarOp(mesh, T, 0.0, 0.0, -1),
                                rhsAtGauss(*mesh, T, [](double t) { return std::cos(0.5 * t); }),
                                {}, {});
    for (double tau : {0.5, 2.0, 5.0})
        CHECK(std::abs(sol.h.interpolate(tau)[0] - 2.0 * std::sin(0.5 * tau)) < 1e-9);
}
