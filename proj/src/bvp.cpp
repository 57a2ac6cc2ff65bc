#include "lcnf/bvp.hpp"

#include <Eigen/Sparse>
#include <cmath>
#include <random>

namespace lcnf {

namespace {

using SpMat = Eigen::SparseMatrix<Cplx>;
using Triplet = Eigen::Triplet<Cplx>;

struct Assembled {
    SpMat M;
    Eigen::VectorXcd rhs;
    int N;        // value unknowns
    int nb, nc;   // borders / constraints
};

Mat effectiveA(const BvpOperator& op, int node) {
    if (op.adjoint) return -op.A[node].transpose();
    return op.A[node];
}

Assembled assemble(const BvpOperator& op, const std::vector<CVec>& rhs_gauss,
                   const std::vector<BvpConstraint>& constraints,
                   const std::vector<MeshFunction>& borders) {
    const Mesh& mesh = *op.mesh;
    const int n = op.n, ncol = mesh.ncol(), ntst = mesh.ntst();
    const int N = n * mesh.nPoints();
    const int nc = static_cast<int>(constraints.size());
    const int nb = static_cast<int>(borders.size());
    if (nc != nb)
        throw LcnfError("bvp: constraint rows must be balanced by border columns");

    Assembled out;
    out.N = N;
    out.nb = nb;
    out.nc = nc;
    const int rows = n * mesh.nGauss() + n + nc;
    const int cols = N + nb;
    out.M.resize(rows, cols);
    out.rhs = Eigen::VectorXcd::Zero(rows);

    std::vector<Triplet> trip;
    trip.reserve(static_cast<size_t>(n) * mesh.nGauss() * (ncol + 1) * n + 4 * N);

    const Mat& Lg = mesh.basisAtGauss();
    const Mat& Lgd = mesh.basisDerivAtGauss();

    int row = 0;
    for (int j = 0; j < ntst; ++j) {
        const double invLenT = 1.0 / (mesh.intervalLen(j) * op.T);
        for (int g = 0; g < ncol; ++g) {
            const int node = op.nodeIndex(j, g);
            const Mat Aeff = effectiveA(op, node);
            for (int i = 0; i <= ncol; ++i) {
                const int colBase = n * (j * ncol + i);
                const double dldt = Lgd(g, i) * invLenT;
                const double l = Lg(g, i);
                for (int r = 0; r < n; ++r) {
                    trip.emplace_back(row + r, colBase + r, Cplx(dldt) + op.shift * l);
                    for (int c = 0; c < n; ++c) {
                        const double a = Aeff(r, c);
                        if (a != 0.0) trip.emplace_back(row + r, colBase + c, Cplx(-l * a));
                    }
                }
            }
            if (!rhs_gauss.empty())
                for (int r = 0; r < n; ++r) out.rhs[row + r] = rhs_gauss[node][r];
            // Border columns carry the functions weighted by quadrature.
            for (int b = 0; b < nb; ++b) {
                const CVec bv = borders[b].atGauss(j, g) * (mesh.gaussWeight(j, g) * op.T);
                for (int r = 0; r < n; ++r)
                    if (bv[r] != 0.0) trip.emplace_back(row + r, N + b, bv[r]);
            }
            row += n;
        }
    }

    // Boundary rows: h(T) - sign*h(0) = 0.
    const int last = n * (mesh.nPoints() - 1);
    for (int r = 0; r < n; ++r) {
        trip.emplace_back(row + r, last + r, Cplx(1.0));
        trip.emplace_back(row + r, r, Cplx(-double(op.boundary_sign)));
    }
    row += n;

    // Integral constraint rows.
    for (int c = 0; c < nc; ++c) {
        Eigen::VectorXcd dense = Eigen::VectorXcd::Zero(N);
        const MeshFunction& w = constraints[c].w;
        for (int j = 0; j < ntst; ++j)
            for (int g = 0; g < ncol; ++g) {
                const CVec wv = w.atGauss(j, g).conjugate() * (mesh.gaussWeight(j, g) * op.T);
                for (int i = 0; i <= ncol; ++i) {
                    const double l = Lg(g, i);
                    const int colBase = n * (j * ncol + i);
                    for (int r = 0; r < n; ++r) dense[colBase + r] += wv[r] * l;
                }
            }
        for (int k = 0; k < N; ++k)
            if (dense[k] != 0.0) trip.emplace_back(row, k, dense[k]);
        out.rhs[row] = constraints[c].target;
        ++row;
    }

    out.M.setFromTriplets(trip.begin(), trip.end());
    return out;
}

// Rough 1-norm condition estimate from the factorization (Hager-style, two
// passes).
double conditionEstimate(const SpMat& M, Eigen::SparseLU<SpMat>& lu,
                         Eigen::SparseLU<SpMat>& luT, double normM) {
    const int nn = static_cast<int>(M.rows());
    Eigen::VectorXcd x = Eigen::VectorXcd::Constant(nn, Cplx(1.0 / nn));
    double est = 0.0;
    for (int it = 0; it < 2; ++it) {
        Eigen::VectorXcd y = lu.solve(x);
        est = y.template lpNorm<1>();
        Eigen::VectorXcd xi(nn);
        for (int i = 0; i < nn; ++i)
            xi[i] = y[i] == Cplx(0.0) ? Cplx(1.0) : y[i] / std::abs(y[i]);
        Eigen::VectorXcd z = luT.solve(xi);
        int jmax = 0;
        z.cwiseAbs().maxCoeff(&jmax);
        x.setZero();
        x[jmax] = 1.0;
    }
    return est * normM;
}

}  // namespace

double operator_residual(const BvpOperator& op, const MeshFunction& h,
                         const std::vector<CVec>* rhs_gauss) {
    const Mesh& mesh = *op.mesh;
    double num = 0.0, den = 0.0;
    for (int j = 0; j < mesh.ntst(); ++j)
        for (int g = 0; g < mesh.ncol(); ++g) {
            const int node = op.nodeIndex(j, g);
            CVec r = h.derivAtGauss(j, g) + op.shift * h.atGauss(j, g) -
                     effectiveA(op, node) * h.atGauss(j, g);
            if (rhs_gauss) r -= (*rhs_gauss)[node];
            const double wq = mesh.gaussWeight(j, g);
            num += wq * r.squaredNorm();
            den += wq * h.atGauss(j, g).squaredNorm();
        }
    return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

BvpSolution solve_linear_bvp(const BvpOperator& op, const std::vector<CVec>& rhs_gauss,
                             const std::vector<BvpConstraint>& constraints,
                             const std::vector<MeshFunction>& borders,
                             double cond_threshold) {
    Assembled a = assemble(op, rhs_gauss, constraints, borders);

    Eigen::SparseLU<SpMat> lu;
    lu.compute(a.M);
    if (lu.info() != Eigen::Success)
        throw NumericallySingular("bvp: sparse LU factorization failed");

    SpMat Mt = a.M.adjoint();
    Eigen::SparseLU<SpMat> luT;
    luT.compute(Mt);
    if (luT.info() != Eigen::Success)
        throw NumericallySingular("bvp: adjoint factorization failed");

    double norm1 = 0.0;
    for (int k = 0; k < a.M.outerSize(); ++k) {
        double s = 0.0;
        for (SpMat::InnerIterator it(a.M, k); it; ++it) s += std::abs(it.value());
        norm1 = std::max(norm1, s);
    }
    const double cond = conditionEstimate(a.M, lu, luT, norm1);
    if (cond > cond_threshold)
        throw NumericallySingular("bvp: condition estimate " + std::to_string(cond) +
                                  " exceeds threshold");

    Eigen::VectorXcd x = lu.solve(a.rhs);
    if (lu.info() != Eigen::Success) throw NumericallySingular("bvp: solve failed");

    BvpSolution sol;
    const int n = op.n;
    CMat vals(n, op.mesh->nPoints());
    for (int idx = 0; idx < op.mesh->nPoints(); ++idx)
        vals.col(idx) = x.segment(n * idx, n);
    sol.h = MeshFunction(op.mesh, op.T, std::move(vals));
    for (int b = 0; b < a.nb; ++b) sol.border_multipliers.push_back(x[a.N + b]);

    sol.residual_norm = operator_residual(op, sol.h, rhs_gauss.empty() ? nullptr : &rhs_gauss);
    for (size_t c = 0; c < constraints.size(); ++c) {
        const Cplx got = inner_product(constraints[c].w, sol.h);
        sol.constraint_residual =
            std::max(sol.constraint_residual, std::abs(got - constraints[c].target));
    }
    if (sol.constraint_residual > 1e-8 * std::max(1.0, norm_l2(sol.h)))
        throw ConstraintInconsistent("bvp: constraint residual " +
                                     std::to_string(sol.constraint_residual));
    return sol;
}

MeshFunction solve_kernel(const BvpOperator& op, const MeshFunction* norm_w,
                          Cplx norm_target, double kernel_tol) {
    const Mesh& mesh = *op.mesh;
    std::mt19937 rng(12345 + 17 * op.n + mesh.ntst());
    std::normal_distribution<double> dist;

    MeshFunction probe(op.mesh, op.T, op.n);
    for (int idx = 0; idx < mesh.nPoints(); ++idx)
        for (int r = 0; r < op.n; ++r) probe.values()(r, idx) = Cplx(dist(rng), dist(rng));

    double Ascale = 0.0;
    for (const auto& Am : op.A) Ascale = std::max(Ascale, Am.cwiseAbs().maxCoeff());
    Ascale += std::abs(op.shift) + 1.0;

    MeshFunction h;
    Cplx mult = 0.0;
    MeshFunction row = probe;
    for (int pass = 0; pass < 3; ++pass) {
        BvpSolution sol =
            solve_linear_bvp(op, {}, {BvpConstraint{row, 1.0}}, {probe}, 1e14);
        h = sol.h;
        mult = sol.border_multipliers[0];
        const double nh = norm_l2(h);
        if (nh < 1e-14) throw KernelDimensionMismatch("kernel solve degenerated");
        row = h.scaled(1.0 / (nh * nh));  // next pass: int <h/|h|^2, h> = 1
    }

    const double rel = operator_residual(op, h) / Ascale;
    if (rel > kernel_tol)
        throw KernelDimensionMismatch("operator kernel residual " + std::to_string(rel) +
                                      " above tolerance (no isolated kernel)");

    if (norm_w) {
        const Cplx cur = inner_product(*norm_w, h);
        if (std::abs(cur) < 1e-12 * norm_l2(*norm_w) * norm_l2(h))
            throw NormalizationDegenerate("kernel normalization integral below 1e-12");
        return h.scaled(norm_target / cur);
    }
    return h.scaled(1.0 / norm_l2(h));
}

}  // namespace lcnf
