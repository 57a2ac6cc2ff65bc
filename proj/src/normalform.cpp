#include "lcnf/normalform.hpp"

#include <cmath>

#include "nf_internal.hpp"

namespace lcnf {

using nf::GaussFn;
using nf::Work;

Cplx NormalFormReport::coef(const std::string& name) const {
    auto it = coefficients.find(name);
    if (it == coefficients.end())
        throw MissingHigherOrder("coefficient " + name + " not computed at this order");
    return it->second;
}

namespace nf {

Work Work::make(const OdeSystem& sys, const Codim2Point& pt, const NfOptions& opts) {
    Work w;
    w.F = sys.compile(pt.orbit.params);
    w.mesh = pt.orbit.profile.mesh();
    w.T = pt.orbit.period;
    w.n = w.F->dim();
    w.opts = opts;
    const Mesh& m = *w.mesh;
    for (int j = 0; j < m.ntst(); ++j)
        for (int g = 0; g < m.ncol(); ++g) {
            const Vec u = pt.orbit.profile.atGauss(j, g).real();
            w.u0g.push_back(u);
            w.Ag.push_back(w.F->jacobian(u));
            w.wq.push_back(m.gaussWeight(j, g) * w.T);
        }
    CMat fv(w.n, m.nPoints());
    for (int idx = 0; idx < m.nPoints(); ++idx)
        fv.col(idx) = w.F->rhs(pt.orbit.profile.atPoint(idx).real()).cast<Cplx>();
    w.Fmf = MeshFunction(w.mesh, w.T, std::move(fv));
    w.Fg = GaussFn::of(w.Fmf);
    return w;
}

MeshFunction Work::solveH(Cplx shift, int bsign, const std::function<CVec(int)>& rhsExpr,
                          const MeshFunction* constraint_w, const MeshFunction* border,
                          const std::string& diag_key) const {
    BvpOperator op = makeOp(shift, false, bsign);
    std::vector<CVec> rhs;
    rhs.reserve(nodes());
    for (int node = 0; node < nodes(); ++node) rhs.push_back(rhsExpr(node));

    std::vector<BvpConstraint> cons;
    std::vector<MeshFunction> bords;
    if (constraint_w) {
        cons.push_back(BvpConstraint{*constraint_w, 0.0});
        bords.push_back(*border);
    }
    BvpSolution sol = solve_linear_bvp(op, rhs, cons, bords, opts.cond_threshold);
    diag(diag_key + ".residual", sol.residual_norm);
    if (!sol.border_multipliers.empty())
        diag(diag_key + ".border_multiplier", std::abs(sol.border_multipliers[0]));
    return sol.h;
}

MeshFunction realify(const MeshFunction& f, double tol) {
    // Rotate by the phase minimizing the imaginary-part energy.
    Cplx s = 0.0;
    for (int idx = 0; idx < f.values().cols(); ++idx)
        for (int r = 0; r < f.n(); ++r) s += f.values()(r, idx) * f.values()(r, idx);
    const double alpha = -0.5 * std::arg(s);
    MeshFunction g = f.scaled(std::polar(1.0, alpha));
    const double imn = g.values().imag().norm();
    const double ren = g.values().real().norm();
    if (imn > tol * std::max(1.0, ren))
        throw LcnfError("realify: function is not a rotated real function");
    return g.realPart();
}

MeshFunction fix_phase(const MeshFunction& f, double extra_rotation) {
    int best = 0;
    double bm = -1.0;
    const CVec v0 = f.atPoint(0);
    for (int r = 0; r < f.n(); ++r)
        if (std::abs(v0[r]) > bm) {
            bm = std::abs(v0[r]);
            best = r;
        }
    if (bm < 1e-14) throw NormalizationDegenerate("fix_phase: zero function");
    Cplx rot = std::conj(v0[best]) / bm;
    return f.scaled(rot * std::polar(1.0, extra_rotation));
}

const GaussFn& HStore::gauss(const HIndex& k) const {
    auto it = g_.find(k);
    if (it != g_.end()) return it->second;
    auto itc = g_.find(conjKey(k));
    if (itc == g_.end())
        throw DependencyMissing("center-manifold function h(" + std::to_string(k[0]) +
                                std::to_string(k[1]) + std::to_string(k[2]) +
                                std::to_string(k[3]) + ") not solved yet");
    auto cached = conj_g_.find(k);
    if (cached == conj_g_.end())
        cached = conj_g_.emplace(k, itc->second.conj()).first;
    return cached->second;
}

const MeshFunction& HStore::fn(const HIndex& k) const {
    auto it = m_.find(k);
    if (it != m_.end()) return it->second;
    auto itc = m_.find(conjKey(k));
    if (itc == m_.end()) throw DependencyMissing("center-manifold function missing");
    auto cached = conj_m_.find(k);
    if (cached == conj_m_.end()) cached = conj_m_.emplace(k, itc->second.conjugate()).first;
    return cached->second;
}

}  // namespace nf

// ---------------------------------------------------------------------------
// Eigenfunction bundles.
// ---------------------------------------------------------------------------

namespace {

// v2-style pair: kernel of (d/dtau - A + i w) and its adjoint, normalized
// so int <v,v> = 1, int <v*, v> = 1, with the phase convention applied.
void solveComplexPair(const Work& w, double omega, int bsign, double rotation,
                      MeshFunction& v, MeshFunction& vstar,
                      std::map<std::string, double>& res, const std::string& tag) {
    BvpOperator op = w.makeOp(kI * omega, false, bsign);
    MeshFunction vraw = solve_kernel(op, nullptr, 0.0, w.opts.kernel_tol);
    const Cplx ip = inner_product(vraw, vraw) ;
    MeshFunction vn = vraw.scaled(1.0 / std::sqrt(std::abs(ip)));
    v = nf::fix_phase(vn, rotation);
    res[tag + ".residual"] = operator_residual(op, v);

    BvpOperator opA = w.makeOp(kI * omega, true, bsign);
    vstar = solve_kernel(opA, &v, 1.0, w.opts.kernel_tol);
    res[tag + "_star.residual"] = operator_residual(opA, vstar);
    res[tag + "_star.normalization"] = std::abs(inner_product(vstar, v) - 1.0);
}

}  // namespace

EigenfunctionBundle build_eigenbundle(const OdeSystem& sys, const Codim2Point& point,
                                      const NfOptions& opts) {
    Work w = Work::make(sys, point, opts);
    EigenfunctionBundle b;
    b.kind = point.kind;
    b.omega1 = point.omega1;
    b.omega2 = point.omega2;

    switch (point.kind) {
        case BifKind::LPNS: {
            // phi*: periodic adjoint kernel. Its scale is fixed against v1
            // below; v1 solves the generalized-eigenfunction system driven
            // by F(u0).
            BvpOperator opA = w.makeOp(0.0, true, +1);
            MeshFunction phiRaw = nf::realify(solve_kernel(opA, nullptr, 0.0, opts.kernel_tol));
            b.residuals["phi_star.residual"] = operator_residual(opA, phiRaw);
            b.residuals["lpns.orthogonality"] = std::abs(inner_product(phiRaw, w.Fmf));

            std::vector<CVec> rhs;
            for (int node = 0; node < w.nodes(); ++node) rhs.push_back(w.Fg.v[node]);
            BvpOperator op0 = w.makeOp(0.0, false, +1);
            BvpSolution v1sol = solve_linear_bvp(
                op0, rhs, {BvpConstraint{w.Fmf, 0.0}}, {phiRaw}, opts.cond_threshold);
            b.v1 = nf::realify(v1sol.h);
            b.residuals["v1.residual"] = v1sol.residual_norm;
            b.residuals["v1.border_multiplier"] = std::abs(v1sol.border_multipliers[0]);

            const Cplx ip = inner_product(phiRaw, b.v1);
            if (std::abs(ip) < 1e-12)
                throw NormalizationDegenerate("LPNS: <phi*, v1> below 1e-12");
            b.phi_star = phiRaw.scaled(1.0 / std::conj(ip));

            // v1*: adjoint generalized eigenfunction driven by -phi*.
            std::vector<CVec> rhs2;
            nf::GaussFn phig = nf::GaussFn::of(b.phi_star);
            for (int node = 0; node < w.nodes(); ++node) rhs2.push_back(-phig.v[node]);
            BvpSolution v1ssol = solve_linear_bvp(
                w.makeOp(0.0, true, +1), rhs2, {BvpConstraint{b.v1, 0.0}}, {w.Fmf},
                opts.cond_threshold);
            b.v1_star = nf::realify(v1ssol.h);
            b.residuals["v1_star.residual"] = v1ssol.residual_norm;
            b.residuals["v1_star.border_multiplier"] = std::abs(v1ssol.border_multipliers[0]);
            b.residuals["lpns.normalization"] =
                std::abs(inner_product(b.v1_star, w.Fmf) - 1.0);

            solveComplexPair(w, point.omega1, +1, opts.phase_rotation2, b.v2, b.v2_star,
                             b.residuals, "v2");
            break;
        }
        case BifKind::PDNS: {
            BvpOperator opA = w.makeOp(0.0, true, +1);
            b.phi_star = nf::realify(solve_kernel(opA, &w.Fmf, 1.0, opts.kernel_tol));
            b.residuals["phi_star.residual"] = operator_residual(opA, b.phi_star);

            BvpOperator op1 = w.makeOp(0.0, false, -1);
            MeshFunction v1raw = solve_kernel(op1, nullptr, 0.0, opts.kernel_tol);
            b.v1 = nf::fix_phase(nf::realify(v1raw).scaled(
                       1.0 / std::sqrt(std::abs(inner_product(v1raw, v1raw)))), 0.0);
            b.residuals["v1.residual"] = operator_residual(op1, b.v1);

            BvpOperator op1A = w.makeOp(0.0, true, -1);
            b.v1_star = nf::realify(solve_kernel(op1A, &b.v1, 1.0, opts.kernel_tol));
            b.residuals["v1_star.residual"] = operator_residual(op1A, b.v1_star);

            solveComplexPair(w, point.omega1, +1, opts.phase_rotation2, b.v2, b.v2_star,
                             b.residuals, "v2");
            break;
        }
        case BifKind::NSNS: {
            BvpOperator opA = w.makeOp(0.0, true, +1);
            b.phi_star = nf::realify(solve_kernel(opA, &w.Fmf, 1.0, opts.kernel_tol));
            b.residuals["phi_star.residual"] = operator_residual(opA, b.phi_star);
            solveComplexPair(w, point.omega1, +1, opts.phase_rotation1, b.v1, b.v1_star,
                             b.residuals, "v1");
            solveComplexPair(w, point.omega2, +1, opts.phase_rotation2, b.v2, b.v2_star,
                             b.residuals, "v2");
            break;
        }
    }
    return b;
}

CenterManifoldTerms solve_center_manifold_terms(const OdeSystem& sys,
                                                const Codim2Point& point,
                                                const EigenfunctionBundle& bundle,
                                                const std::vector<HIndex>& needed,
                                                const NfOptions& opts) {
    int maxOrder = 0;
    for (const auto& k : needed) maxOrder = std::max(maxOrder, k[0] + k[1] + k[2] + k[3]);
    const bool high = maxOrder > (point.kind == BifKind::LPNS ? 2 : 3);

    CenterManifoldTerms all;
    NfOptions o = opts;
    o.capture_h = &all;
    switch (point.kind) {
        case BifKind::LPNS:
            lpns_coefficients(sys, point, bundle, 3, o);
            break;
        case BifKind::PDNS:
            pdns_coefficients(sys, point, bundle, high ? 5 : 3, o);
            break;
        default:
            nsns_coefficients(sys, point, bundle, high ? 5 : 3, o);
            break;
    }

    auto conjKey = [&](const HIndex& k) {
        return point.kind == BifKind::NSNS ? nf::conj4(k) : nf::conj3(k);
    };
    CenterManifoldTerms out;
    out.border_multipliers = all.border_multipliers;
    for (const auto& k : needed) {
        auto it = all.h.find(k);
        if (it != all.h.end()) {
            out.h[k] = it->second;
            continue;
        }
        auto itc = all.h.find(conjKey(k));
        if (itc == all.h.end())
            throw DependencyMissing("requested center-manifold index is not part of "
                                    "this bifurcation's expansion order");
        out.h[k] = itc->second.conjugate();
    }
    return out;
}

NormalFormReport normal_form(const OdeSystem& sys, const Codim2Point& point,
                             bool high_order, const NfOptions& opts) {
    EigenfunctionBundle b = build_eigenbundle(sys, point, opts);
    switch (point.kind) {
        case BifKind::LPNS:
            return lpns_coefficients(sys, point, b, high_order ? 3 : 2, opts);
        case BifKind::PDNS:
            return pdns_coefficients(sys, point, b, high_order ? 5 : 3, opts);
        default:
            return nsns_coefficients(sys, point, b, high_order ? 5 : 3, opts);
    }
}

}  // namespace lcnf
