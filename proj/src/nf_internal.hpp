#pragma once

// Shared machinery of the normal-form coefficient computations.

#include <functional>

#include "lcnf/normalform.hpp"

namespace lcnf::nf {

// Values and time derivatives of a mesh function at all Gauss nodes.
struct GaussFn {
    std::vector<CVec> v, dv;

    static GaussFn of(const MeshFunction& f) {
        const Mesh& m = *f.mesh();
        GaussFn g;
        g.v.reserve(m.nGauss());
        g.dv.reserve(m.nGauss());
        for (int j = 0; j < m.ntst(); ++j)
            for (int gg = 0; gg < m.ncol(); ++gg) {
                g.v.push_back(f.atGauss(j, gg));
                g.dv.push_back(f.derivAtGauss(j, gg));
            }
        return g;
    }

    GaussFn conj() const {
        GaussFn g;
        g.v.reserve(v.size());
        g.dv.reserve(dv.size());
        for (auto& x : v) g.v.push_back(x.conjugate());
        for (auto& x : dv) g.dv.push_back(x.conjugate());
        return g;
    }
};

// Per-point workspace: cycle data at Gauss nodes plus BVP plumbing.
struct Work {
    std::shared_ptr<const CompiledRhs> F;
    std::shared_ptr<const Mesh> mesh;
    double T = 0.0;
    int n = 0;
    std::vector<Vec> u0g;
    std::vector<Mat> Ag;
    std::vector<double> wq;  // quadrature weight (tau units) per node
    MeshFunction Fmf;        // F(u0) on the mesh (rep points)
    GaussFn Fg;
    NfOptions opts;
    std::map<std::string, double>* diagnostics = nullptr;

    static Work make(const OdeSystem& sys, const Codim2Point& pt, const NfOptions& opts);

    int nodes() const { return mesh->nGauss(); }

    CVec mlf(int order, int node, const std::vector<CVec>& dirs) const {
        return F->mlf(order, u0g[node], dirs);
    }
    CVec B(int node, const CVec& a, const CVec& b) const { return mlf(2, node, {a, b}); }
    CVec C(int node, const CVec& a, const CVec& b, const CVec& c) const {
        return mlf(3, node, {a, b, c});
    }
    CVec D(int node, const CVec& a, const CVec& b, const CVec& c, const CVec& d) const {
        if (F->polyDegree() >= 0 && F->polyDegree() < 4) return CVec::Zero(n);
        return mlf(4, node, {a, b, c, d});
    }
    CVec E(int node, const CVec& a, const CVec& b, const CVec& c, const CVec& d,
           const CVec& e) const {
        if (F->polyDegree() >= 0 && F->polyDegree() < 5) return CVec::Zero(n);
        return mlf(5, node, {a, b, c, d, e});
    }
    CVec Av(int node, const CVec& x) const { return Ag[node] * x; }

    // int_0^T <w, expr(node)> dtau by Gauss quadrature.
    Cplx pairIntegral(const GaussFn& w, const std::function<CVec(int)>& expr) const {
        Cplx s = 0.0;
        for (int node = 0; node < nodes(); ++node) s += wq[node] * w.v[node].dot(expr(node));
        return s;
    }

    BvpOperator makeOp(Cplx shift, bool adjoint, int boundary_sign) const {
        BvpOperator op;
        op.mesh = mesh;
        op.T = T;
        op.n = n;
        op.A = Ag;
        op.shift = shift;
        op.adjoint = adjoint;
        op.boundary_sign = boundary_sign;
        return op;
    }

    // Solves (d/dtau - A + shift) h = rhs with the given boundary sign.
    // For singular operators pass the orthogonality weight (constraint row,
    // target 0) and the adjoint-kernel border function; the border
    // multiplier is recorded under diag_key.
    MeshFunction solveH(Cplx shift, int bsign, const std::function<CVec(int)>& rhsExpr,
                        const MeshFunction* constraint_w, const MeshFunction* border,
                        const std::string& diag_key) const;

    void diag(const std::string& key, double value) const {
        if (diagnostics) (*diagnostics)[key] = value;
    }
};

// Rotates a complex function that spans a real line back to real values.
MeshFunction realify(const MeshFunction& f, double tol = 1e-7);
// Phase convention: largest-magnitude component of f(0) made real positive,
// then an extra rotation e^{i phi} is applied.
MeshFunction fix_phase(const MeshFunction& f, double extra_rotation);

// Conjugate-index map for the two families.
inline HIndex conj3(const HIndex& k) { return {k[0], k[2], k[1], 0}; }
inline HIndex conj4(const HIndex& k) { return {k[1], k[0], k[3], k[2]}; }

class HStore {
public:
    explicit HStore(bool fourIndex) : four_(fourIndex) {}

    bool has(const HIndex& k) const { return m_.count(k) || m_.count(conjKey(k)); }
    void put(const HIndex& k, MeshFunction f, GaussFn g) {
        m_[k] = std::move(f);
        g_[k] = std::move(g);
    }
    const std::map<HIndex, MeshFunction>& all() const { return m_; }
    const GaussFn& gauss(const HIndex& k) const;
    const MeshFunction& fn(const HIndex& k) const;

private:
    HIndex conjKey(const HIndex& k) const { return four_ ? conj4(k) : conj3(k); }

    bool four_;
    std::map<HIndex, MeshFunction> m_;
    std::map<HIndex, GaussFn> g_;
    mutable std::map<HIndex, MeshFunction> conj_m_;
    mutable std::map<HIndex, GaussFn> conj_g_;
};

inline CVec real2(const CVec& x) { return x + x.conjugate(); }  // 2*Re(...)

}  // namespace lcnf::nf
