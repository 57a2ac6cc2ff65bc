#include "nf_internal.hpp"

namespace lcnf {

using nf::GaussFn;
using nf::HStore;
using nf::real2;
using nf::Work;

namespace {

// The two Neimark-Sacker sectors obey the same formula set with the roles
// of (v1, omega1, a-coefficients) and (v2, omega2, b-coefficients)
// exchanged and the center-manifold indices mapped (i,j,k,l) -> (k,l,i,j).
// Each computation below is written once for the "first" slot and run for
// both slot assignments; the store is keyed by true indices so shared
// functions are solved once.
struct Slot {
    const Work& w;
    HStore& hs;
    std::map<std::string, Cplx>& c;
    bool swapped;
    const GaussFn *v1, *v1c, *v2, *v2c, *phis, *v1s, *v2s;
    const MeshFunction *v1f, *v2f, *v1sf, *v2sf, *phif;
    double w1, w2;

    HIndex map(int i, int j, int k, int l) const {
        return swapped ? HIndex{k, l, i, j} : HIndex{i, j, k, l};
    }
    const GaussFn& H(int i, int j, int k, int l) const { return hs.gauss(map(i, j, k, l)); }
    bool have(int i, int j, int k, int l) const { return hs.has(map(i, j, k, l)); }

    static std::string mapName(const std::string& name, bool sw) {
        if (!sw) return name;
        static const std::map<std::string, std::string> tbl = {
            {"a2100", "b0021"},         {"b0021", "a2100"},
            {"a1011", "b1110"},         {"b1110", "a1011"},
            {"b1101", "a0111"},         {"a0111", "b1101"},
            {"alpha1100", "alpha0011"}, {"alpha0011", "alpha1100"},
            {"alpha2200", "alpha0022"}, {"alpha0022", "alpha2200"},
            {"alpha1111", "alpha1111"}, {"a3200", "b0032"},
            {"a1022", "b2210"},         {"a2111", "b1121"}};
        return tbl.at(name);
    }
    Cplx coef(const std::string& name) const { return c.at(mapName(name, swapped)); }
    void setCoef(const std::string& name, Cplx v) { c[mapName(name, swapped)] = v; }

    void solve(int i, int j, int k, int l, Cplx shift,
               const std::function<CVec(int)>& rhs, const MeshFunction* cw,
               const MeshFunction* border) {
        if (have(i, j, k, l)) return;
        const HIndex key = map(i, j, k, l);
        const std::string tag = "h" + std::to_string(key[0]) + std::to_string(key[1]) +
                                std::to_string(key[2]) + std::to_string(key[3]);
        MeshFunction h = w.solveH(shift, +1, rhs, cw, border, tag);
        hs.put(key, h, GaussFn::of(h));
    }
};

void stageOrder2(Slot& s) {
    const Work& w = s.w;
    const Cplx iw1 = kI * s.w1, iw2 = kI * s.w2;
    const Cplx al = w.pairIntegral(*s.phis, [&](int nd) {
        return w.B(nd, s.v1->v[nd], s.v1c->v[nd]);
    });
    s.setCoef("alpha1100", al);

    s.solve(2, 0, 0, 0, 2.0 * iw1, [&](int nd) {
        return w.B(nd, s.v1->v[nd], s.v1->v[nd]);
    }, nullptr, nullptr);
    s.solve(1, 1, 0, 0, 0.0, [&](int nd) {
        return CVec(w.B(nd, s.v1->v[nd], s.v1c->v[nd]) - al * w.Fg.v[nd]);
    }, s.phif, s.phif);
    s.solve(1, 0, 1, 0, iw1 + iw2, [&](int nd) {
        return w.B(nd, s.v1->v[nd], s.v2->v[nd]);
    }, nullptr, nullptr);
    s.solve(1, 0, 0, 1, iw1 - iw2, [&](int nd) {
        return w.B(nd, s.v1->v[nd], s.v2c->v[nd]);
    }, nullptr, nullptr);
}

void stageCubicCoefs(Slot& s) {
    const Work& w = s.w;
    const Cplx al_own = s.coef("alpha1100"), al_oth = s.coef("alpha0011");
    const Cplx a2100 = 0.5 * w.pairIntegral(*s.v1s, [&](int nd) {
        return CVec(w.C(nd, s.v1->v[nd], s.v1->v[nd], s.v1c->v[nd]) +
                    2.0 * w.B(nd, s.v1->v[nd], s.H(1, 1, 0, 0).v[nd]) +
                    w.B(nd, s.v1c->v[nd], s.H(2, 0, 0, 0).v[nd]) -
                    2.0 * al_own * w.Av(nd, s.v1->v[nd]));
    });
    const Cplx a1011 = w.pairIntegral(*s.v1s, [&](int nd) {
        return CVec(w.C(nd, s.v1->v[nd], s.v2->v[nd], s.v2c->v[nd]) +
                    w.B(nd, s.v1->v[nd], s.H(0, 0, 1, 1).v[nd]) +
                    w.B(nd, s.v2->v[nd], s.H(1, 0, 0, 1).v[nd]) +
                    w.B(nd, s.v2c->v[nd], s.H(1, 0, 1, 0).v[nd]) -
                    al_oth * w.Av(nd, s.v1->v[nd]));
    });
    s.setCoef("a2100", a2100);
    s.setCoef("a1011", a1011);
}

void stageOrder3H(Slot& s) {
    const Work& w = s.w;
    const Cplx iw1 = kI * s.w1, iw2 = kI * s.w2;
    const Cplx al_own = s.coef("alpha1100"), al_oth = s.coef("alpha0011");
    const Cplx a2100 = s.coef("a2100"), a1011 = s.coef("a1011");
    const Cplx b1110 = s.coef("b1110");

    s.solve(3, 0, 0, 0, 3.0 * iw1, [&](int nd) {
        return CVec(w.C(nd, s.v1->v[nd], s.v1->v[nd], s.v1->v[nd]) +
                    3.0 * w.B(nd, s.v1->v[nd], s.H(2, 0, 0, 0).v[nd]));
    }, nullptr, nullptr);
    s.solve(2, 1, 0, 0, iw1, [&](int nd) {
        return CVec(w.C(nd, s.v1->v[nd], s.v1->v[nd], s.v1c->v[nd]) +
                    2.0 * w.B(nd, s.v1->v[nd], s.H(1, 1, 0, 0).v[nd]) +
                    w.B(nd, s.v1c->v[nd], s.H(2, 0, 0, 0).v[nd]) -
                    2.0 * a2100 * s.v1->v[nd] - 2.0 * al_own * w.Av(nd, s.v1->v[nd]));
    }, s.v1sf, s.v1sf);
    s.solve(2, 0, 1, 0, 2.0 * iw1 + iw2, [&](int nd) {
        return CVec(w.C(nd, s.v1->v[nd], s.v1->v[nd], s.v2->v[nd]) +
                    w.B(nd, s.v2->v[nd], s.H(2, 0, 0, 0).v[nd]) +
                    2.0 * w.B(nd, s.v1->v[nd], s.H(1, 0, 1, 0).v[nd]));
    }, nullptr, nullptr);
    s.solve(2, 0, 0, 1, 2.0 * iw1 - iw2, [&](int nd) {
        return CVec(w.C(nd, s.v1->v[nd], s.v1->v[nd], s.v2c->v[nd]) +
                    w.B(nd, s.v2c->v[nd], s.H(2, 0, 0, 0).v[nd]) +
                    2.0 * w.B(nd, s.v1->v[nd], s.H(1, 0, 0, 1).v[nd]));
    }, nullptr, nullptr);
    s.solve(1, 0, 2, 0, iw1 + 2.0 * iw2, [&](int nd) {
        return CVec(w.C(nd, s.v1->v[nd], s.v2->v[nd], s.v2->v[nd]) +
                    w.B(nd, s.v1->v[nd], s.H(0, 0, 2, 0).v[nd]) +
                    2.0 * w.B(nd, s.v2->v[nd], s.H(1, 0, 1, 0).v[nd]));
    }, nullptr, nullptr);
    s.solve(0, 1, 2, 0, -iw1 + 2.0 * iw2, [&](int nd) {
        return CVec(w.C(nd, s.v1c->v[nd], s.v2->v[nd], s.v2->v[nd]) +
                    w.B(nd, s.v1c->v[nd], s.H(0, 0, 2, 0).v[nd]) +
                    2.0 * w.B(nd, s.v2->v[nd], s.H(0, 1, 1, 0).v[nd]));
    }, nullptr, nullptr);
    s.solve(1, 1, 1, 0, iw2, [&](int nd) {
        return CVec(w.C(nd, s.v1->v[nd], s.v1c->v[nd], s.v2->v[nd]) +
                    w.B(nd, s.v1->v[nd], s.H(0, 1, 1, 0).v[nd]) +
                    w.B(nd, s.v1c->v[nd], s.H(1, 0, 1, 0).v[nd]) +
                    w.B(nd, s.v2->v[nd], s.H(1, 1, 0, 0).v[nd]) -
                    b1110 * s.v2->v[nd] - al_own * w.Av(nd, s.v2->v[nd]));
    }, s.v2sf, s.v2sf);
    s.solve(1, 0, 1, 1, iw1, [&](int nd) {
        return CVec(w.C(nd, s.v1->v[nd], s.v2->v[nd], s.v2c->v[nd]) +
                    w.B(nd, s.v1->v[nd], s.H(0, 0, 1, 1).v[nd]) +
                    w.B(nd, s.v2->v[nd], s.H(1, 0, 0, 1).v[nd]) +
                    w.B(nd, s.v2c->v[nd], s.H(1, 0, 1, 0).v[nd]) -
                    a1011 * s.v1->v[nd] - al_oth * w.Av(nd, s.v1->v[nd]));
    }, s.v1sf, s.v1sf);
}

CVec alpha2200Core(const Slot& s, int nd, const Cplx& al_own) {
    const Work& w = s.w;
    return CVec(w.D(nd, s.v1->v[nd], s.v1->v[nd], s.v1c->v[nd], s.v1c->v[nd]) +
                real2(w.C(nd, s.v1->v[nd], s.v1->v[nd], s.H(0, 2, 0, 0).v[nd])) +
                4.0 * w.C(nd, s.v1->v[nd], s.v1c->v[nd], s.H(1, 1, 0, 0).v[nd]) +
                w.B(nd, s.H(2, 0, 0, 0).v[nd], s.H(0, 2, 0, 0).v[nd]) +
                2.0 * w.B(nd, s.H(1, 1, 0, 0).v[nd], s.H(1, 1, 0, 0).v[nd]) +
                2.0 * real2(w.B(nd, s.v1->v[nd], s.H(1, 2, 0, 0).v[nd])) -
                4.0 * al_own * s.H(1, 1, 0, 0).dv[nd]);
}

void stageOrder45(Slot& s) {
    const Work& w = s.w;
    const Cplx iw1 = kI * s.w1, iw2 = kI * s.w2;
    const Cplx al_own = s.coef("alpha1100"), al_oth = s.coef("alpha0011");
    const Cplx a2100 = s.coef("a2100"), a1011 = s.coef("a1011");
    const Cplx b1110 = s.coef("b1110"), b1101 = s.coef("b1101");

    const Cplx al2200 = 0.25 * w.pairIntegral(*s.phis, [&](int nd) {
        return alpha2200Core(s, nd, al_own);
    });
    s.setCoef("alpha2200", al2200);

    // 4th-order center-manifold functions of this sector pairing.
    s.solve(3, 1, 0, 0, 2.0 * iw1, [&](int nd) {
        return CVec(w.D(nd, s.v1->v[nd], s.v1->v[nd], s.v1->v[nd], s.v1c->v[nd]) +
                    3.0 * w.C(nd, s.v1->v[nd], s.v1->v[nd], s.H(1, 1, 0, 0).v[nd]) +
                    3.0 * w.C(nd, s.v1->v[nd], s.v1c->v[nd], s.H(2, 0, 0, 0).v[nd]) +
                    w.B(nd, s.v1c->v[nd], s.H(3, 0, 0, 0).v[nd]) +
                    3.0 * w.B(nd, s.v1->v[nd], s.H(2, 1, 0, 0).v[nd]) +
                    3.0 * w.B(nd, s.H(2, 0, 0, 0).v[nd], s.H(1, 1, 0, 0).v[nd]) -
                    3.0 * al_own * s.H(2, 0, 0, 0).dv[nd] -
                    (6.0 * a2100 + 6.0 * iw1 * al_own) * s.H(2, 0, 0, 0).v[nd]);
    }, nullptr, nullptr);
    s.solve(2, 2, 0, 0, 0.0, [&](int nd) {
        return CVec(alpha2200Core(s, nd, al_own) -
                    8.0 * a2100.real() * s.H(1, 1, 0, 0).v[nd] -
                    4.0 * al2200 * w.Fg.v[nd]);
    }, s.phif, s.phif);
    s.solve(2, 1, 1, 0, iw1 + iw2, [&](int nd) {
        return CVec(w.D(nd, s.v1->v[nd], s.v1->v[nd], s.v1c->v[nd], s.v2->v[nd]) +
                    w.C(nd, s.v1->v[nd], s.v1->v[nd], s.H(0, 1, 1, 0).v[nd]) +
                    2.0 * w.C(nd, s.v1->v[nd], s.v1c->v[nd], s.H(1, 0, 1, 0).v[nd]) +
                    w.C(nd, s.v1c->v[nd], s.v2->v[nd], s.H(2, 0, 0, 0).v[nd]) +
                    2.0 * w.C(nd, s.v1->v[nd], s.v2->v[nd], s.H(1, 1, 0, 0).v[nd]) +
                    w.B(nd, s.v1c->v[nd], s.H(2, 0, 1, 0).v[nd]) +
                    2.0 * w.B(nd, s.H(1, 0, 1, 0).v[nd], s.H(1, 1, 0, 0).v[nd]) +
                    w.B(nd, s.v2->v[nd], s.H(2, 1, 0, 0).v[nd]) +
                    w.B(nd, s.H(2, 0, 0, 0).v[nd], s.H(0, 1, 1, 0).v[nd]) +
                    2.0 * w.B(nd, s.v1->v[nd], s.H(1, 1, 1, 0).v[nd]) -
                    (2.0 * a2100 + 2.0 * b1110 + 2.0 * (iw1 + iw2) * al_own) *
                        s.H(1, 0, 1, 0).v[nd] -
                    2.0 * al_own * s.H(1, 0, 1, 0).dv[nd]);
    }, nullptr, nullptr);
    s.solve(2, 1, 0, 1, iw1 - iw2, [&](int nd) {
        return CVec(w.D(nd, s.v1->v[nd], s.v1->v[nd], s.v1c->v[nd], s.v2c->v[nd]) +
                    w.C(nd, s.v1->v[nd], s.v1->v[nd], s.H(0, 1, 0, 1).v[nd]) +
                    2.0 * w.C(nd, s.v1->v[nd], s.v1c->v[nd], s.H(1, 0, 0, 1).v[nd]) +
                    w.C(nd, s.v1c->v[nd], s.v2c->v[nd], s.H(2, 0, 0, 0).v[nd]) +
                    2.0 * w.C(nd, s.v1->v[nd], s.v2c->v[nd], s.H(1, 1, 0, 0).v[nd]) +
                    2.0 * w.B(nd, s.H(1, 0, 0, 1).v[nd], s.H(1, 1, 0, 0).v[nd]) +
                    2.0 * w.B(nd, s.v1->v[nd], s.H(1, 1, 0, 1).v[nd]) +
                    w.B(nd, s.v2c->v[nd], s.H(2, 1, 0, 0).v[nd]) +
                    w.B(nd, s.v1c->v[nd], s.H(2, 0, 0, 1).v[nd]) +
                    w.B(nd, s.H(2, 0, 0, 0).v[nd], s.H(0, 1, 0, 1).v[nd]) -
                    (2.0 * a2100 + 2.0 * b1101 + 2.0 * (iw1 - iw2) * al_own) *
                        s.H(1, 0, 0, 1).v[nd] -
                    2.0 * al_own * s.H(1, 0, 0, 1).dv[nd]);
    }, nullptr, nullptr);
    s.solve(2, 0, 1, 1, 2.0 * iw1, [&](int nd) {
        return CVec(w.D(nd, s.v1->v[nd], s.v1->v[nd], s.v2->v[nd], s.v2c->v[nd]) +
                    w.C(nd, s.v1->v[nd], s.v1->v[nd], s.H(0, 0, 1, 1).v[nd]) +
                    2.0 * w.C(nd, s.v1->v[nd], s.v2->v[nd], s.H(1, 0, 0, 1).v[nd]) +
                    w.C(nd, s.v2->v[nd], s.v2c->v[nd], s.H(2, 0, 0, 0).v[nd]) +
                    2.0 * w.C(nd, s.v1->v[nd], s.v2c->v[nd], s.H(1, 0, 1, 0).v[nd]) +
                    w.B(nd, s.v2c->v[nd], s.H(2, 0, 1, 0).v[nd]) +
                    w.B(nd, s.v2->v[nd], s.H(2, 0, 0, 1).v[nd]) +
                    w.B(nd, s.H(2, 0, 0, 0).v[nd], s.H(0, 0, 1, 1).v[nd]) +
                    2.0 * w.B(nd, s.H(1, 0, 0, 1).v[nd], s.H(1, 0, 1, 0).v[nd]) +
                    2.0 * w.B(nd, s.v1->v[nd], s.H(1, 0, 1, 1).v[nd]) -
                    2.0 * a1011 * s.H(2, 0, 0, 0).v[nd] -
                    al_oth * s.H(2, 0, 0, 0).dv[nd] -
                    2.0 * iw1 * al_oth * s.H(2, 0, 0, 0).v[nd]);
    }, nullptr, nullptr);
}

void stageQuintic(Slot& s) {
    const Work& w = s.w;
    const Cplx al_own = s.coef("alpha1100"), al_oth = s.coef("alpha0011");
    const Cplx al2200 = s.coef("alpha2200"), al0022 = s.coef("alpha0022");
    const Cplx al1111 = s.coef("alpha1111");
    const Cplx a2100 = s.coef("a2100"), a1011 = s.coef("a1011");

    const Cplx a3200 = (1.0 / 12.0) * w.pairIntegral(*s.v1s, [&](int nd) {
        return CVec(
            w.E(nd, s.v1->v[nd], s.v1->v[nd], s.v1->v[nd], s.v1c->v[nd], s.v1c->v[nd]) +
            w.D(nd, s.v1->v[nd], s.v1->v[nd], s.v1->v[nd], s.H(0, 2, 0, 0).v[nd]) +
            3.0 * w.D(nd, s.v1->v[nd], s.v1c->v[nd], s.v1c->v[nd], s.H(2, 0, 0, 0).v[nd]) +
            6.0 * w.D(nd, s.v1->v[nd], s.v1->v[nd], s.v1c->v[nd], s.H(1, 1, 0, 0).v[nd]) +
            6.0 * w.C(nd, s.v1->v[nd], s.H(1, 1, 0, 0).v[nd], s.H(1, 1, 0, 0).v[nd]) +
            3.0 * w.C(nd, s.v1->v[nd], s.v1->v[nd], s.H(1, 2, 0, 0).v[nd]) +
            w.C(nd, s.v1c->v[nd], s.v1c->v[nd], s.H(3, 0, 0, 0).v[nd]) +
            6.0 * w.C(nd, s.v1->v[nd], s.v1c->v[nd], s.H(2, 1, 0, 0).v[nd]) +
            6.0 * w.C(nd, s.v1c->v[nd], s.H(2, 0, 0, 0).v[nd], s.H(1, 1, 0, 0).v[nd]) +
            3.0 * w.C(nd, s.v1->v[nd], s.H(0, 2, 0, 0).v[nd], s.H(2, 0, 0, 0).v[nd]) +
            w.B(nd, s.H(0, 2, 0, 0).v[nd], s.H(3, 0, 0, 0).v[nd]) +
            2.0 * w.B(nd, s.v1c->v[nd], s.H(3, 1, 0, 0).v[nd]) +
            3.0 * w.B(nd, s.v1->v[nd], s.H(2, 2, 0, 0).v[nd]) +
            6.0 * w.B(nd, s.H(2, 1, 0, 0).v[nd], s.H(1, 1, 0, 0).v[nd]) +
            3.0 * w.B(nd, s.H(2, 0, 0, 0).v[nd], s.H(1, 2, 0, 0).v[nd]) -
            6.0 * al_own * s.H(2, 1, 0, 0).dv[nd] -
            12.0 * al2200 * w.Av(nd, s.v1->v[nd]));
    }) - al_own * a2100;
    s.setCoef("a3200", a3200);

    const Cplx a2111 = 0.5 * w.pairIntegral(*s.v1s, [&](int nd) {
        return CVec(
            w.E(nd, s.v1->v[nd], s.v1->v[nd], s.v1c->v[nd], s.v2->v[nd], s.v2c->v[nd]) +
            w.D(nd, s.v1->v[nd], s.v1->v[nd], s.v2->v[nd], s.H(0, 1, 0, 1).v[nd]) +
            w.D(nd, s.v1->v[nd], s.v1->v[nd], s.v1c->v[nd], s.H(0, 0, 1, 1).v[nd]) +
            w.D(nd, s.v1->v[nd], s.v1->v[nd], s.v2c->v[nd], s.H(0, 1, 1, 0).v[nd]) +
            2.0 * w.D(nd, s.v1->v[nd], s.v1c->v[nd], s.v2c->v[nd], s.H(1, 0, 1, 0).v[nd]) +
            2.0 * w.D(nd, s.v1->v[nd], s.v2->v[nd], s.v2c->v[nd], s.H(1, 1, 0, 0).v[nd]) +
            w.D(nd, s.v1c->v[nd], s.v2->v[nd], s.v2c->v[nd], s.H(2, 0, 0, 0).v[nd]) +
            2.0 * w.D(nd, s.v1->v[nd], s.v1c->v[nd], s.v2->v[nd], s.H(1, 0, 0, 1).v[nd]) +
            2.0 * w.C(nd, s.v1->v[nd], s.H(1, 0, 0, 1).v[nd], s.H(0, 1, 1, 0).v[nd]) +
            w.C(nd, s.v2->v[nd], s.v2c->v[nd], s.H(2, 1, 0, 0).v[nd]) +
            2.0 * w.C(nd, s.v2->v[nd], s.H(1, 0, 0, 1).v[nd], s.H(1, 1, 0, 0).v[nd]) +
            2.0 * w.C(nd, s.v1->v[nd], s.H(1, 1, 0, 0).v[nd], s.H(0, 0, 1, 1).v[nd]) +
            2.0 * w.C(nd, s.v1->v[nd], s.H(1, 0, 1, 0).v[nd], s.H(0, 1, 0, 1).v[nd]) +
            w.C(nd, s.v1c->v[nd], s.v2c->v[nd], s.H(2, 0, 1, 0).v[nd]) +
            w.C(nd, s.v1c->v[nd], s.v2->v[nd], s.H(2, 0, 0, 1).v[nd]) +
            2.0 * w.C(nd, s.v1->v[nd], s.v2c->v[nd], s.H(1, 1, 1, 0).v[nd]) +
            2.0 * w.C(nd, s.v2c->v[nd], s.H(1, 0, 1, 0).v[nd], s.H(1, 1, 0, 0).v[nd]) +
            2.0 * w.C(nd, s.v1->v[nd], s.v2->v[nd], s.H(1, 1, 0, 1).v[nd]) +
            w.C(nd, s.v2->v[nd], s.H(2, 0, 0, 0).v[nd], s.H(0, 1, 0, 1).v[nd]) +
            2.0 * w.C(nd, s.v1c->v[nd], s.H(1, 0, 0, 1).v[nd], s.H(1, 0, 1, 0).v[nd]) +
            w.C(nd, s.v1c->v[nd], s.H(2, 0, 0, 0).v[nd], s.H(0, 0, 1, 1).v[nd]) +
            w.C(nd, s.v2c->v[nd], s.H(2, 0, 0, 0).v[nd], s.H(0, 1, 1, 0).v[nd]) +
            2.0 * w.C(nd, s.v1->v[nd], s.v1c->v[nd], s.H(1, 0, 1, 1).v[nd]) +
            w.C(nd, s.v1->v[nd], s.v1->v[nd], s.H(0, 1, 1, 1).v[nd]) +
            w.B(nd, s.v2->v[nd], s.H(2, 1, 0, 1).v[nd]) +
            w.B(nd, s.H(2, 1, 0, 0).v[nd], s.H(0, 0, 1, 1).v[nd]) +
            2.0 * w.B(nd, s.v1->v[nd], s.H(1, 1, 1, 1).v[nd]) +
            w.B(nd, s.v1c->v[nd], s.H(2, 0, 1, 1).v[nd]) +
            w.B(nd, s.H(0, 1, 0, 1).v[nd], s.H(2, 0, 1, 0).v[nd]) +
            w.B(nd, s.H(2, 0, 0, 1).v[nd], s.H(0, 1, 1, 0).v[nd]) +
            w.B(nd, s.H(2, 0, 0, 0).v[nd], s.H(0, 1, 1, 1).v[nd]) +
            w.B(nd, s.v2c->v[nd], s.H(2, 1, 1, 0).v[nd]) +
            2.0 * w.B(nd, s.H(1, 0, 1, 1).v[nd], s.H(1, 1, 0, 0).v[nd]) +
            2.0 * w.B(nd, s.H(1, 0, 1, 0).v[nd], s.H(1, 1, 0, 1).v[nd]) +
            2.0 * w.B(nd, s.H(1, 0, 0, 1).v[nd], s.H(1, 1, 1, 0).v[nd]) -
            2.0 * al1111 * w.Av(nd, s.v1->v[nd]) -
            2.0 * al_own * s.H(1, 0, 1, 1).dv[nd] -
            al_oth * s.H(2, 1, 0, 0).dv[nd]);
    }) - al_oth * a2100 - al_own * a1011;
    s.setCoef("a2111", a2111);

    const Cplx a1022 = 0.25 * w.pairIntegral(*s.v1s, [&](int nd) {
        return CVec(
            w.E(nd, s.v1->v[nd], s.v2->v[nd], s.v2->v[nd], s.v2c->v[nd], s.v2c->v[nd]) +
            w.D(nd, s.v1->v[nd], s.v2c->v[nd], s.v2c->v[nd], s.H(0, 0, 2, 0).v[nd]) +
            w.D(nd, s.v1->v[nd], s.v2->v[nd], s.v2->v[nd], s.H(0, 0, 0, 2).v[nd]) +
            2.0 * w.D(nd, s.v2->v[nd], s.v2->v[nd], s.v2c->v[nd], s.H(1, 0, 0, 1).v[nd]) +
            2.0 * w.D(nd, s.v2->v[nd], s.v2c->v[nd], s.v2c->v[nd], s.H(1, 0, 1, 0).v[nd]) +
            4.0 * w.D(nd, s.v1->v[nd], s.v2->v[nd], s.v2c->v[nd], s.H(0, 0, 1, 1).v[nd]) +
            2.0 * w.C(nd, s.v1->v[nd], s.v2c->v[nd], s.H(0, 0, 2, 1).v[nd]) +
            w.C(nd, s.v1->v[nd], s.H(0, 0, 2, 0).v[nd], s.H(0, 0, 0, 2).v[nd]) +
            2.0 * w.C(nd, s.v1->v[nd], s.v2->v[nd], s.H(0, 0, 1, 2).v[nd]) +
            2.0 * w.C(nd, s.v2c->v[nd], s.H(1, 0, 0, 1).v[nd], s.H(0, 0, 2, 0).v[nd]) +
            4.0 * w.C(nd, s.v2->v[nd], s.H(1, 0, 0, 1).v[nd], s.H(0, 0, 1, 1).v[nd]) +
            2.0 * w.C(nd, s.v2->v[nd], s.H(1, 0, 1, 0).v[nd], s.H(0, 0, 0, 2).v[nd]) +
            w.C(nd, s.v2->v[nd], s.v2->v[nd], s.H(1, 0, 0, 2).v[nd]) +
            4.0 * w.C(nd, s.v2c->v[nd], s.H(1, 0, 1, 0).v[nd], s.H(0, 0, 1, 1).v[nd]) +
            4.0 * w.C(nd, s.v2->v[nd], s.v2c->v[nd], s.H(1, 0, 1, 1).v[nd]) +
            w.C(nd, s.v2c->v[nd], s.v2c->v[nd], s.H(1, 0, 2, 0).v[nd]) +
            2.0 * w.C(nd, s.v1->v[nd], s.H(0, 0, 1, 1).v[nd], s.H(0, 0, 1, 1).v[nd]) +
            w.B(nd, s.v1->v[nd], s.H(0, 0, 2, 2).v[nd]) +
            2.0 * w.B(nd, s.H(0, 0, 2, 1).v[nd], s.H(1, 0, 0, 1).v[nd]) +
            w.B(nd, s.H(0, 0, 2, 0).v[nd], s.H(1, 0, 0, 2).v[nd]) +
            2.0 * w.B(nd, s.H(0, 0, 1, 2).v[nd], s.H(1, 0, 1, 0).v[nd]) +
            4.0 * w.B(nd, s.H(0, 0, 1, 1).v[nd], s.H(1, 0, 1, 1).v[nd]) +
            2.0 * w.B(nd, s.v2->v[nd], s.H(1, 0, 1, 2).v[nd]) +
            w.B(nd, s.H(0, 0, 0, 2).v[nd], s.H(1, 0, 2, 0).v[nd]) +
            2.0 * w.B(nd, s.v2c->v[nd], s.H(1, 0, 2, 1).v[nd]) -
            4.0 * al_oth * s.H(1, 0, 1, 1).dv[nd] -
            4.0 * al0022 * w.Av(nd, s.v1->v[nd]));
    }) - al_oth * a1011;
    s.setCoef("a1022", a1022);
}

}  // namespace

NormalFormReport nsns_coefficients(const OdeSystem& sys, const Codim2Point& point,
                                   const EigenfunctionBundle& b, int order,
                                   const NfOptions& opts) {
    if (order != 3 && order != 5) throw LcnfError("NSNS order must be 3 or 5");
    NormalFormReport rep;
    rep.kind = BifKind::NSNS;
    rep.order = order;

    Work w = Work::make(sys, point, opts);
    w.diagnostics = &rep.diagnostics;

    const GaussFn v1 = GaussFn::of(b.v1), v1c = v1.conj();
    const GaussFn v2 = GaussFn::of(b.v2), v2c = v2.conj();
    const GaussFn phis = GaussFn::of(b.phi_star);
    const GaussFn v1s = GaussFn::of(b.v1_star), v2s = GaussFn::of(b.v2_star);

    HStore hs(true);
    std::map<std::string, Cplx> coef;
    Slot first{w,  hs, coef, false, &v1, &v1c, &v2, &v2c, &phis, &v1s, &v2s,
               &b.v1, &b.v2, &b.v1_star, &b.v2_star, &b.phi_star, b.omega1, b.omega2};
    Slot second{w, hs, coef, true,  &v2, &v2c, &v1, &v1c, &phis, &v2s, &v1s,
                &b.v2, &b.v1, &b.v2_star, &b.v1_star, &b.phi_star, b.omega2, b.omega1};

    stageOrder2(first);
    stageOrder2(second);
    stageCubicCoefs(first);
    stageCubicCoefs(second);
    coef["b1101"] = std::conj(coef["b1110"]);
    coef["a0111"] = std::conj(coef["a1011"]);
    stageOrder3H(first);
    stageOrder3H(second);

    if (order == 5) {
        stageOrder45(first);
        stageOrder45(second);

        // alpha1111 is swap-invariant; compute it once, then the shared
        // h1111 function that needs it.
        const Slot& s = first;
        const Cplx al_own = coef["alpha1100"], al_oth = coef["alpha0011"];
        const Cplx al1111 = w.pairIntegral(phis, [&](int nd) {
            return CVec(w.D(nd, v1.v[nd], v1c.v[nd], v2.v[nd], v2c.v[nd]) +
                        w.C(nd, v1.v[nd], v1c.v[nd], s.H(0, 0, 1, 1).v[nd]) +
                        real2(w.C(nd, v1.v[nd], v2.v[nd], s.H(0, 1, 0, 1).v[nd])) +
                        real2(w.C(nd, v1.v[nd], v2c.v[nd], s.H(0, 1, 1, 0).v[nd])) +
                        w.C(nd, v2.v[nd], v2c.v[nd], s.H(1, 1, 0, 0).v[nd]) +
                        real2(w.B(nd, v1.v[nd], s.H(0, 1, 1, 1).v[nd])) +
                        w.B(nd, s.H(0, 1, 1, 0).v[nd], s.H(1, 0, 0, 1).v[nd]) +
                        w.B(nd, s.H(0, 1, 0, 1).v[nd], s.H(1, 0, 1, 0).v[nd]) +
                        w.B(nd, s.H(0, 0, 1, 1).v[nd], s.H(1, 1, 0, 0).v[nd]) +
                        real2(w.B(nd, v2.v[nd], s.H(1, 1, 0, 1).v[nd])) -
                        al_oth * s.H(1, 1, 0, 0).dv[nd] -
                        al_own * s.H(0, 0, 1, 1).dv[nd]);
        });
        coef["alpha1111"] = al1111;

        first.solve(1, 1, 1, 1, 0.0, [&](int nd) {
            return CVec(w.D(nd, v1.v[nd], v1c.v[nd], v2.v[nd], v2c.v[nd]) +
                        w.C(nd, v1.v[nd], v1c.v[nd], s.H(0, 0, 1, 1).v[nd]) +
                        real2(w.C(nd, v1.v[nd], v2.v[nd], s.H(0, 1, 0, 1).v[nd])) +
                        real2(w.C(nd, v1.v[nd], v2c.v[nd], s.H(0, 1, 1, 0).v[nd])) +
                        w.C(nd, v2.v[nd], v2c.v[nd], s.H(1, 1, 0, 0).v[nd]) +
                        real2(w.B(nd, v1.v[nd], s.H(0, 1, 1, 1).v[nd])) +
                        w.B(nd, s.H(0, 1, 1, 0).v[nd], s.H(1, 0, 0, 1).v[nd]) +
                        w.B(nd, s.H(0, 1, 0, 1).v[nd], s.H(1, 0, 1, 0).v[nd]) +
                        w.B(nd, s.H(0, 0, 1, 1).v[nd], s.H(1, 1, 0, 0).v[nd]) +
                        real2(w.B(nd, v2.v[nd], s.H(1, 1, 0, 1).v[nd])) -
                        2.0 * coef["a0111"].real() * s.H(1, 1, 0, 0).v[nd] -
                        al_oth * s.H(1, 1, 0, 0).dv[nd] -
                        2.0 * coef["b1101"].real() * s.H(0, 0, 1, 1).v[nd] -
                        al1111 * w.Fg.v[nd] - al_own * s.H(0, 0, 1, 1).dv[nd]);
        }, &b.phi_star, &b.phi_star);

        stageQuintic(first);
        stageQuintic(second);
    }

    rep.coefficients = coef;
    for (const char* nm : {"alpha1100", "alpha0011"})
        rep.diagnostics[std::string(nm) + ".imag"] = std::abs(coef[nm].imag());
    if (opts.capture_h) {
        opts.capture_h->h = hs.all();
        for (auto& [k, v] : rep.diagnostics)
            if (k.find("border_multiplier") != std::string::npos)
                opts.capture_h->border_multipliers[k] = v;
    }
    return rep;
}

}  // namespace lcnf
