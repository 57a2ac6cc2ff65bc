#include "nf_internal.hpp"

namespace lcnf {

using nf::GaussFn;
using nf::HStore;
using nf::real2;
using nf::Work;

namespace {

// Everything the PDNS integrands touch, bundled for the formula lambdas.
struct Env {
    const Work& w;
    const EigenfunctionBundle& b;
    double omega;
    GaussFn v1, v2, v2c, phis, v1s, v2s;
    HStore hs{false};
    std::map<std::string, Cplx> c;

    const GaussFn& H(int i, int j, int k) const { return hs.gauss({i, j, k, 0}); }
    const MeshFunction& Hf(int i, int j, int k) const { return hs.fn({i, j, k, 0}); }

    void solve(int i, int j, int k, Cplx shift, const std::function<CVec(int)>& rhs,
               const MeshFunction* cw, const MeshFunction* border) {
        const int bsign = (i % 2 == 1) ? -1 : +1;  // odd xi1-power: anti-periodic
        const std::string key = "h" + std::to_string(i) + std::to_string(j) +
                                std::to_string(k);
        MeshFunction h = w.solveH(shift, bsign, rhs, cw, border, key);
        hs.put({i, j, k, 0}, h, GaussFn::of(h));
    }
};

}  // namespace

NormalFormReport pdns_coefficients(const OdeSystem& sys, const Codim2Point& point,
                                   const EigenfunctionBundle& b, int order,
                                   const NfOptions& opts) {
    if (order != 3 && order != 5) throw LcnfError("PDNS order must be 3 or 5");
    NormalFormReport rep;
    rep.kind = BifKind::PDNS;
    rep.order = order;

    Work w = Work::make(sys, point, opts);
    w.diagnostics = &rep.diagnostics;

    Env e{w, b, b.omega1,
          GaussFn::of(b.v1), GaussFn::of(b.v2), GaussFn::of(b.v2).conj(),
          GaussFn::of(b.phi_star), GaussFn::of(b.v1_star), GaussFn::of(b.v2_star)};
    const double om = e.omega;
    const Cplx iw = kI * om;

    auto smul = [&](Cplx s, const CVec& x) { return CVec(s * x); };

    // Order two: time-reparametrization coefficients and h functions.
    const Cplx al200 = 0.5 * w.pairIntegral(e.phis, [&](int nd) {
        return w.B(nd, e.v1.v[nd], e.v1.v[nd]);
    });
    const Cplx al011 = w.pairIntegral(e.phis, [&](int nd) {
        return w.B(nd, e.v2.v[nd], e.v2c.v[nd]);
    });
    e.c["alpha200"] = al200;
    e.c["alpha011"] = al011;

    auto h200rhs = [&](int nd) {
        return CVec(w.B(nd, e.v1.v[nd], e.v1.v[nd]) - 2.0 * al200 * w.Fg.v[nd]);
    };
    e.solve(2, 0, 0, 0.0, h200rhs, &b.phi_star, &b.phi_star);
    e.solve(0, 2, 0, 2.0 * iw, [&](int nd) {
        return w.B(nd, e.v2.v[nd], e.v2.v[nd]);
    }, nullptr, nullptr);
    e.solve(1, 1, 0, iw, [&](int nd) {
        return w.B(nd, e.v1.v[nd], e.v2.v[nd]);
    }, nullptr, nullptr);
    auto h011rhs = [&](int nd) {
        return CVec(w.B(nd, e.v2.v[nd], e.v2c.v[nd]) - al011 * w.Fg.v[nd]);
    };
    e.solve(0, 1, 1, 0.0, h011rhs, &b.phi_star, &b.phi_star);

    // Order three coefficients.
    const Cplx a300 = (1.0 / 6.0) * w.pairIntegral(e.v1s, [&](int nd) {
        return CVec(w.C(nd, e.v1.v[nd], e.v1.v[nd], e.v1.v[nd]) +
                    3.0 * w.B(nd, e.v1.v[nd], e.H(2, 0, 0).v[nd]) -
                    6.0 * al200 * w.Av(nd, e.v1.v[nd]));
    });
    const Cplx b210 = 0.5 * w.pairIntegral(e.v2s, [&](int nd) {
        return CVec(w.C(nd, e.v1.v[nd], e.v1.v[nd], e.v2.v[nd]) +
                    w.B(nd, e.v2.v[nd], e.H(2, 0, 0).v[nd]) +
                    2.0 * w.B(nd, e.v1.v[nd], e.H(1, 1, 0).v[nd]) -
                    2.0 * al200 * w.Av(nd, e.v2.v[nd]));
    });
    const Cplx b021 = 0.5 * w.pairIntegral(e.v2s, [&](int nd) {
        return CVec(w.C(nd, e.v2.v[nd], e.v2.v[nd], e.v2c.v[nd]) +
                    w.B(nd, e.v2c.v[nd], e.H(0, 2, 0).v[nd]) +
                    2.0 * w.B(nd, e.v2.v[nd], e.H(0, 1, 1).v[nd]) -
                    2.0 * al011 * w.Av(nd, e.v2.v[nd]));
    });
    const Cplx a111 = w.pairIntegral(e.v1s, [&](int nd) {
        return CVec(w.C(nd, e.v1.v[nd], e.v2.v[nd], e.v2c.v[nd]) +
                    w.B(nd, e.v1.v[nd], e.H(0, 1, 1).v[nd]) +
                    real2(w.B(nd, e.v2.v[nd], e.H(1, 0, 1).v[nd])) -
                    al011 * w.Av(nd, e.v1.v[nd]));
    });
    e.c["a300"] = a300;
    e.c["b210"] = b210;
    e.c["b021"] = b021;
    e.c["a111"] = a111;
    rep.diagnostics["a300.imag"] = std::abs(a300.imag());
    rep.diagnostics["a111.imag"] = std::abs(a111.imag());

    if (order == 5) {
        // Third-order h functions.
        e.solve(3, 0, 0, 0.0, [&](int nd) {
            return CVec(w.C(nd, e.v1.v[nd], e.v1.v[nd], e.v1.v[nd]) +
                        3.0 * w.B(nd, e.v1.v[nd], e.H(2, 0, 0).v[nd]) -
                        6.0 * al200 * w.Av(nd, e.v1.v[nd]) - 6.0 * a300 * e.v1.v[nd]);
        }, &b.v1_star, &b.v1_star);
        e.solve(0, 3, 0, 3.0 * iw, [&](int nd) {
            return CVec(w.C(nd, e.v2.v[nd], e.v2.v[nd], e.v2.v[nd]) +
                        3.0 * w.B(nd, e.v2.v[nd], e.H(0, 2, 0).v[nd]));
        }, nullptr, nullptr);
        e.solve(2, 1, 0, iw, [&](int nd) {
            return CVec(w.C(nd, e.v1.v[nd], e.v1.v[nd], e.v2.v[nd]) +
                        w.B(nd, e.v2.v[nd], e.H(2, 0, 0).v[nd]) +
                        2.0 * w.B(nd, e.v1.v[nd], e.H(1, 1, 0).v[nd]) -
                        2.0 * al200 * w.Av(nd, e.v2.v[nd]) - 2.0 * b210 * e.v2.v[nd]);
        }, &b.v2_star, &b.v2_star);
        e.solve(1, 2, 0, 2.0 * iw, [&](int nd) {
            return CVec(w.C(nd, e.v1.v[nd], e.v2.v[nd], e.v2.v[nd]) +
                        w.B(nd, e.v1.v[nd], e.H(0, 2, 0).v[nd]) +
                        2.0 * w.B(nd, e.v2.v[nd], e.H(1, 1, 0).v[nd]));
        }, nullptr, nullptr);
        e.solve(0, 2, 1, iw, [&](int nd) {
            return CVec(w.C(nd, e.v2.v[nd], e.v2.v[nd], e.v2c.v[nd]) +
                        w.B(nd, e.v2c.v[nd], e.H(0, 2, 0).v[nd]) +
                        2.0 * w.B(nd, e.v2.v[nd], e.H(0, 1, 1).v[nd]) -
                        2.0 * al011 * w.Av(nd, e.v2.v[nd]) - 2.0 * b021 * e.v2.v[nd]);
        }, &b.v2_star, &b.v2_star);
        e.solve(1, 1, 1, 0.0, [&](int nd) {
            return CVec(w.C(nd, e.v1.v[nd], e.v2.v[nd], e.v2c.v[nd]) +
                        w.B(nd, e.v1.v[nd], e.H(0, 1, 1).v[nd]) +
                        real2(w.B(nd, e.v2.v[nd], e.H(1, 0, 1).v[nd])) -
                        al011 * w.Av(nd, e.v1.v[nd]) - a111 * e.v1.v[nd]);
        }, &b.v1_star, &b.v1_star);

        // Fourth-order alphas share their integrand cores with the h BVPs.
        auto al400core = [&](int nd) {
            return CVec(w.D(nd, e.v1.v[nd], e.v1.v[nd], e.v1.v[nd], e.v1.v[nd]) +
                        6.0 * w.C(nd, e.v1.v[nd], e.v1.v[nd], e.H(2, 0, 0).v[nd]) +
                        3.0 * w.B(nd, e.H(2, 0, 0).v[nd], e.H(2, 0, 0).v[nd]) +
                        4.0 * w.B(nd, e.v1.v[nd], e.H(3, 0, 0).v[nd]) -
                        12.0 * al200 * e.H(2, 0, 0).dv[nd]);
        };
        auto al211core = [&](int nd) {
            return CVec(w.D(nd, e.v1.v[nd], e.v1.v[nd], e.v2.v[nd], e.v2c.v[nd]) +
                        w.C(nd, e.v1.v[nd], e.v1.v[nd], e.H(0, 1, 1).v[nd]) +
                        w.C(nd, e.v2.v[nd], e.v2c.v[nd], e.H(2, 0, 0).v[nd]) +
                        2.0 * real2(w.C(nd, e.v1.v[nd], e.v2.v[nd], e.H(1, 0, 1).v[nd])) +
                        real2(w.B(nd, e.v2.v[nd], e.H(2, 0, 1).v[nd])) +
                        w.B(nd, e.H(2, 0, 0).v[nd], e.H(0, 1, 1).v[nd]) +
                        2.0 * w.B(nd, e.H(1, 0, 1).v[nd], e.H(1, 1, 0).v[nd]) +
                        2.0 * w.B(nd, e.v1.v[nd], e.H(1, 1, 1).v[nd]) -
                        al011 * e.H(2, 0, 0).dv[nd] - 2.0 * al200 * e.H(0, 1, 1).dv[nd]);
        };
        auto al022core = [&](int nd) {
            return CVec(w.D(nd, e.v2.v[nd], e.v2.v[nd], e.v2c.v[nd], e.v2c.v[nd]) +
                        4.0 * w.C(nd, e.v2.v[nd], e.v2c.v[nd], e.H(0, 1, 1).v[nd]) +
                        real2(w.C(nd, e.v2.v[nd], e.v2.v[nd], e.H(0, 0, 2).v[nd])) +
                        w.B(nd, e.H(0, 2, 0).v[nd], e.H(0, 0, 2).v[nd]) +
                        2.0 * w.B(nd, e.H(0, 1, 1).v[nd], e.H(0, 1, 1).v[nd]) +
                        2.0 * real2(w.B(nd, e.v2.v[nd], e.H(0, 1, 2).v[nd])) -
                        4.0 * al011 * e.H(0, 1, 1).dv[nd]);
        };
        const Cplx al400 = (1.0 / 24.0) * w.pairIntegral(e.phis, al400core);
        const Cplx al211 = 0.5 * w.pairIntegral(e.phis, al211core);
        const Cplx al022 = 0.25 * w.pairIntegral(e.phis, al022core);
        e.c["alpha400"] = al400;
        e.c["alpha211"] = al211;
        e.c["alpha022"] = al022;

        // Fourth-order h functions.
        e.solve(4, 0, 0, 0.0, [&](int nd) {
            return CVec(al400core(nd) - 24.0 * al400 * w.Fg.v[nd] -
                        24.0 * a300 * e.H(2, 0, 0).v[nd]);
        }, &b.phi_star, &b.phi_star);
        e.solve(0, 4, 0, 4.0 * iw, [&](int nd) {
            return CVec(w.D(nd, e.v2.v[nd], e.v2.v[nd], e.v2.v[nd], e.v2.v[nd]) +
                        6.0 * w.C(nd, e.v2.v[nd], e.v2.v[nd], e.H(0, 2, 0).v[nd]) +
                        4.0 * w.B(nd, e.v2.v[nd], e.H(0, 3, 0).v[nd]) +
                        3.0 * w.B(nd, e.H(0, 2, 0).v[nd], e.H(0, 2, 0).v[nd]));
        }, nullptr, nullptr);
        e.solve(3, 1, 0, iw, [&](int nd) {
            return CVec(w.D(nd, e.v1.v[nd], e.v1.v[nd], e.v1.v[nd], e.v2.v[nd]) +
                        3.0 * w.C(nd, e.v1.v[nd], e.v1.v[nd], e.H(1, 1, 0).v[nd]) +
                        3.0 * w.C(nd, e.v1.v[nd], e.v2.v[nd], e.H(2, 0, 0).v[nd]) +
                        w.B(nd, e.v2.v[nd], e.H(3, 0, 0).v[nd]) +
                        3.0 * w.B(nd, e.v1.v[nd], e.H(2, 1, 0).v[nd]) +
                        3.0 * w.B(nd, e.H(2, 0, 0).v[nd], e.H(1, 1, 0).v[nd]) -
                        6.0 * al200 * e.H(1, 1, 0).dv[nd] -
                        smul(6.0 * a300 + 6.0 * b210 + 6.0 * iw * al200, e.H(1, 1, 0).v[nd]));
        }, nullptr, nullptr);
        e.solve(1, 3, 0, 3.0 * iw, [&](int nd) {
            return CVec(w.D(nd, e.v1.v[nd], e.v2.v[nd], e.v2.v[nd], e.v2.v[nd]) +
                        3.0 * w.C(nd, e.v2.v[nd], e.v2.v[nd], e.H(1, 1, 0).v[nd]) +
                        3.0 * w.C(nd, e.v1.v[nd], e.v2.v[nd], e.H(0, 2, 0).v[nd]) +
                        w.B(nd, e.v1.v[nd], e.H(0, 3, 0).v[nd]) +
                        3.0 * w.B(nd, e.H(0, 2, 0).v[nd], e.H(1, 1, 0).v[nd]) +
                        3.0 * w.B(nd, e.v2.v[nd], e.H(1, 2, 0).v[nd]));
        }, nullptr, nullptr);
        e.solve(0, 3, 1, 2.0 * iw, [&](int nd) {
            return CVec(w.D(nd, e.v2.v[nd], e.v2.v[nd], e.v2.v[nd], e.v2c.v[nd]) +
                        3.0 * w.C(nd, e.v2.v[nd], e.v2.v[nd], e.H(0, 1, 1).v[nd]) +
                        3.0 * w.C(nd, e.v2.v[nd], e.v2c.v[nd], e.H(0, 2, 0).v[nd]) +
                        w.B(nd, e.v2c.v[nd], e.H(0, 3, 0).v[nd]) +
                        3.0 * w.B(nd, e.H(0, 2, 0).v[nd], e.H(0, 1, 1).v[nd]) +
                        3.0 * w.B(nd, e.v2.v[nd], e.H(0, 2, 1).v[nd]) -
                        3.0 * al011 * e.H(0, 2, 0).dv[nd] -
                        smul(6.0 * b021 + 6.0 * iw * al011, e.H(0, 2, 0).v[nd]));
        }, nullptr, nullptr);
        e.solve(2, 1, 1, 0.0, [&](int nd) {
            return CVec(al211core(nd) - 2.0 * al211 * w.Fg.v[nd] -
                        2.0 * a111 * e.H(2, 0, 0).v[nd] -
                        4.0 * b210.real() * e.H(0, 1, 1).v[nd]);
        }, &b.phi_star, &b.phi_star);
        e.solve(1, 2, 1, iw, [&](int nd) {
            return CVec(w.D(nd, e.v1.v[nd], e.v2.v[nd], e.v2.v[nd], e.v2c.v[nd]) +
                        w.C(nd, e.v1.v[nd], e.v2c.v[nd], e.H(0, 2, 0).v[nd]) +
                        2.0 * w.C(nd, e.v1.v[nd], e.v2.v[nd], e.H(0, 1, 1).v[nd]) +
                        w.C(nd, e.v2.v[nd], e.v2.v[nd], e.H(1, 0, 1).v[nd]) +
                        2.0 * w.C(nd, e.v2.v[nd], e.v2c.v[nd], e.H(1, 1, 0).v[nd]) +
                        w.B(nd, e.v1.v[nd], e.H(0, 2, 1).v[nd]) +
                        w.B(nd, e.H(0, 2, 0).v[nd], e.H(1, 0, 1).v[nd]) +
                        2.0 * w.B(nd, e.H(0, 1, 1).v[nd], e.H(1, 1, 0).v[nd]) +
                        2.0 * w.B(nd, e.v2.v[nd], e.H(1, 1, 1).v[nd]) +
                        w.B(nd, e.v2c.v[nd], e.H(1, 2, 0).v[nd]) -
                        2.0 * al011 * e.H(1, 1, 0).dv[nd] -
                        smul(2.0 * b021 + 2.0 * a111 + 2.0 * iw * al011, e.H(1, 1, 0).v[nd]));
        }, nullptr, nullptr);
        e.solve(2, 2, 0, 2.0 * iw, [&](int nd) {
            return CVec(w.D(nd, e.v1.v[nd], e.v1.v[nd], e.v2.v[nd], e.v2.v[nd]) +
                        w.C(nd, e.v2.v[nd], e.v2.v[nd], e.H(2, 0, 0).v[nd]) +
                        4.0 * w.C(nd, e.v1.v[nd], e.v2.v[nd], e.H(1, 1, 0).v[nd]) +
                        w.C(nd, e.v1.v[nd], e.v1.v[nd], e.H(0, 2, 0).v[nd]) +
                        w.B(nd, e.H(2, 0, 0).v[nd], e.H(0, 2, 0).v[nd]) +
                        2.0 * w.B(nd, e.v2.v[nd], e.H(2, 1, 0).v[nd]) +
                        2.0 * w.B(nd, e.H(1, 1, 0).v[nd], e.H(1, 1, 0).v[nd]) +
                        2.0 * w.B(nd, e.v1.v[nd], e.H(1, 2, 0).v[nd]) -
                        2.0 * al200 * e.H(0, 2, 0).dv[nd] -
                        smul(4.0 * b210 + 4.0 * iw * al200, e.H(0, 2, 0).v[nd]));
        }, nullptr, nullptr);
        e.solve(0, 2, 2, 0.0, [&](int nd) {
            return CVec(al022core(nd) - 4.0 * al022 * w.Fg.v[nd] -
                        8.0 * b021.real() * e.H(0, 1, 1).v[nd]);
        }, &b.phi_star, &b.phi_star);

        // Fifth-order coefficients.
        const Cplx a500 = (1.0 / 120.0) * w.pairIntegral(e.v1s, [&](int nd) {
            return CVec(w.E(nd, e.v1.v[nd], e.v1.v[nd], e.v1.v[nd], e.v1.v[nd], e.v1.v[nd]) +
                        10.0 * w.D(nd, e.v1.v[nd], e.v1.v[nd], e.v1.v[nd], e.H(2, 0, 0).v[nd]) +
                        10.0 * w.C(nd, e.v1.v[nd], e.v1.v[nd], e.H(3, 0, 0).v[nd]) +
                        15.0 * w.C(nd, e.v1.v[nd], e.H(2, 0, 0).v[nd], e.H(2, 0, 0).v[nd]) +
                        10.0 * w.B(nd, e.H(2, 0, 0).v[nd], e.H(3, 0, 0).v[nd]) +
                        5.0 * w.B(nd, e.v1.v[nd], e.H(4, 0, 0).v[nd]) -
                        20.0 * al200 * e.H(3, 0, 0).dv[nd] -
                        120.0 * al400 * w.Av(nd, e.v1.v[nd]));
        }) - al200 * a300;
        const Cplx b410 = (1.0 / 24.0) * w.pairIntegral(e.v2s, [&](int nd) {
            return CVec(w.E(nd, e.v1.v[nd], e.v1.v[nd], e.v1.v[nd], e.v1.v[nd], e.v2.v[nd]) +
                        6.0 * w.D(nd, e.v1.v[nd], e.v1.v[nd], e.v2.v[nd], e.H(2, 0, 0).v[nd]) +
                        4.0 * w.D(nd, e.v1.v[nd], e.v1.v[nd], e.v1.v[nd], e.H(1, 1, 0).v[nd]) +
                        4.0 * w.C(nd, e.v1.v[nd], e.v2.v[nd], e.H(3, 0, 0).v[nd]) +
                        6.0 * w.C(nd, e.v1.v[nd], e.v1.v[nd], e.H(2, 1, 0).v[nd]) +
                        3.0 * w.C(nd, e.v2.v[nd], e.H(2, 0, 0).v[nd], e.H(2, 0, 0).v[nd]) +
                        12.0 * w.C(nd, e.v1.v[nd], e.H(2, 0, 0).v[nd], e.H(1, 1, 0).v[nd]) +
                        4.0 * w.B(nd, e.v1.v[nd], e.H(3, 1, 0).v[nd]) +
                        4.0 * w.B(nd, e.H(1, 1, 0).v[nd], e.H(3, 0, 0).v[nd]) +
                        6.0 * w.B(nd, e.H(2, 0, 0).v[nd], e.H(2, 1, 0).v[nd]) +
                        w.B(nd, e.v2.v[nd], e.H(4, 0, 0).v[nd]) -
                        24.0 * al400 * w.Av(nd, e.v2.v[nd]) -
                        12.0 * al200 * e.H(2, 1, 0).dv[nd]);
        }) - al200 * b210;
        const Cplx a311 = (1.0 / 6.0) * w.pairIntegral(e.v1s, [&](int nd) {
            return CVec(w.E(nd, e.v1.v[nd], e.v1.v[nd], e.v1.v[nd], e.v2.v[nd], e.v2c.v[nd]) +
                        w.D(nd, e.v1.v[nd], e.v1.v[nd], e.v1.v[nd], e.H(0, 1, 1).v[nd]) +
                        3.0 * real2(w.D(nd, e.v1.v[nd], e.v1.v[nd], e.v2.v[nd], e.H(1, 0, 1).v[nd])) +
                        3.0 * w.D(nd, e.v1.v[nd], e.v2.v[nd], e.v2c.v[nd], e.H(2, 0, 0).v[nd]) +
                        3.0 * w.C(nd, e.v1.v[nd], e.H(2, 0, 0).v[nd], e.H(0, 1, 1).v[nd]) +
                        3.0 * real2(w.C(nd, e.v2.v[nd], e.H(2, 0, 0).v[nd], e.H(1, 0, 1).v[nd])) +
                        3.0 * real2(w.C(nd, e.v1.v[nd], e.v2.v[nd], e.H(2, 0, 1).v[nd])) +
                        w.C(nd, e.v2.v[nd], e.v2c.v[nd], e.H(3, 0, 0).v[nd]) +
                        3.0 * w.C(nd, e.v1.v[nd], e.v1.v[nd], e.H(1, 1, 1).v[nd]) +
                        6.0 * w.C(nd, e.v1.v[nd], e.H(1, 0, 1).v[nd], e.H(1, 1, 0).v[nd]) +
                        3.0 * w.B(nd, e.H(2, 0, 0).v[nd], e.H(1, 1, 1).v[nd]) +
                        3.0 * real2(w.B(nd, e.H(2, 0, 1).v[nd], e.H(1, 1, 0).v[nd])) +
                        real2(w.B(nd, e.v2.v[nd], e.H(3, 0, 1).v[nd])) +
                        w.B(nd, e.H(0, 1, 1).v[nd], e.H(3, 0, 0).v[nd]) +
                        3.0 * w.B(nd, e.v1.v[nd], e.H(2, 1, 1).v[nd]) -
                        6.0 * al211 * w.Av(nd, e.v1.v[nd]) -
                        al011 * e.H(3, 0, 0).dv[nd] - 6.0 * al200 * e.H(1, 1, 1).dv[nd]);
        }) - al200 * a111 - al011 * a300;
        const Cplx b221 = 0.25 * w.pairIntegral(e.v2s, [&](int nd) {
            return CVec(w.E(nd, e.v1.v[nd], e.v1.v[nd], e.v2.v[nd], e.v2.v[nd], e.v2c.v[nd]) +
                        w.D(nd, e.v2.v[nd], e.v2.v[nd], e.v2c.v[nd], e.H(2, 0, 0).v[nd]) +
                        2.0 * w.D(nd, e.v1.v[nd], e.v2.v[nd], e.v2.v[nd], e.H(1, 0, 1).v[nd]) +
                        2.0 * w.D(nd, e.v1.v[nd], e.v1.v[nd], e.v2.v[nd], e.H(0, 1, 1).v[nd]) +
                        w.D(nd, e.v1.v[nd], e.v1.v[nd], e.v2c.v[nd], e.H(0, 2, 0).v[nd]) +
                        4.0 * w.D(nd, e.v1.v[nd], e.v2.v[nd], e.v2c.v[nd], e.H(1, 1, 0).v[nd]) +
                        2.0 * w.C(nd, e.v2c.v[nd], e.H(1, 1, 0).v[nd], e.H(1, 1, 0).v[nd]) +
                        w.C(nd, e.v1.v[nd], e.v1.v[nd], e.H(0, 2, 1).v[nd]) +
                        w.C(nd, e.v2.v[nd], e.v2.v[nd], e.H(2, 0, 1).v[nd]) +
                        w.C(nd, e.v2c.v[nd], e.H(2, 0, 0).v[nd], e.H(0, 2, 0).v[nd]) +
                        2.0 * w.C(nd, e.v2.v[nd], e.v2c.v[nd], e.H(2, 1, 0).v[nd]) +
                        2.0 * w.C(nd, e.v1.v[nd], e.v2c.v[nd], e.H(1, 2, 0).v[nd]) +
                        2.0 * w.C(nd, e.v1.v[nd], e.H(0, 2, 0).v[nd], e.H(1, 0, 1).v[nd]) +
                        4.0 * w.C(nd, e.v1.v[nd], e.v2.v[nd], e.H(1, 1, 1).v[nd]) +
                        4.0 * w.C(nd, e.v2.v[nd], e.H(1, 0, 1).v[nd], e.H(1, 1, 0).v[nd]) +
                        2.0 * w.C(nd, e.v2.v[nd], e.H(2, 0, 0).v[nd], e.H(0, 1, 1).v[nd]) +
                        4.0 * w.C(nd, e.v1.v[nd], e.H(1, 1, 0).v[nd], e.H(0, 1, 1).v[nd]) +
                        w.B(nd, e.v2c.v[nd], e.H(2, 2, 0).v[nd]) +
                        2.0 * w.B(nd, e.v1.v[nd], e.H(1, 2, 1).v[nd]) +
                        2.0 * w.B(nd, e.H(1, 2, 0).v[nd], e.H(1, 0, 1).v[nd]) +
                        4.0 * w.B(nd, e.H(1, 1, 0).v[nd], e.H(1, 1, 1).v[nd]) +
                        2.0 * w.B(nd, e.H(2, 1, 0).v[nd], e.H(0, 1, 1).v[nd]) +
                        2.0 * w.B(nd, e.v2.v[nd], e.H(2, 1, 1).v[nd]) +
                        w.B(nd, e.H(2, 0, 0).v[nd], e.H(0, 2, 1).v[nd]) +
                        w.B(nd, e.H(2, 0, 1).v[nd], e.H(0, 2, 0).v[nd]) -
                        2.0 * al011 * e.H(2, 1, 0).dv[nd] -
                        4.0 * al211 * w.Av(nd, e.v2.v[nd]) -
                        2.0 * al200 * e.H(0, 2, 1).dv[nd]);
        }) - al200 * b021 - al011 * b210;
        const Cplx a122 = 0.25 * w.pairIntegral(e.v1s, [&](int nd) {
            return CVec(w.E(nd, e.v1.v[nd], e.v2.v[nd], e.v2.v[nd], e.v2c.v[nd], e.v2c.v[nd]) +
                        2.0 * real2(w.D(nd, e.v2.v[nd], e.v2.v[nd], e.v2c.v[nd], e.H(1, 0, 1).v[nd])) +
                        real2(w.D(nd, e.v1.v[nd], e.v2.v[nd], e.v2.v[nd], e.H(0, 0, 2).v[nd])) +
                        4.0 * w.D(nd, e.v1.v[nd], e.v2.v[nd], e.v2c.v[nd], e.H(0, 1, 1).v[nd]) +
                        2.0 * w.C(nd, e.v1.v[nd], e.H(0, 1, 1).v[nd], e.H(0, 1, 1).v[nd]) +
                        4.0 * real2(w.C(nd, e.v2.v[nd], e.H(0, 1, 1).v[nd], e.H(1, 0, 1).v[nd])) +
                        2.0 * real2(w.C(nd, e.v2.v[nd], e.H(0, 0, 2).v[nd], e.H(1, 1, 0).v[nd])) +
                        w.C(nd, e.v1.v[nd], e.H(0, 2, 0).v[nd], e.H(0, 0, 2).v[nd]) +
                        2.0 * real2(w.C(nd, e.v1.v[nd], e.v2.v[nd], e.H(0, 1, 2).v[nd])) +
                        4.0 * w.C(nd, e.v2.v[nd], e.v2c.v[nd], e.H(1, 1, 1).v[nd]) +
                        real2(w.C(nd, e.v2.v[nd], e.v2.v[nd], e.H(1, 0, 2).v[nd])) +
                        4.0 * w.B(nd, e.H(0, 1, 1).v[nd], e.H(1, 1, 1).v[nd]) +
                        real2(w.B(nd, e.H(0, 2, 0).v[nd], e.H(1, 0, 2).v[nd])) +
                        2.0 * real2(w.B(nd, e.v2.v[nd], e.H(1, 1, 2).v[nd])) +
                        w.B(nd, e.v1.v[nd], e.H(0, 2, 2).v[nd]) +
                        2.0 * real2(w.B(nd, e.H(1, 1, 0).v[nd], e.H(0, 1, 2).v[nd])) -
                        4.0 * al011 * e.H(1, 1, 1).dv[nd] -
                        4.0 * al022 * w.Av(nd, e.v1.v[nd]));
        }) - al011 * a111;
        const Cplx b032 = (1.0 / 12.0) * w.pairIntegral(e.v2s, [&](int nd) {
            return CVec(w.E(nd, e.v2.v[nd], e.v2.v[nd], e.v2.v[nd], e.v2c.v[nd], e.v2c.v[nd]) +
                        w.D(nd, e.v2.v[nd], e.v2.v[nd], e.v2.v[nd], e.H(0, 0, 2).v[nd]) +
                        3.0 * w.D(nd, e.v2.v[nd], e.v2c.v[nd], e.v2c.v[nd], e.H(0, 2, 0).v[nd]) +
                        6.0 * w.D(nd, e.v2.v[nd], e.v2.v[nd], e.v2c.v[nd], e.H(0, 1, 1).v[nd]) +
                        6.0 * w.C(nd, e.v2c.v[nd], e.H(0, 2, 0).v[nd], e.H(0, 1, 1).v[nd]) +
                        6.0 * w.C(nd, e.v2.v[nd], e.v2c.v[nd], e.H(0, 2, 1).v[nd]) +
                        w.C(nd, e.v2c.v[nd], e.v2c.v[nd], e.H(0, 3, 0).v[nd]) +
                        3.0 * w.C(nd, e.v2.v[nd], e.H(0, 0, 2).v[nd], e.H(0, 2, 0).v[nd]) +
                        3.0 * w.C(nd, e.v2.v[nd], e.v2.v[nd], e.H(0, 1, 2).v[nd]) +
                        6.0 * w.C(nd, e.v2.v[nd], e.H(0, 1, 1).v[nd], e.H(0, 1, 1).v[nd]) +
                        3.0 * w.B(nd, e.H(0, 2, 0).v[nd], e.H(0, 1, 2).v[nd]) +
                        6.0 * w.B(nd, e.H(0, 2, 1).v[nd], e.H(0, 1, 1).v[nd]) +
                        3.0 * w.B(nd, e.v2.v[nd], e.H(0, 2, 2).v[nd]) +
                        2.0 * w.B(nd, e.v2c.v[nd], e.H(0, 3, 1).v[nd]) +
                        w.B(nd, e.H(0, 0, 2).v[nd], e.H(0, 3, 0).v[nd]) -
                        6.0 * al011 * e.H(0, 2, 1).dv[nd] -
                        12.0 * al022 * w.Av(nd, e.v2.v[nd]));
        }) - al011 * b021;
        e.c["a500"] = a500;
        e.c["b410"] = b410;
        e.c["a311"] = a311;
        e.c["b221"] = b221;
        e.c["a122"] = a122;
        e.c["b032"] = b032;
        rep.diagnostics["a500.imag"] = std::abs(a500.imag());
        rep.diagnostics["a311.imag"] = std::abs(a311.imag());
        rep.diagnostics["a122.imag"] = std::abs(a122.imag());
    }

    rep.coefficients = e.c;
    if (opts.capture_h) {
        opts.capture_h->h = e.hs.all();
        for (auto& [k, v] : rep.diagnostics)
            if (k.find("border_multiplier") != std::string::npos)
                opts.capture_h->border_multipliers[k] = v;
    }
    return rep;
}

}  // namespace lcnf
