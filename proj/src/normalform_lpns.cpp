#include "nf_internal.hpp"

namespace lcnf {

using nf::GaussFn;
using nf::HStore;
using nf::real2;
using nf::Work;

NormalFormReport lpns_coefficients(const OdeSystem& sys, const Codim2Point& point,
                                   const EigenfunctionBundle& b, int order,
                                   const NfOptions& opts) {
    if (order != 2 && order != 3) throw LcnfError("LPNS order must be 2 or 3");
    NormalFormReport rep;
    rep.kind = BifKind::LPNS;
    rep.order = order;

    Work w = Work::make(sys, point, opts);
    w.diagnostics = &rep.diagnostics;
    auto& coef = rep.coefficients;

    const GaussFn v1 = GaussFn::of(b.v1);
    const GaussFn v2 = GaussFn::of(b.v2);
    const GaussFn v2c = v2.conj();
    const GaussFn phis = GaussFn::of(b.phi_star);
    const GaussFn v2s = GaussFn::of(b.v2_star);
    const double omega = b.omega1;

    const Cplx a200 = 0.5 * w.pairIntegral(phis, [&](int nd) {
        return CVec(w.B(nd, v1.v[nd], v1.v[nd]) + 2.0 * w.Av(nd, v1.v[nd]));
    });
    const Cplx a011 = w.pairIntegral(phis, [&](int nd) {
        return w.B(nd, v2.v[nd], v2c.v[nd]);
    });
    const Cplx b110 = w.pairIntegral(v2s, [&](int nd) {
        return CVec(w.B(nd, v1.v[nd], v2.v[nd]) + w.Av(nd, v2.v[nd]));
    });
    coef["a200"] = a200;
    coef["a011"] = a011;
    coef["b110"] = b110;
    // Not determined by the homological equation; set to zero.
    coef["alpha200"] = 0.0;
    coef["alpha011"] = 0.0;
    rep.diagnostics["a200.imag"] = std::abs(a200.imag());
    rep.diagnostics["a011.imag"] = std::abs(a011.imag());
    if (order == 2) return rep;

    const double ra200 = a200.real(), ra011 = a011.real();

    // Center-manifold functions at order two.
    auto h200rhs = [&](int nd) {
        return CVec(w.B(nd, v1.v[nd], v1.v[nd]) + 2.0 * w.Av(nd, v1.v[nd]) -
                    2.0 * ra200 * v1.v[nd] + 2.0 * w.Fg.v[nd]);
    };
    MeshFunction h200f = w.solveH(0.0, +1, h200rhs, &b.v1_star, &b.phi_star, "h200");
    auto h020rhs = [&](int nd) { return w.B(nd, v2.v[nd], v2.v[nd]); };
    MeshFunction h020f = w.solveH(2.0 * kI * omega, +1, h020rhs, nullptr, nullptr, "h020");
    auto h110rhs = [&](int nd) {
        return CVec(w.B(nd, v1.v[nd], v2.v[nd]) - b110 * v2.v[nd] + w.Av(nd, v2.v[nd]));
    };
    MeshFunction h110f = w.solveH(kI * omega, +1, h110rhs, &b.v2_star, &b.v2_star, "h110");
    auto h011rhs = [&](int nd) {
        return CVec(w.B(nd, v2.v[nd], v2c.v[nd]) - ra011 * v1.v[nd]);
    };
    MeshFunction h011f = w.solveH(0.0, +1, h011rhs, &b.v1_star, &b.phi_star, "h011");

    const GaussFn h200 = GaussFn::of(h200f);
    const GaussFn h020 = GaussFn::of(h020f);
    const GaussFn h110 = GaussFn::of(h110f);
    const GaussFn h011 = GaussFn::of(h011f);
    const GaussFn h101 = h110.conj();

    // Time derivatives of the stored functions enter some integrands; the
    // collocation derivative is the primary route and the BVP right-hand
    // side gives an independent one, recorded as a consistency check.
    auto hdotCheck = [&](const GaussFn& h, Cplx shift,
                         const std::function<CVec(int)>& rhs, const char* key) {
        double worst = 0.0;
        for (int nd = 0; nd < w.nodes(); ++nd) {
            const CVec ode = w.Av(nd, h.v[nd]) - shift * h.v[nd] + rhs(nd);
            worst = std::max(worst, (h.dv[nd] - ode).norm() /
                                        std::max(1.0, h.dv[nd].norm()));
        }
        rep.diagnostics[std::string(key) + ".hdot_consistency"] = worst;
    };
    hdotCheck(h200, 0.0, h200rhs, "h200");
    hdotCheck(h110, kI * omega, h110rhs, "h110");
    hdotCheck(h011, 0.0, h011rhs, "h011");

    const Cplx a300 = (1.0 / 6.0) * w.pairIntegral(phis, [&](int nd) {
        return CVec(w.C(nd, v1.v[nd], v1.v[nd], v1.v[nd]) +
                    3.0 * w.B(nd, v1.v[nd], h200.v[nd]) + 3.0 * h200.dv[nd] -
                    6.0 * ra200 * h200.v[nd]);
    }) + a200.real();
    const Cplx b210 = 0.5 * w.pairIntegral(v2s, [&](int nd) {
        return CVec(w.C(nd, v1.v[nd], v1.v[nd], v2.v[nd]) +
                    w.B(nd, v2.v[nd], h200.v[nd]) + 2.0 * w.B(nd, v1.v[nd], h110.v[nd]) +
                    2.0 * h110.dv[nd]);
    }) + b110;
    const Cplx b021 = 0.5 * w.pairIntegral(v2s, [&](int nd) {
        return CVec(w.C(nd, v2.v[nd], v2.v[nd], v2c.v[nd]) +
                    w.B(nd, v2c.v[nd], h020.v[nd]) + 2.0 * w.B(nd, v2.v[nd], h011.v[nd]));
    });
    const Cplx a111 = w.pairIntegral(phis, [&](int nd) {
        return CVec(w.C(nd, v1.v[nd], v2.v[nd], v2c.v[nd]) +
                    real2(w.B(nd, v2.v[nd], h101.v[nd])) +
                    w.B(nd, v1.v[nd], h011.v[nd]) + h011.dv[nd] -
                    2.0 * b110.real() * h011.v[nd] - ra011 * h200.v[nd]);
    }) + a011.real();

    coef["a300"] = a300;
    coef["b210"] = b210;
    coef["b021"] = b021;
    coef["a111"] = a111;
    rep.diagnostics["a300.imag"] = std::abs(a300.imag());
    rep.diagnostics["a111.imag"] = std::abs(a111.imag());

    // Second route for the dotted-h integrals, from the BVP right-hand
    // sides instead of the differentiation matrix.
    const Cplx a300ode = (1.0 / 6.0) * w.pairIntegral(phis, [&](int nd) {
        const CVec hdot = w.Av(nd, h200.v[nd]) + h200rhs(nd);
        return CVec(w.C(nd, v1.v[nd], v1.v[nd], v1.v[nd]) +
                    3.0 * w.B(nd, v1.v[nd], h200.v[nd]) + 3.0 * hdot -
                    6.0 * ra200 * h200.v[nd]);
    }) + a200.real();
    rep.diagnostics["a300.hdot_delta"] = std::abs(a300 - a300ode);

    if (opts.capture_h) {
        opts.capture_h->h[{2, 0, 0, 0}] = h200f;
        opts.capture_h->h[{0, 2, 0, 0}] = h020f;
        opts.capture_h->h[{1, 1, 0, 0}] = h110f;
        opts.capture_h->h[{0, 1, 1, 0}] = h011f;
        for (auto& [k, v] : rep.diagnostics)
            if (k.find("border_multiplier") != std::string::npos)
                opts.capture_h->border_multipliers[k] = v;
    }
    return rep;
}

}  // namespace lcnf
