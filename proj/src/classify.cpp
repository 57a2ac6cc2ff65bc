#include "lcnf/classify.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace lcnf {

namespace {

double re(const NormalFormReport& r, const std::string& name) {
    return r.coef(name).real();
}

int signOf(double x) { return x > 0.0 ? 1 : -1; }

}  // namespace

UnfoldingQuantities derive_unfolding(const NormalFormReport& r) {
    UnfoldingQuantities q;
    q.kind = r.kind;
    switch (r.kind) {
        case BifKind::LPNS: {
            const double a200 = re(r, "a200"), a011 = re(r, "a011");
            q.s = signOf(a200 * a011);
            q.theta = r.coef("b110").real() / a200;
            if (r.has("b210")) {
                const Cplx b110 = r.coef("b110"), b021 = r.coef("b021");
                const double a300 = re(r, "a300"), a111 = re(r, "a111");
                q.E = (r.coef("b210") +
                       b110 * (b021.real() / a011 - 1.5 * a300 / a200 +
                               0.5 * a111 / a011) -
                       b021 * a200 / a011)
                          .real();
            }
            break;
        }
        case BifKind::PDNS:
        case BifKind::NSNS: {
            const bool pd = r.kind == BifKind::PDNS;
            q.p11 = pd ? re(r, "a300") : re(r, "a2100");
            q.p12 = pd ? re(r, "a111") : re(r, "a1011");
            q.p21 = pd ? re(r, "b210") : re(r, "b1110");
            q.p22 = pd ? re(r, "b021") : re(r, "b0021");
            q.theta = *q.p12 / *q.p22;
            q.delta = *q.p21 / *q.p11;
            const std::string n5 = pd ? "a500" : "a3200";
            if (r.has(n5)) {
                const double a32 = pd ? re(r, "a500") : re(r, "a3200");
                const double a21 = pd ? re(r, "a311") : re(r, "a2111");
                const double a10 = pd ? re(r, "a122") : re(r, "a1022");
                const double b22 = pd ? re(r, "b410") : re(r, "b2210");
                const double b11 = pd ? re(r, "b221") : re(r, "b1121");
                const double b00 = pd ? re(r, "b032") : re(r, "b0032");
                q.s1 = a10 + *q.p12 * (b11 / *q.p21 - 2.0 * b00 / *q.p22 -
                                       a32 * *q.p22 / (*q.p11 * *q.p21));
                q.s2 = b22 + *q.p21 * (a21 / *q.p12 - 2.0 * a32 / *q.p11 -
                                       *q.p11 * b00 / (*q.p12 * *q.p22));
                q.Theta = *q.s1 / (*q.p22 * *q.p22);
                q.Delta = *q.s2 / (*q.p11 * *q.p11);
                q.sign_l1 = sign_l1(*q.theta, *q.delta, *q.Theta, *q.Delta);
            }
            break;
        }
    }
    return q;
}

ScenarioVerdict classify_lpns(const UnfoldingQuantities& q) {
    if (!q.s || !q.theta) throw LcnfError("classify_lpns: s and theta required");
    const int s = *q.s;
    const double th = *q.theta;
    ScenarioVerdict v;
    if (s > 0)
        v.case_label = th > 0 ? "a" : "c";
    else
        v.case_label = th < 0 ? "b" : "d";
    v.torus_inventory.push_back({"cycle", "unknown"});
    v.torus_inventory.push_back({"T2", "unknown"});
    if (s * th < 0.0) {
        // The Hopf in the amplitude system has l1 of sign opposite to
        // theta; the time rescaling by E flips orientation when E < 0, so
        // the 3-torus is attracting exactly when theta*E > 0.
        std::string st = "unknown";
        if (q.E) st = (th * *q.E > 0.0) ? "stable" : "unstable";
        v.torus_inventory.push_back({"T3", st});
    }
    return v;
}

ScenarioVerdict classify_hopfhopf(const UnfoldingQuantities& q, BifKind kind) {
    if (!q.p11 || !q.p22 || !q.theta || !q.delta)
        throw LcnfError("classify_hopfhopf: p11, p22, theta, delta required");
    const double tol = 1e-8;
    const bool simple = *q.p11 * *q.p22 > 0.0;

    double th = *q.theta, de = *q.delta;
    ScenarioVerdict v;
    if (de > th) {
        std::swap(th, de);
        v.swapped = true;
    }
    if (std::abs(th * de - 1.0) < tol || std::abs(th) < tol || std::abs(de) < tol ||
        (!simple && (std::abs(th - 1.0) < tol || std::abs(de - 1.0) < tol)))
        throw BoundaryDegenerate("theta/delta on a region boundary");

    std::string region;
    if (simple) {
        if (th > 0 && de > 0)
            region = th * de > 1 ? "I" : "II";
        else if (th > 0 && de < 0)
            region = "III";
        else
            region = th * de < 1 ? "IV" : "V";
    } else {
        if (th > 1 && de > 1)
            region = "I";
        else if (th > 1 && de < 1 && th * de > 1)
            region = "II";
        else if (th > 0 && de > 0 && th * de < 1)
            region = "III";
        else if (th > 0 && de < 0)
            region = "IV";
        else if (th < 0 && de < 0 && th * de < 1)
            region = "V";
        else
            region = "VI";
    }
    v.case_label = (simple ? std::string("simple-") : std::string("difficult-")) + region;

    const bool pd = kind == BifKind::PDNS;
    v.torus_inventory.push_back({"cycle", "unknown"});
    if (pd) {
        v.torus_inventory.push_back({"doubled-cycle", "unknown"});
        v.torus_inventory.push_back({"T2", "unknown"});
        v.torus_inventory.push_back({"doubled-T2", "unknown"});
    } else {
        v.torus_inventory.push_back({"T2", "unknown"});
        v.torus_inventory.push_back({"T3", "unknown"});
    }
    if (!simple) {
        std::string st = "unknown";
        if (q.sign_l1) st = *q.sign_l1 < 0 ? "stable" : "unstable";
        v.torus_inventory.push_back({pd ? "T3" : "T4", st});
    }
    return v;
}

ScenarioVerdict classify(const UnfoldingQuantities& q) {
    if (q.kind == BifKind::LPNS) return classify_lpns(q);
    return classify_hopfhopf(q, q.kind);
}

int sign_l1(double theta, double delta, double Theta, double Delta) {
    const double expr = theta * (theta * (theta - 1.0) * Delta +
                                 delta * (delta - 1.0) * Theta);
    const double scale = std::abs(theta) * (std::abs(theta * Delta) +
                                            std::abs(delta * Theta) + 1.0);
    if (std::abs(expr) < 1e-12 * std::max(scale, 1.0))
        throw BoundaryDegenerate("first Lyapunov coefficient numerically zero");
    return expr > 0.0 ? -1 : 1;
}

CurveAsymptotics hh_curve_asymptotics(double theta, double delta, double Theta,
                                      double Delta) {
    if (std::abs(theta - 1.0) < 1e-12) throw DomainViolation("theta = 1");
    const double den = 2.0 * delta * theta - delta - theta;
    if (std::abs(den) < 1e-12) throw DomainViolation("2*delta*theta - delta - theta = 0");
    if (!(theta < 0.0 && delta < 0.0 && delta * theta - 1.0 > 0.0))
        throw DomainViolation("heteroclinic asymptotics need theta,delta<0, theta*delta>1");

    CurveAsymptotics out;
    const double t1 = theta - 1.0, d1 = delta - 1.0;
    out.linear_coeff = -d1 / t1;
    out.hopf_quadratic = -(d1 * Theta + t1 * Delta) / (t1 * t1 * t1);
    out.het_quadratic =
        (theta * Theta * d1 * d1 * d1 + delta * Delta * t1 * t1 * t1) /
        (t1 * t1 * t1 * den);
    out.l1_sign = sign_l1(theta, delta, Theta, Delta);
    return out;
}

namespace {

std::vector<double> realPolyRoots(const std::vector<double>& coeffs) {
    // coeffs: c0 + c1 x + ... + cn x^n; companion-matrix eigenvalues.
    int n = static_cast<int>(coeffs.size()) - 1;
    while (n > 0 && std::abs(coeffs[n]) < 1e-14) --n;
    std::vector<double> roots;
    if (n <= 0) return roots;
    Mat comp = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        comp(0, i) = -coeffs[n - 1 - i] / coeffs[n];
        if (i + 1 < n) comp(i + 1, i) = 1.0;
    }
    Eigen::EigenSolver<Mat> es(comp);
    for (int i = 0; i < n; ++i) {
        const Cplx z = es.eigenvalues()[i];
        if (std::abs(z.imag()) < 1e-9 * (1.0 + std::abs(z))) roots.push_back(z.real());
    }
    return roots;
}

AmplitudeEquilibrium makeEq(double r1, double r2, const std::string& type, Cplx e1,
                            Cplx e2) {
    return {r1, r2, type, e1, e2,
            e1.real() < 0.0 && e2.real() < 0.0};
}

}  // namespace

std::vector<AmplitudeEquilibrium> amplitude_portrait_lpns(int s, double theta,
                                                          double beta1, double beta2) {
    std::vector<AmplitudeEquilibrium> out;
    auto g = [&](double xi) { return beta2 + theta * xi + xi * xi; };
    if (beta1 == 0.0 && beta2 == 0.0)
        out.push_back(makeEq(0.0, 0.0, "origin", 0.0, 0.0));
    if (beta1 < 0.0) {
        for (double xi : {std::sqrt(-beta1), -std::sqrt(-beta1)})
            out.push_back(makeEq(xi, 0.0, "axis1", 2.0 * xi, g(xi)));
    }
    // Interior: g(xi) = 0 and rho^2 = -(beta1 + xi^2)/s.
    const double disc = theta * theta - 4.0 * beta2;
    if (disc >= 0.0) {
        for (double sgn : {1.0, -1.0}) {
            const double xi = 0.5 * (-theta + sgn * std::sqrt(disc));
            const double rho2 = -(beta1 + xi * xi) / s;
            if (rho2 <= 0.0) continue;
            const double rho = std::sqrt(rho2);
            // lambda^2 - 2 xi lambda - 2 s rho^2 (theta + 2 xi) = 0
            const Cplx d = std::sqrt(Cplx(xi * xi + 2.0 * s * rho2 * (theta + 2.0 * xi)));
            out.push_back(makeEq(xi, rho, "interior", xi + d, xi - d));
        }
    }
    return out;
}

std::vector<AmplitudeEquilibrium> amplitude_portrait_hh(const UnfoldingQuantities& q,
                                                        double mu1, double mu2) {
    const double p11 = *q.p11, p12 = *q.p12, p21 = *q.p21, p22 = *q.p22;
    const double s1 = q.s1.value_or(0.0), s2 = q.s2.value_or(0.0);

    auto jac = [&](double r1, double r2) {
        Mat J(2, 2);
        J(0, 0) = mu1 + 3.0 * p11 * r1 * r1 + p12 * r2 * r2 + s1 * std::pow(r2, 4);
        J(0, 1) = r1 * (2.0 * p12 * r2 + 4.0 * s1 * r2 * r2 * r2);
        J(1, 0) = r2 * (2.0 * p21 * r1 + 4.0 * s2 * r1 * r1 * r1);
        J(1, 1) = mu2 + p21 * r1 * r1 + 3.0 * p22 * r2 * r2 + s2 * std::pow(r1, 4);
        return J;
    };
    auto push = [&](std::vector<AmplitudeEquilibrium>& out, double r1, double r2,
                    const std::string& type) {
        const Mat J = jac(r1, r2);
        const double tr = J.trace(), det = J.determinant();
        const Cplx d = std::sqrt(Cplx(tr * tr / 4.0 - det));
        out.push_back(makeEq(r1, r2, type, tr / 2.0 + d, tr / 2.0 - d));
    };

    std::vector<AmplitudeEquilibrium> out;
    push(out, 0.0, 0.0, "origin");
    if (-mu1 / p11 > 0.0) push(out, std::sqrt(-mu1 / p11), 0.0, "axis1");
    if (-mu2 / p22 > 0.0) push(out, 0.0, std::sqrt(-mu2 / p22), "axis2");

    // Interior: x = r1^2, y = r2^2 solve mu1 + p11 x + p12 y + s1 y^2 = 0
    // and mu2 + p21 x + p22 y + s2 x^2 = 0; eliminate x.
    // x(y) = -(mu1 + p12 y + s1 y^2)/p11, quartic in y after substitution.
    const double a0 = mu1 / p11, a1 = p12 / p11, a2 = s1 / p11;  // x = -(a0+a1 y+a2 y^2)
    std::vector<double> c(5, 0.0);
    c[0] = mu2 - p21 * a0 + s2 * a0 * a0;
    c[1] = p22 - p21 * a1 + s2 * 2.0 * a0 * a1;
    c[2] = -p21 * a2 + s2 * (a1 * a1 + 2.0 * a0 * a2);
    c[3] = s2 * 2.0 * a1 * a2;
    c[4] = s2 * a2 * a2;
    for (double y : realPolyRoots(c)) {
        if (y <= 1e-12) continue;
        const double x = -(a0 + a1 * y + a2 * y * y);
        if (x <= 1e-12) continue;
        push(out, std::sqrt(x), std::sqrt(y), "interior");
    }
    return out;
}

}  // namespace lcnf
