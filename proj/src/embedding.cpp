#include "lcnf/embedding.hpp"

#include <cmath>

namespace lcnf {

namespace {

// Complex-valued polynomial as a (re, im) pair of real polynomials.
struct CPoly {
    Poly re, im;
    CPoly() = default;
    CPoly(Poly r, Poly i) : re(std::move(r)), im(std::move(i)) {}
    static CPoly scalar(int n, Cplx c) {
        return {Poly::constant(n, c.real()), Poly::constant(n, c.imag())};
    }
    CPoly operator+(const CPoly& o) const { return {re + o.re, im + o.im}; }
    CPoly operator*(const CPoly& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    CPoly operator*(const Poly& s) const { return {re * s, im * s}; }
};

struct Planted {
    const std::map<std::string, Cplx>& m;
    Cplx c(const std::string& k) const {
        auto it = m.find(k);
        return it == m.end() ? Cplx(0.0) : it->second;
    }
    double r(const std::string& k) const { return c(k).real(); }
};

void validate(const EmbeddingSpec& spec) {
    for (const auto& [k, v] : spec.coeffs)
        if (std::abs(v) > 2.0)
            throw InvalidCoefficients("planted coefficient " + k + " too large (|c| <= 2)");
    if (spec.decay < 5.0) throw InvalidCoefficients("decay must be >= 5");
    if (spec.theta1 <= 0.0 || spec.theta1 >= M_PI || spec.theta2 <= 0.0 ||
        spec.theta2 >= M_PI)
        throw InvalidCoefficients("theta must lie in (0, pi)");
    if (spec.kind == BifKind::NSNS && spec.theta1 <= spec.theta2)
        throw InvalidCoefficients("NSNS embedding requires theta1 > theta2");
}

// Shared circle block: d(c1,c2)/dt = Omega*(-c2, c1) + kappa*(1-r^2)*(c1,c2).
void circleRows(PolySystem& f, const Poly& Omega, int n) {
    const double kappa = 1.0;
    Poly c1 = Poly::var(n, 0), c2 = Poly::var(n, 1);
    Poly rad = Poly::constant(n, 1.0) - c1 * c1 - c2 * c2;
    f.row(0) = Omega * (-c2) + kappa * (rad * c1);
    f.row(1) = Omega * c1 + kappa * (rad * c2);
}

void stableRows(PolySystem& f, int first, int count, double decay, int n) {
    for (int i = 0; i < count; ++i)
        f.row(first + i) = -decay * Poly::var(n, first + i);
}

PolySystem buildLpns(const EmbeddingSpec& spec) {
    Planted pc{spec.coeffs};
    const double T = spec.period();
    const double w = spec.theta1 / T;
    const double s2 = std::sqrt(2.0 / T);
    const int n = 5 + spec.n_stable;

    Poly z = Poly::var(n, 2), p = Poly::var(n, 3), q = Poly::var(n, 4);
    Poly one = Poly::constant(n, 1.0);
    Poly S2 = (p * p + q * q) * (1.0 / (s2 * s2));  // |xi2|^2

    Poly Omega = one - z + pc.r("alpha200") * (z * z) + pc.r("alpha011") * S2 +
                 pc.r("alpha300") * (z * z * z) + pc.r("alpha111") * (z * S2);

    PolySystem f(n, n);
    circleRows(f, Omega, n);

    f.row(2) = pc.r("a200") * (z * z) + pc.r("a011") * S2 +
               (pc.r("a300") - pc.r("a200")) * (z * z * z) +
               (pc.r("a111") - pc.r("a011")) * (z * S2);

    // d(zeta)/dt with zeta = p + i q; chain rule applied through order 3.
    const Cplx iw = kI * w;
    CPoly zeta(p, q);
    CPoly rhs = CPoly::scalar(n, iw) * zeta;
    rhs = rhs + CPoly::scalar(n, pc.c("b110") - iw) * zeta * z;
    rhs = rhs + CPoly::scalar(n, pc.c("b210") - pc.c("b110") + iw * pc.r("alpha200")) *
                    zeta * (z * z);
    rhs = rhs + CPoly::scalar(n, pc.c("b021") + iw * pc.r("alpha011")) * zeta * S2;
    f.row(3) = rhs.re;
    f.row(4) = rhs.im;

    stableRows(f, 5, spec.n_stable, spec.decay, n);
    return f;
}

PolySystem buildPdns(const EmbeddingSpec& spec) {
    Planted pc{spec.coeffs};
    const double T = spec.period();
    const double w = spec.theta1 / T;
    const double s2 = std::sqrt(2.0 / T);
    const double d = 1.0;  // contraction splitting the -1 block
    const int n = 6 + spec.n_stable;

    Poly c1 = Poly::var(n, 0), c2 = Poly::var(n, 1);
    Poly m1 = Poly::var(n, 2), m2 = Poly::var(n, 3);
    Poly p = Poly::var(n, 4), q = Poly::var(n, 5);
    Poly one = Poly::constant(n, 1.0);
    Poly S1 = (m1 * m1 + m2 * m2) * T;              // xi1^2
    Poly S2 = (p * p + q * q) * (1.0 / (s2 * s2));  // |xi2|^2

    Poly Omega = one + pc.r("alpha200") * S1 + pc.r("alpha011") * S2 +
                 pc.r("alpha400") * (S1 * S1) + pc.r("alpha211") * (S1 * S2) +
                 pc.r("alpha022") * (S2 * S2);

    PolySystem f(n, n);
    circleRows(f, Omega, n);

    // Half-speed rotating block; the projector-style contraction picks the
    // axis that rotates with the half angle, leaving a simple -1 multiplier.
    Poly g1 = pc.r("a300") * S1 + pc.r("a111") * S2 +
              (pc.r("a500") + pc.r("alpha200") * pc.r("a300")) * (S1 * S1) +
              (pc.r("a311") + pc.r("alpha200") * pc.r("a111") +
               pc.r("alpha011") * pc.r("a300")) * (S1 * S2) +
              (pc.r("a122") + pc.r("alpha011") * pc.r("a111")) * (S2 * S2);
    Poly half = 0.5 * Omega;
    f.row(2) = half * (-m2) - (d / 2.0) * ((one - c1) * m1 - c2 * m2) + g1 * m1;
    f.row(3) = half * m1 - (d / 2.0) * ((one + c1) * m2 - c2 * m1) + g1 * m2;

    const Cplx iw = kI * w;
    CPoly zeta(p, q);
    CPoly rhs = CPoly::scalar(n, iw) * zeta;
    rhs = rhs + CPoly::scalar(n, pc.c("b210") + iw * pc.r("alpha200")) * zeta * S1;
    rhs = rhs + CPoly::scalar(n, pc.c("b021") + iw * pc.r("alpha011")) * zeta * S2;
    rhs = rhs + CPoly::scalar(n, pc.c("b410") + pc.r("alpha200") * pc.c("b210") +
                                     iw * pc.r("alpha400")) * zeta * (S1 * S1);
    rhs = rhs + CPoly::scalar(n, pc.c("b221") + pc.r("alpha011") * pc.c("b210") +
                                     pc.r("alpha200") * pc.c("b021") +
                                     iw * pc.r("alpha211")) * zeta * (S1 * S2);
    rhs = rhs + CPoly::scalar(n, pc.c("b032") + pc.r("alpha011") * pc.c("b021") +
                                     iw * pc.r("alpha022")) * zeta * (S2 * S2);
    f.row(4) = rhs.re;
    f.row(5) = rhs.im;

    stableRows(f, 6, spec.n_stable, spec.decay, n);
    return f;
}

PolySystem buildNsns(const EmbeddingSpec& spec) {
    Planted pc{spec.coeffs};
    const double T = spec.period();
    const double w1 = spec.theta1 / T, w2 = spec.theta2 / T;
    const double s2 = std::sqrt(2.0 / T);
    const int n = 6 + spec.n_stable;

    Poly p1 = Poly::var(n, 2), q1 = Poly::var(n, 3);
    Poly p2 = Poly::var(n, 4), q2 = Poly::var(n, 5);
    Poly one = Poly::constant(n, 1.0);
    Poly S1 = (p1 * p1 + q1 * q1) * (1.0 / (s2 * s2));
    Poly S2 = (p2 * p2 + q2 * q2) * (1.0 / (s2 * s2));

    const double a1100 = pc.r("alpha1100"), a0011 = pc.r("alpha0011");
    Poly Omega = one + a1100 * S1 + a0011 * S2 + pc.r("alpha2200") * (S1 * S1) +
                 pc.r("alpha1111") * (S1 * S2) + pc.r("alpha0022") * (S2 * S2);

    PolySystem f(n, n);
    circleRows(f, Omega, n);

    auto sector = [&](double w, CPoly zeta, const Poly& Sown, const Poly& Soth,
                      Cplx cub_own, Cplx cub_oth, Cplx q_own2, Cplx q_oth2,
                      Cplx q_mix, double al_own, double al_oth, double al_own2,
                      double al_oth2, double al_mix) {
        const Cplx iw = kI * w;
        CPoly rhs = CPoly::scalar(n, iw) * zeta;
        rhs = rhs + CPoly::scalar(n, cub_own + iw * al_own) * zeta * Sown;
        rhs = rhs + CPoly::scalar(n, cub_oth + iw * al_oth) * zeta * Soth;
        rhs = rhs + CPoly::scalar(n, q_own2 + cub_own * al_own + iw * al_own2) *
                        zeta * (Sown * Sown);
        rhs = rhs + CPoly::scalar(n, q_oth2 + cub_oth * al_oth + iw * al_oth2) *
                        zeta * (Soth * Soth);
        rhs = rhs + CPoly::scalar(n, q_mix + cub_own * al_oth + cub_oth * al_own +
                                         iw * al_mix) * zeta * (Sown * Soth);
        return rhs;
    };

    CPoly z1(p1, q1), z2(p2, q2);
    CPoly r1 = sector(w1, z1, S1, S2, pc.c("a2100"), pc.c("a1011"), pc.c("a3200"),
                      pc.c("a1022"), pc.c("a2111"), a1100, a0011,
                      pc.r("alpha2200"), pc.r("alpha0022"), pc.r("alpha1111"));
    CPoly r2 = sector(w2, z2, S2, S1, pc.c("b0021"), pc.c("b1110"), pc.c("b0032"),
                      pc.c("b2210"), pc.c("b1121"), a0011, a1100,
                      pc.r("alpha0022"), pc.r("alpha2200"), pc.r("alpha1111"));
    f.row(2) = r1.re;
    f.row(3) = r1.im;
    f.row(4) = r2.re;
    f.row(5) = r2.im;

    stableRows(f, 6, spec.n_stable, spec.decay, n);
    return f;
}

const std::vector<std::string>& coeffNames(BifKind kind) {
    static const std::vector<std::string> lpns = {
        "a200", "a011", "b110", "a300", "a111", "b210", "b021",
        "alpha200", "alpha011", "alpha300", "alpha111"};
    static const std::vector<std::string> pdns = {
        "a300", "a111", "b210", "b021", "a500", "a311", "a122", "b410",
        "b221", "b032", "alpha200", "alpha011", "alpha400", "alpha211",
        "alpha022"};
    static const std::vector<std::string> nsns = {
        "a2100", "a1011", "b0021", "b1110", "a3200", "a2111", "a1022",
        "b0032", "b2210", "b1121", "alpha1100", "alpha0011", "alpha2200",
        "alpha1111", "alpha0022"};
    switch (kind) {
        case BifKind::LPNS: return lpns;
        case BifKind::PDNS: return pdns;
        default: return nsns;
    }
}

bool isRealCoeff(const std::string& name) {
    return name[0] == 'a';  // a* and alpha* are real, b* complex
}

}  // namespace

PolySystem build_embedding_poly(const EmbeddingSpec& spec) {
    validate(spec);
    switch (spec.kind) {
        case BifKind::LPNS: return buildLpns(spec);
        case BifKind::PDNS: return buildPdns(spec);
        default: return buildNsns(spec);
    }
}

OdeSystem build_embedding(const EmbeddingSpec& spec) {
    validate(spec);
    OdeSystem sys;
    sys.name = std::string("nf_embed_") +
               (spec.kind == BifKind::LPNS   ? "lpns"
                : spec.kind == BifKind::PDNS ? "pdns"
                                             : "nsns");
    const auto& names = coeffNames(spec.kind);
    std::vector<double> defaults;
    for (const auto& nm : names) {
        auto it = spec.coeffs.find(nm);
        const Cplx v = it == spec.coeffs.end() ? Cplx(0.0) : it->second;
        sys.param_names.push_back(nm + "_re");
        defaults.push_back(v.real());
        if (!isRealCoeff(nm)) {
            sys.param_names.push_back(nm + "_im");
            defaults.push_back(v.imag());
        }
    }
    sys.param_names.push_back("theta1");
    defaults.push_back(spec.theta1);
    sys.param_names.push_back("theta2");
    defaults.push_back(spec.theta2);
    sys.param_names.push_back("decay");
    defaults.push_back(spec.decay);
    sys.default_params = Eigen::Map<Vec>(defaults.data(), defaults.size());

    const BifKind kind = spec.kind;
    const int nstable = spec.n_stable;
    sys.dim = (kind == BifKind::LPNS ? 5 : 6) + nstable;
    const auto pnames = sys.param_names;
    sys.compile = [kind, nstable, pnames](const Vec& p) -> std::shared_ptr<const CompiledRhs> {
        EmbeddingSpec s;
        s.kind = kind;
        s.n_stable = nstable;
        for (size_t i = 0; i < pnames.size(); ++i) {
            const std::string& nm = pnames[i];
            if (nm == "theta1")
                s.theta1 = p[i];
            else if (nm == "theta2")
                s.theta2 = p[i];
            else if (nm == "decay")
                s.decay = p[i];
            else if (nm.ends_with("_re"))
                s.coeffs[nm.substr(0, nm.size() - 3)] += Cplx(p[i], 0.0);
            else if (nm.ends_with("_im"))
                s.coeffs[nm.substr(0, nm.size() - 3)] += Cplx(0.0, p[i]);
        }
        return std::make_shared<PolyRhs>(build_embedding_poly(s));
    };
    return sys;
}

OdeSystem make_nf_embed(BifKind kind) {
    EmbeddingSpec spec;
    spec.kind = kind;
    switch (kind) {
        case BifKind::LPNS:
            spec.coeffs = {{"a200", 0.5}, {"a011", -1.0}, {"b110", {0.3, 0.2}}};
            break;
        case BifKind::PDNS:
            spec.coeffs = {{"a300", -1.0}, {"a111", 0.4}, {"b210", {-0.5, 0.1}},
                           {"b021", {-0.8, -0.3}}};
            break;
        case BifKind::NSNS:
            spec.theta1 = 2.4;
            spec.theta2 = 1.0;
            spec.coeffs = {{"a2100", {-1.0, 0.5}}, {"a1011", 0.7},
                           {"b0021", {-2.0, -0.3}}, {"b1110", -0.4}};
            break;
    }
    return build_embedding(spec);
}

Vec embedding_cycle_state(const EmbeddingSpec& spec, double tau) {
    const int n = (spec.kind == BifKind::LPNS ? 5 : 6) + spec.n_stable;
    Vec x = Vec::Zero(n);
    x[0] = std::cos(tau);
    x[1] = std::sin(tau);
    return x;
}

}  // namespace lcnf
