#include "lcnf/models.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "lcnf/embedding.hpp"

namespace lcnf {

int OdeSystem::paramIndex(const std::string& pname) const {
    auto it = std::find(param_names.begin(), param_names.end(), pname);
    if (it == param_names.end())
        throw ModelError("unknown parameter '" + pname + "' for model " + name);
    return static_cast<int>(it - param_names.begin());
}

Vec OdeSystem::paramsWith(const std::map<std::string, double>& overrides) const {
    Vec p = default_params;
    for (const auto& [k, v] : overrides) p[paramIndex(k)] = v;
    return p;
}

Vec eval_rhs(const OdeSystem& sys, const Vec& x, const Vec& p) {
    if (x.size() != sys.dim) throw ModelError("state dimension mismatch");
    if (p.size() != static_cast<int>(sys.param_names.size()))
        throw ModelError("parameter vector length mismatch");
    return sys.compile(p)->rhs(x);
}

CVec eval_mlf(const OdeSystem& sys, int order, const Vec& x, const Vec& p,
              const std::vector<CVec>& dirs) {
    if (order < 1 || order > 5) throw ModelError("mlf order must be in 1..5");
    if (x.size() != sys.dim) throw ModelError("state dimension mismatch");
    return sys.compile(p)->mlf(order, x, dirs);
}

void ModelRegistry::add(const std::string& name, std::function<OdeSystem()> factory) {
    entries_[name] = std::move(factory);
}

OdeSystem ModelRegistry::get(const std::string& name) const {
    auto it = entries_.find(name);
    if (it == entries_.end()) throw ModelError("unknown model '" + name + "'");
    return it->second();
}

bool ModelRegistry::contains(const std::string& name) const {
    return entries_.count(name) != 0;
}

std::vector<std::string> ModelRegistry::names() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : entries_) out.push_back(k);
    return out;
}

const ModelRegistry& builtin_models() {
    static ModelRegistry reg = [] {
        ModelRegistry r;
        r.add("laser", make_laser);
        r.add("preypredator", make_preypredator);
        r.add("vibration", make_vibration);
        r.add("hopfcircle", make_hopfcircle);
        r.add("nf_embed_lpns", [] { return make_nf_embed(BifKind::LPNS); });
        r.add("nf_embed_pdns", [] { return make_nf_embed(BifKind::PDNS); });
        r.add("nf_embed_nsns", [] { return make_nf_embed(BifKind::NSNS); });
        return r;
    }();
    return reg;
}

// ---------------------------------------------------------------------------
// laser: single-mode inversionless laser, complex equations expanded to 9
// real ODEs. State: (Ol, raa, rbb, Re/Im sab, Re/Im sac, Re/Im scb).
// The detuning Dl = Dcav + g*Re(sab)*Ol is inlined, so the RHS is cubic.
// ---------------------------------------------------------------------------

OdeSystem make_laser() {
    OdeSystem sys;
    sys.name = "laser";
    sys.dim = 9;
    sys.param_names = {"Omega_p", "Delta_cav", "gamma1",    "gamma2",
                       "gamma3",  "gamma_cav", "g",         "Delta_p"};
    sys.default_params = Vec(8);
    sys.default_params << 3.0, -1.0, 0.275, 0.25525, 0.25025, 0.03, 100.0, 0.0;
    sys.compile = [](const Vec& p) -> std::shared_ptr<const CompiledRhs> {
        const double Op = p[0], Dcav = p[1], g1 = p[2], g2 = p[3], g3 = p[4],
                     gcav = p[5], g = p[6], Dp = p[7];
        const int n = 9;
        auto V = [&](int i) { return Poly::var(n, i); };
        auto K = [&](double c) { return Poly::constant(n, c); };
        Poly Ol = V(0), raa = V(1), rbb = V(2), sabr = V(3), sabi = V(4),
             sacr = V(5), saci = V(6), scbr = V(7), scbi = V(8);

        Poly Dl = K(Dcav) + g * (sabr * Ol);
        Poly Ra = -0.505 * raa - 0.405 * rbb + K(0.45);
        Poly Rb = 0.0495 * raa - 0.0505 * rbb + K(0.0055);

        PolySystem f(n, n);
        f.row(0) = -(gcav / 2.0) * Ol - g * sabi;
        f.row(1) = Ra + Ol * sabi + Op * saci;
        f.row(2) = Rb - Ol * sabi;
        f.row(3) = -g1 * sabr + Dl * sabi - (Op / 2.0) * scbi;
        f.row(4) = -g1 * sabi - Dl * sabr - 0.5 * (Ol * (raa - rbb) - Op * scbr);
        f.row(5) = -g2 * sacr + Dp * saci + 0.5 * (Ol * scbi);
        f.row(6) = -g2 * saci - Dp * sacr - 0.5 * (Op * (2.0 * raa + rbb - K(1.0)) - Ol * scbr);
        f.row(7) = -g3 * scbr + (Dl - K(Dp)) * scbi - 0.5 * (Ol * saci + Op * sabi);
        f.row(8) = -g3 * scbi - (Dl - K(Dp)) * scbr - 0.5 * (Ol * sacr - Op * sabr);
        return std::make_shared<PolyRhs>(std::move(f));
    };
    return sys;
}

// ---------------------------------------------------------------------------
// preypredator: two-patch predator-prey system with periodic forcing.
// State: (x1, x2, y1, y2, v1, v2). Holling type II terms are rational and
// get exact derivative tensors below; the rest is polynomial.
// ---------------------------------------------------------------------------

namespace {

// c * x_u * x_w / (m0 + sum_j mlin_j x_j), added to row_minus with weight -1
// and to row_plus with weight +1.
struct HollingTerm {
    double c;
    int u, w;
    double m0;
    std::vector<std::pair<int, double>> mlin;
    int row_minus, row_plus;

    double m(const Vec& x) const {
        double s = m0;
        for (auto& [j, a] : mlin) s += a * x[j];
        return s;
    }
    Cplx mdot(const CVec& d) const {
        Cplx s = 0.0;
        for (auto& [j, a] : mlin) s += a * d[j];
        return s;
    }
    // k-th derivative of P/m, P = c*x_u*x_w, m affine, applied to dirs.
    // Leibniz over subsets of derivative slots hitting P (|S| <= 2).
    Cplx deriv(const Vec& x, const std::vector<CVec>& dirs) const {
        const int k = static_cast<int>(dirs.size());
        const double mv = m(x);
        if (std::abs(mv) < 1e-12)
            throw ModelError("Holling denominator vanished");
        std::vector<Cplx> md(k);
        for (int i = 0; i < k; ++i) md[i] = mdot(dirs[i]);
        auto minv_deriv = [&](int j) {  // (-1)^j j! / m^(j+1)
            double v = 1.0 / mv;
            for (int q = 1; q <= j; ++q) v *= -q / mv;
            return v;
        };
        Cplx total = 0.0;
        const int full = 1 << k;
        for (int mask = 0; mask < full; ++mask) {
            const int sz = __builtin_popcount(mask);
            if (sz > 2) continue;
            Cplx pterm;
            if (sz == 0) {
                pterm = c * x[u] * x[w];
            } else if (sz == 1) {
                const int i = __builtin_ctz(mask);
                pterm = c * (dirs[i][u] * x[w] + x[u] * dirs[i][w]);
            } else {
                int i = -1, j = -1;
                for (int q = 0; q < k; ++q)
                    if (mask & (1 << q)) (i < 0 ? i : j) = q;
                pterm = c * (dirs[i][u] * dirs[j][w] + dirs[j][u] * dirs[i][w]);
            }
            if (pterm == 0.0) continue;
            Cplx rest = minv_deriv(k - sz);
            for (int q = 0; q < k; ++q)
                if (!(mask & (1 << q))) rest *= md[q];
            total += pterm * rest;
        }
        return total;
    }
};

class PreyPredatorRhs : public CompiledRhs {
public:
    PreyPredatorRhs(PolySystem poly, std::vector<HollingTerm> holl)
        : poly_(std::move(poly)), holl_(std::move(holl)) {}

    int dim() const override { return poly_.dim(); }

    Vec rhs(const Vec& x) const override {
        Vec f = poly_.eval(x);
        for (const auto& h : holl_) {
            const double v = h.c * x[h.u] * x[h.w] / h.m(x);
            f[h.row_minus] -= v;
            f[h.row_plus] += v;
        }
        return f;
    }

    Mat jacobian(const Vec& x) const override {
        Mat J = poly_.jacobian(x);
        std::vector<CVec> d(1, CVec::Zero(dim()));
        for (int j = 0; j < dim(); ++j) {
            d[0].setZero();
            d[0][j] = 1.0;
            for (const auto& h : holl_) {
                const double v = h.deriv(x, d).real();
                J(h.row_minus, j) -= v;
                J(h.row_plus, j) += v;
            }
        }
        return J;
    }

    CVec mlf(int order, const Vec& x, const std::vector<CVec>& dirs) const override {
        if (order < 1 || order > 5) throw ModelError("mlf order must be in 1..5");
        CVec f = poly_.mlf(order, x, dirs);
        for (const auto& h : holl_) {
            const Cplx v = h.deriv(x, dirs);
            f[h.row_minus] -= v;
            f[h.row_plus] += v;
        }
        return f;
    }

private:
    PolySystem poly_;
    std::vector<HollingTerm> holl_;
};

}  // namespace

OdeSystem make_preypredator() {
    OdeSystem sys;
    sys.name = "preypredator";
    sys.dim = 6;
    sys.param_names = {"b2", "eps", "r1", "r2", "b1", "gamma", "c"};
    sys.default_params = Vec(7);
    sys.default_params << 0.25, 0.5, 1.0, 1.0, 0.4, 0.1, 2.0;
    sys.compile = [](const Vec& p) -> std::shared_ptr<const CompiledRhs> {
        const double b2 = p[0], eps = p[1], r1 = p[2], r2 = p[3], b1 = p[4],
                     gam = p[5], c = p[6];
        const int n = 6;
        auto V = [&](int i) { return Poly::var(n, i); };
        auto K = [&](double s) { return Poly::constant(n, s); };
        Poly x1 = V(0), x2 = V(1), y1 = V(2), y2 = V(3), v1 = V(4), v2 = V(5);

        PolySystem f(n, n);
        f.row(0) = r1 * (x1 * (K(1.0) - x1));
        f.row(1) = -x2 + gam * (y2 - x2);
        f.row(2) = r2 * (y1 * (K(1.0) - y1));
        f.row(3) = -y2 + gam * (x2 - y2);
        Poly rad = K(1.0) - v1 * v1 - v2 * v2;
        f.row(4) = -v2 + v1 * rad;
        f.row(5) = v1 + v2 * rad;

        std::vector<HollingTerm> holl;
        holl.push_back(HollingTerm{c, 0, 1, b1, {{0, 1.0}, {4, b1 * eps}}, 0, 1});
        holl.push_back(HollingTerm{c, 2, 3, b2, {{2, 1.0}}, 2, 3});
        return std::make_shared<PreyPredatorRhs>(std::move(f), std::move(holl));
    };
    return sys;
}

// ---------------------------------------------------------------------------
// vibration: two-mass flow-excited system with parametric stiffness
// excitation by a forcing oscillator. State: (x1, x2, v1, v2, y1, y2).
// ---------------------------------------------------------------------------

OdeSystem make_vibration() {
    OdeSystem sys;
    sys.name = "vibration";
    sys.dim = 6;
    sys.param_names = {"k1", "eta", "eps", "k2", "beta", "V", "gamma", "Q", "M"};
    sys.default_params = Vec(9);
    sys.default_params << 0.1, 0.4, 0.1, 0.1, 0.1, std::sqrt(2.1), 4.0, 0.95, 0.2;
    sys.compile = [](const Vec& p) -> std::shared_ptr<const CompiledRhs> {
        const double k1 = p[0], eta = p[1], eps = p[2], k2 = p[3], beta = p[4],
                     V0 = p[5], gam = p[6], Q = p[7], M = p[8];
        const int n = 6;
        auto Vr = [&](int i) { return Poly::var(n, i); };
        auto K = [&](double s) { return Poly::constant(n, s); };
        Poly x1 = Vr(0), x2 = Vr(1), v1 = Vr(2), v2 = Vr(3), y1 = Vr(4), y2 = Vr(5);

        Poly spring = (K(1.0) + eps * y1) * (x1 - x2) * (Q * Q);
        PolySystem f(n, n);
        f.row(0) = v1;
        f.row(1) = v2;
        f.row(2) = -k1 * (v1 - v2) - spring;
        f.row(3) = M * k1 * (v1 - v2) + M * spring - k2 * v2 - x2 +
                   (beta * V0 * V0) * ((K(1.0) - gam * (v2 * v2)) * v2);
        Poly rad = K(1.0) - y1 * y1 - y2 * y2;
        f.row(4) = -eta * y2 + y1 * rad;
        f.row(5) = eta * y1 + y2 * rad;
        return std::make_shared<PolyRhs>(std::move(f));
    };
    return sys;
}

OdeSystem make_hopfcircle() {
    OdeSystem sys;
    sys.name = "hopfcircle";
    sys.dim = 2;
    sys.param_names = {};
    sys.default_params = Vec(0);
    sys.compile = [](const Vec&) -> std::shared_ptr<const CompiledRhs> {
        const int n = 2;
        Poly v1 = Poly::var(n, 0), v2 = Poly::var(n, 1);
        Poly rad = Poly::constant(n, 1.0) - v1 * v1 - v2 * v2;
        PolySystem f(n, n);
        f.row(0) = -v2 + v1 * rad;
        f.row(1) = v1 + v2 * rad;
        return std::make_shared<PolyRhs>(std::move(f));
    };
    return sys;
}

// ---------------------------------------------------------------------------
// Finite-difference polarization fallback.
// ---------------------------------------------------------------------------

namespace {

// Central polarization with real directions: product of sign factors over
// the corners of {-1,1}^k, step h/2 per direction.
Vec fd_real(const std::function<Vec(const Vec&)>& f, int k, const Vec& x,
            const std::vector<Vec>& dirs, double h) {
    const int corners = 1 << k;
    Vec acc;
    for (int mask = 0; mask < corners; ++mask) {
        Vec xp = x;
        int sgn = 1;
        for (int i = 0; i < k; ++i) {
            const int s = (mask & (1 << i)) ? 1 : -1;
            if (s < 0) sgn = -sgn;
            xp += (0.5 * h * s) * dirs[i];
        }
        Vec v = static_cast<double>(sgn) * f(xp);
        if (acc.size() == 0)
            acc = v;
        else
            acc += v;
    }
    return acc / std::pow(h, k);
}

}  // namespace

CVec fd_polarization_mlf(const std::function<Vec(const Vec&)>& f, int order,
                         const Vec& x, const std::vector<CVec>& dirs) {
    if (order < 1 || order > 5) throw ModelError("mlf order must be in 1..5");
    const double eps = std::numeric_limits<double>::epsilon();
    const double h = std::pow(eps, 1.0 / (order + 2)) * std::max(1.0, x.norm());

    // Expand multilinearly over real/imaginary parts of each direction.
    std::vector<Vec> re(order), im(order);
    std::vector<double> scale(order);
    for (int i = 0; i < order; ++i) {
        re[i] = dirs[i].real();
        im[i] = dirs[i].imag();
    }
    CVec total = CVec::Zero(x.size());
    const int combos = 1 << order;
    for (int mask = 0; mask < combos; ++mask) {
        std::vector<Vec> d(order);
        Cplx factor = 1.0;
        bool zero = false;
        for (int i = 0; i < order; ++i) {
            const Vec& part = (mask & (1 << i)) ? im[i] : re[i];
            if (mask & (1 << i)) factor *= kI;
            const double nn = part.norm();
            if (nn == 0.0) {
                zero = true;
                break;
            }
            d[i] = part / nn;
            factor *= nn;
        }
        if (zero) continue;
        total += factor * fd_real(f, order, x, d, h).cast<Cplx>();
    }
    return total;
}

namespace {

class FdRhs : public CompiledRhs {
public:
    FdRhs(int dim, std::function<Vec(const Vec&)> f) : dim_(dim), f_(std::move(f)) {}
    int dim() const override { return dim_; }
    Vec rhs(const Vec& x) const override { return f_(x); }
    Mat jacobian(const Vec& x) const override {
        Mat J(dim_, dim_);
        std::vector<CVec> d(1);
        for (int j = 0; j < dim_; ++j) {
            CVec e = CVec::Zero(dim_);
            e[j] = 1.0;
            d[0] = e;
            J.col(j) = fd_polarization_mlf(f_, 1, x, d).real();
        }
        return J;
    }
    CVec mlf(int order, const Vec& x, const std::vector<CVec>& dirs) const override {
        return fd_polarization_mlf(f_, order, x, dirs);
    }

private:
    int dim_;
    std::function<Vec(const Vec&)> f_;
};

}  // namespace

std::shared_ptr<const CompiledRhs> make_fd_rhs(int dim, std::function<Vec(const Vec&)> f) {
    return std::make_shared<FdRhs>(dim, std::move(f));
}

}  // namespace lcnf
