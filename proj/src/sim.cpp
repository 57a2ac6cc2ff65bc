#include "lcnf/sim.hpp"

#include <boost/numeric/odeint.hpp>
#include <cmath>

namespace lcnf {

namespace {

namespace ode = boost::numeric::odeint;
using State = std::vector<double>;

struct RhsWrap {
    const CompiledRhs& f;
    void operator()(const State& x, State& dxdt, double) const {
        Eigen::Map<const Vec> xm(x.data(), x.size());
        Vec fx = f.rhs(xm);
        dxdt.assign(fx.data(), fx.data() + fx.size());
    }
};

bool finiteState(const State& x) {
    for (double v : x)
        if (!std::isfinite(v) || std::abs(v) > 1e8) return false;
    return true;
}

void checkFinite(const State& x) {
    if (!finiteState(x)) throw Divergence("trajectory escaped (state norm too large)");
}

template <class System>
class Stepper {
public:
    Stepper(System sys, double tol) : sys_(sys), ctrl_(ode::make_controlled(tol, tol, Base())) {}

    // Advances x in place from t by at most dt, returns the step taken.
    // A non-finite result (e.g. a trial step across a pole of the RHS) is
    // treated as a rejected step.
    double step(State& x, double& t, double dt) {
        for (int k = 0; k < 80; ++k) {
            const double t0 = t;
            const State xsave = x;
            auto res = ctrl_.try_step(sys_, x, t, dt);
            if (res == ode::success) {
                if (finiteState(x)) return t - t0;
                x = xsave;
                t = t0;
                dt *= 0.25;
                if (dt < 1e-14) break;
            }
        }
        throw Divergence("adaptive integration failed to take a step");
    }

private:
    using Base = ode::runge_kutta_fehlberg78<State>;
    System sys_;
    ode::controlled_runge_kutta<Base> ctrl_;
};

}  // namespace

Vec integrate_to(const CompiledRhs& f, Vec x0, double t0, double t1, double tol) {
    State x(x0.data(), x0.data() + x0.size());
    Stepper<RhsWrap> st(RhsWrap{f}, tol);
    double t = t0;
    double dt = std::min(0.5, (t1 - t0) / 10.0);
    while (t < t1 - 1e-14) {
        dt = std::min(dt, t1 - t);
        dt = st.step(x, t, dt);
        checkFinite(x);
        dt = std::clamp(dt, 1e-12, 1.0);
    }
    return Eigen::Map<Vec>(x.data(), x.size());
}

std::vector<Vec> integrate_samples(const CompiledRhs& f, Vec x0, double t0,
                                   const std::vector<double>& times, double tol) {
    std::vector<Vec> out;
    Vec x = std::move(x0);
    double t = t0;
    for (double tq : times) {
        if (tq > t + 1e-14) {
            x = integrate_to(f, x, t, tq, tol);
            t = tq;
        }
        out.push_back(x);
    }
    return out;
}

CycleGuess find_cycle_guess(const CompiledRhs& f, Vec x0, double t_transient,
                            double t_max, int max_loops, double tol) {
    Vec xa = integrate_to(f, std::move(x0), 0.0, t_transient, tol);
    const Vec na = f.rhs(xa);
    if (na.norm() < 1e-12) throw NoConvergence("transient landed on an equilibrium");
    const Vec nrm = na / na.norm();

    auto section = [&](const Vec& x) { return nrm.dot(x - xa); };

    State x(xa.data(), xa.data() + xa.size());
    Stepper<RhsWrap> st(RhsWrap{f}, tol);
    double t = 0.0;
    double dt = 1e-3;

    CycleGuess best;
    best.anchor = xa;
    best.period = 0.0;
    best.closure = 1e30;

    int crossings = 0;
    double gPrev = 0.0;
    double tPrev = 0.0;
    Vec xPrev = xa;
    bool first = true;
    while (t < t_max && crossings < max_loops) {
        const double taken = st.step(x, t, dt);
        checkFinite(x);
        dt = std::min(std::max(taken, 1e-12), 0.2);
        Eigen::Map<Vec> xm(x.data(), x.size());
        const double g = section(xm);
        const Vec fx = f.rhs(xm);
        if (!first && gPrev < 0.0 && g >= 0.0 && nrm.dot(fx) > 0.0) {
            // Bisect the crossing by re-integrating from the previous state.
            double lo = tPrev, hi = t;
            Vec xlo = xPrev;
            for (int it = 0; it < 60 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
                const double mid = 0.5 * (lo + hi);
                Vec xm2 = integrate_to(f, xlo, lo, mid, tol);
                if (section(xm2) < 0.0) {
                    lo = mid;
                    xlo = xm2;
                } else {
                    hi = mid;
                }
            }
            Vec xc = integrate_to(f, xlo, lo, hi, tol);
            ++crossings;
            const double miss = (xc - xa).norm() / std::max(1.0, xa.norm());
            if (miss < best.closure) {
                best.closure = miss;
                best.period = hi;
            }
            if (miss < 1e-6) break;
        }
        gPrev = g;
        tPrev = t;
        xPrev = xm;
        first = false;
    }
    if (best.period <= 0.0)
        throw NoConvergence("no section return detected while seeding a cycle");
    return best;
}

std::pair<Vec, Mat> flow_with_jacobian(const CompiledRhs& f, const Vec& x0, double T,
                                       double tol) {
    const int n = f.dim();
    struct AugSys {
        const CompiledRhs& f;
        int n;
        void operator()(const State& y, State& dydt, double) const {
            Eigen::Map<const Vec> x(y.data(), n);
            Eigen::Map<const Mat> Y(y.data() + n, n, n);
            dydt.resize(n + n * n);
            Eigen::Map<Vec> dx(dydt.data(), n);
            Eigen::Map<Mat> dY(dydt.data() + n, n, n);
            dx = f.rhs(x);
            dY = f.jacobian(x) * Y;
        }
    };
    State y(n + n * n);
    for (int i = 0; i < n; ++i) y[i] = x0[i];
    Eigen::Map<Mat>(y.data() + n, n, n) = Mat::Identity(n, n);
    Stepper<AugSys> st(AugSys{f, n}, tol);
    double t = 0.0, dt = std::min(0.25, T / 20.0);
    while (t < T - 1e-14) {
        dt = std::min(dt, T - t);
        dt = st.step(y, t, dt);
        dt = std::clamp(dt, 1e-12, 1.0);
    }
    return {Eigen::Map<Vec>(y.data(), n), Eigen::Map<Mat>(y.data() + n, n, n)};
}

Mat monodromy_by_integration(const CompiledRhs& f, const MeshFunction& profile,
                             double T, double tol) {
    const int n = profile.n();
    struct VarSys {
        const CompiledRhs& f;
        const MeshFunction& u0;
        int n;
        void operator()(const State& y, State& dydt, double t) const {
            Eigen::Map<const Mat> Y(y.data(), n, n);
            const Mat A = f.jacobian(u0.interpolate(t).real());
            Mat dY = A * Y;
            dydt.assign(dY.data(), dY.data() + n * n);
        }
    };
    Mat Y0 = Mat::Identity(n, n);
    State y(Y0.data(), Y0.data() + n * n);
    Stepper<VarSys> st(VarSys{f, profile, n}, tol);
    double t = 0.0, dt = T / 200.0;
    while (t < T - 1e-14) {
        dt = std::min(dt, T - t);
        dt = st.step(y, t, dt);
    }
    return Eigen::Map<Mat>(y.data(), n, n);
}

}  // namespace lcnf
