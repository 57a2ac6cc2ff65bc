#include "lcnf/lyapunov.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>

namespace lcnf {

int LyapunovResult::zeroCount(double threshold) const {
    int c = 0;
    for (int i = 0; i < exponents.size(); ++i)
        if (std::abs(exponents[i]) < threshold) ++c;
    return c;
}

namespace {

// One RK4 step of the state together with the tangent basis.
void rk4Step(const CompiledRhs& f, double h, Vec& x, Mat& Q) {
    const Vec k1 = f.rhs(x);
    const Mat K1 = f.jacobian(x) * Q;
    const Vec x2 = x + 0.5 * h * k1;
    const Vec k2 = f.rhs(x2);
    const Mat K2 = f.jacobian(x2) * (Q + 0.5 * h * K1);
    const Vec x3 = x + 0.5 * h * k2;
    const Vec k3 = f.rhs(x3);
    const Mat K3 = f.jacobian(x3) * (Q + 0.5 * h * K2);
    const Vec x4 = x + h * k3;
    const Vec k4 = f.rhs(x4);
    const Mat K4 = f.jacobian(x4) * (Q + h * K3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    Q += (h / 6.0) * (K1 + 2.0 * K2 + 2.0 * K3 + K4);
}

void rk4StateStep(const CompiledRhs& f, double h, Vec& x) {
    const Vec k1 = f.rhs(x);
    const Vec k2 = f.rhs(Vec(x + 0.5 * h * k1));
    const Vec k3 = f.rhs(Vec(x + 0.5 * h * k2));
    const Vec k4 = f.rhs(Vec(x + h * k3));
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

LyapunovResult lyapunov_spectrum(const CompiledRhs& f, const Vec& x0,
                                 const LyapunovOptions& opts) {
    if (opts.t_total <= opts.t_transient || opts.t_transient <= 0.0)
        throw LcnfError("lyapunov: need t_total > t_transient > 0");
    const int n = f.dim();
    Vec x = x0;

    const int substeps = std::max(1, static_cast<int>(std::ceil(opts.renorm_dt / opts.dt)));
    const double h = opts.renorm_dt / substeps;

    const int transientWindows =
        static_cast<int>(std::ceil(opts.t_transient / opts.renorm_dt));
    for (int wdw = 0; wdw < transientWindows; ++wdw) {
        for (int s = 0; s < substeps; ++s) rk4StateStep(f, h, x);
        if (x.norm() > opts.divergence_bound)
            throw Divergence("lyapunov: trajectory escaped during transient");
    }

    Mat Q = Mat::Identity(n, n);
    Vec sums = Vec::Zero(n);
    double traceSum = 0.0;
    long traceCount = 0;
    const double measure = opts.t_total - opts.t_transient;
    const int windows = static_cast<int>(std::ceil(measure / opts.renorm_dt));
    for (int wdw = 0; wdw < windows; ++wdw) {
        for (int s = 0; s < substeps; ++s) {
            rk4Step(f, h, x, Q);
            traceSum += f.jacobian(x).trace();
            ++traceCount;
        }
        if (x.norm() > opts.divergence_bound)
            throw Divergence("lyapunov: trajectory escaped");
        Eigen::HouseholderQR<Mat> qr(Q);
        Mat R = qr.matrixQR().triangularView<Eigen::Upper>();
        Q = qr.householderQ() * Mat::Identity(n, n);
        for (int i = 0; i < n; ++i) {
            const double d = std::abs(R(i, i));
            sums[i] += std::log(std::max(d, 1e-300));
            // Keep Q's columns aligned with the growth directions.
            if (R(i, i) < 0.0) Q.col(i) = -Q.col(i);
        }
    }

    LyapunovResult out;
    out.exponents = sums / (windows * opts.renorm_dt);
    std::sort(out.exponents.data(), out.exponents.data() + n, std::greater<double>());
    out.trace_avg = traceSum / std::max<long>(traceCount, 1);
    out.final_state = x;
    return out;
}

SweepResult lyapunov_sweep(const OdeSystem& sys, const LyapunovSweep& spec) {
    if (spec.samples < 2 || !(spec.hi > spec.lo))
        throw LcnfError("lyapunov sweep: invalid range");
    const int ip = sys.paramIndex(spec.sweep_param);

    SweepResult out;
    Vec x = spec.x0;
    for (int k = 0; k < spec.samples; ++k) {
        const double frac = double(k) / (spec.samples - 1);
        const double val = spec.increasing ? spec.lo + frac * (spec.hi - spec.lo)
                                           : spec.hi - frac * (spec.hi - spec.lo);
        Vec p = spec.base_params;
        p[ip] = val;
        auto rhs = sys.compile(p);
        LyapunovResult rs = lyapunov_spectrum(*rhs, x, spec.opts);
        x = rs.final_state;  // follow the attractor
        out.param.push_back(val);
        out.exponents.push_back(rs.exponents);
        out.zero_count.push_back(rs.zeroCount(spec.opts.zero_threshold));
    }
    for (size_t k = 1; k < out.param.size(); ++k)
        if (out.zero_count[k] != out.zero_count[k - 1])
            out.transitions.push_back(0.5 * (out.param[k] + out.param[k - 1]));
    return out;
}

}  // namespace lcnf
