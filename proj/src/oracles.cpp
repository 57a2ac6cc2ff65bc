#include "lcnf/oracles.hpp"

#include <cmath>

namespace lcnf {

double tanh_sinh_01(const std::function<double(double)>& f, double tol) {
    // x(t) = (1 + tanh((pi/2) sinh t)) / 2 on t in (-tmax, tmax).
    const double tmax = 3.8;
    auto eval = [&](double t, double& x, double& w) {
        const double s = std::sinh(t);
        const double c = std::cosh(t);
        const double th = std::tanh(0.5 * M_PI * s);
        x = 0.5 * (1.0 + th);
        const double sech = 1.0 / std::cosh(0.5 * M_PI * s);
        w = 0.25 * M_PI * c * sech * sech;
    };
    double h = 0.5;
    double prev = 0.0;
    double sum = 0.0;
    {
        double x, wgt;
        eval(0.0, x, wgt);
        sum = wgt * f(x);
        for (double t = h; t <= tmax; t += h) {
            double xp, wp, xm, wm;
            eval(t, xp, wp);
            eval(-t, xm, wm);
            if (xp < 1.0 && wp > 1e-300) sum += wp * f(xp);
            if (xm > 0.0 && wm > 1e-300) sum += wm * f(xm);
        }
        prev = sum * h;
    }
    for (int level = 0; level < 10; ++level) {
        h *= 0.5;
        double add = 0.0;
        for (double t = h; t <= tmax; t += 2.0 * h) {
            double xp, wp, xm, wm;
            eval(t, xp, wp);
            eval(-t, xm, wm);
            if (xp < 1.0 && wp > 1e-300) add += wp * f(xp);
            if (xm > 0.0 && wm > 1e-300) add += wm * f(xm);
        }
        const double cur = prev / 2.0 + add * h;
        if (std::abs(cur - prev) < tol * std::max(1.0, std::abs(cur)) && level > 2)
            return cur;
        prev = cur;
    }
    return prev;
}

double beta_integral_quad(double a, double b) {
    if (a <= -1.0 || b <= -1.0) throw DomainViolation("beta integral needs a,b > -1");
    return tanh_sinh_01([&](double x) {
        return std::pow(1.0 - x, a) * std::pow(x, b);
    });
}

double melnikov_numeric(double theta, double delta, double Theta, double Delta) {
    if (!(theta < 0.0 && delta < 0.0 && delta * theta - 1.0 > 0.0))
        throw DomainViolation("Melnikov condition needs theta,delta<0, theta*delta>1");
    const double p = (1.0 - delta) / (delta * theta - 1.0);
    const double q = (1.0 - theta) / (delta * theta - 1.0);
    const double c1 = (delta - 1.0) / (theta - 1.0);
    // M(0) = -c1^q [ p Theta c1^2/(q+2) I(q+2,p-1) + c2 I(q,p-1)
    //                + Delta I(q,p+1) ] with I(a,b) = int (1-x)^a x^b dx.
    const double Iq2 = beta_integral_quad(q + 2.0, p - 1.0);
    const double Iq0 = beta_integral_quad(q, p - 1.0);
    const double Iqp = beta_integral_quad(q, p + 1.0);
    return -(p * Theta * c1 * c1 / (q + 2.0) * Iq2 + Delta * Iqp) / Iq0;
}

}  // namespace lcnf
