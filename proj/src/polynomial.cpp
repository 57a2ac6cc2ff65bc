#include "lcnf/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace lcnf {

Poly Poly::constant(int nvars, double c) {
    Poly p(nvars);
    if (c != 0.0) p.addTerm(c, std::vector<uint8_t>(nvars, 0));
    return p;
}

Poly Poly::var(int nvars, int i) {
    Poly p(nvars);
    std::vector<uint8_t> e(nvars, 0);
    e[i] = 1;
    p.addTerm(1.0, std::move(e));
    return p;
}

void Poly::addTerm(double c, std::vector<uint8_t> e) {
    terms_.push_back(Monomial{c, std::move(e)});
    compress();
}

void Poly::compress() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Monomial& a, const Monomial& b) { return a.exp < b.exp; });
    std::vector<Monomial> out;
    for (auto& t : terms_) {
        if (!out.empty() && out.back().exp == t.exp)
            out.back().coeff += t.coeff;
        else
            out.push_back(t);
    }
    std::erase_if(out, [](const Monomial& m) { return m.coeff == 0.0; });
    terms_ = std::move(out);
}

int Poly::degree() const {
    int d = 0;
    for (const auto& t : terms_) {
        int s = 0;
        for (auto e : t.exp) s += e;
        d = std::max(d, s);
    }
    return d;
}

Poly& Poly::operator+=(const Poly& o) {
    for (const auto& t : o.terms_) terms_.push_back(t);
    compress();
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    for (const auto& t : o.terms_) terms_.push_back(Monomial{-t.coeff, t.exp});
    compress();
    return *this;
}

Poly& Poly::operator*=(double s) {
    for (auto& t : terms_) t.coeff *= s;
    compress();
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    Poly r(a.nvars_);
    for (const auto& ta : a.terms_)
        for (const auto& tb : b.terms_) {
            std::vector<uint8_t> e(ta.exp);
            for (size_t i = 0; i < e.size(); ++i) e[i] += tb.exp[i];
            r.terms_.push_back(Monomial{ta.coeff * tb.coeff, std::move(e)});
        }
    r.compress();
    return r;
}

namespace {

double powi(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

// Recursive slot assignment: each derivative slot picks one variable of the
// monomial, lowering its exponent; what remains is evaluated at x.
Cplx monoMlf(const Vec& x, const std::vector<CVec>& dirs, size_t slot,
             std::vector<int>& e, double coeff) {
    if (slot == dirs.size()) {
        double v = coeff;
        for (int i = 0; i < x.size(); ++i)
            if (e[i] > 0) v *= powi(x[i], e[i]);
        return Cplx(v, 0.0);
    }
    Cplx s = 0.0;
    for (int i = 0; i < x.size(); ++i) {
        if (e[i] <= 0) continue;
        const Cplx d = dirs[slot][i];
        if (d == 0.0) continue;
        const double f = e[i];
        --e[i];
        s += f * d * monoMlf(x, dirs, slot + 1, e, coeff);
        ++e[i];
    }
    return s;
}

}  // namespace

double Poly::eval(const Vec& x) const {
    double s = 0.0;
    for (const auto& t : terms_) {
        double v = t.coeff;
        for (int i = 0; i < nvars_; ++i)
            if (t.exp[i] > 0) v *= powi(x[i], t.exp[i]);
        s += v;
    }
    return s;
}

double Poly::derivEval(int j, const Vec& x) const {
    double s = 0.0;
    for (const auto& t : terms_) {
        if (t.exp[j] == 0) continue;
        double v = t.coeff * t.exp[j];
        for (int i = 0; i < nvars_; ++i) {
            int e = t.exp[i] - (i == j ? 1 : 0);
            if (e > 0) v *= powi(x[i], e);
        }
        s += v;
    }
    return s;
}

Cplx Poly::mlf(const Vec& x, const std::vector<CVec>& dirs) const {
    Cplx s = 0.0;
    std::vector<int> e(nvars_);
    for (const auto& t : terms_) {
        int total = 0;
        for (int i = 0; i < nvars_; ++i) total += t.exp[i];
        if (total < static_cast<int>(dirs.size())) continue;
        for (int i = 0; i < nvars_; ++i) e[i] = t.exp[i];
        s += monoMlf(x, dirs, 0, e, t.coeff);
    }
    return s;
}

int PolySystem::degree() const {
    int d = 0;
    for (const auto& r : rows_) d = std::max(d, r.degree());
    return d;
}

Vec PolySystem::eval(const Vec& x) const {
    Vec f(dim());
    for (int i = 0; i < dim(); ++i) f[i] = rows_[i].eval(x);
    return f;
}

Mat PolySystem::jacobian(const Vec& x) const {
    Mat J(dim(), nvars_);
    for (int i = 0; i < dim(); ++i)
        for (int j = 0; j < nvars_; ++j) J(i, j) = rows_[i].derivEval(j, x);
    return J;
}

CVec PolySystem::mlf(int order, const Vec& x, const std::vector<CVec>& dirs) const {
    if (static_cast<int>(dirs.size()) != order)
        throw ModelError("mlf: direction count does not match order");
    CVec f(dim());
    for (int i = 0; i < dim(); ++i) f[i] = rows_[i].mlf(x, dirs);
    return f;
}

}  // namespace lcnf
