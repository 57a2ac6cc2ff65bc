#pragma once

#include <cstdint>
#include <vector>

#include "lcnf/types.hpp"

namespace lcnf {

// One term c * prod_i x_i^exp[i] of a multivariate polynomial.
struct Monomial {
    double coeff = 0.0;
    std::vector<uint8_t> exp;
};

// Sparse multivariate polynomial with exact evaluation of directional
// derivative tensors of any order. Directions may be complex; the
// underlying tensor is real.
class Poly {
public:
    Poly() = default;
    explicit Poly(int nvars) : nvars_(nvars) {}

    static Poly constant(int nvars, double c);
    static Poly var(int nvars, int i);

    int nvars() const { return nvars_; }
    int degree() const;
    bool empty() const { return terms_.empty(); }

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(double s);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(Poly a, double s) { return a *= s; }
    friend Poly operator*(double s, Poly a) { return a *= s; }
    friend Poly operator-(Poly a) { return a *= -1.0; }
    friend Poly operator*(const Poly& a, const Poly& b);

    double eval(const Vec& x) const;
    // d/dx in direction of unit vector j, contracted once: used for Jacobians.
    double derivEval(int j, const Vec& x) const;
    // k-th derivative tensor at x applied to the k given directions.
    Cplx mlf(const Vec& x, const std::vector<CVec>& dirs) const;

    const std::vector<Monomial>& terms() const { return terms_; }

    void addTerm(double c, std::vector<uint8_t> e);

private:
    void compress();

    int nvars_ = 0;
    std::vector<Monomial> terms_;
};

// A vector field whose components are sparse polynomials.
class PolySystem {
public:
    PolySystem() = default;
    PolySystem(int dim, int nvars) : nvars_(nvars), rows_(dim, Poly(nvars)) {}

    int dim() const { return static_cast<int>(rows_.size()); }
    int nvars() const { return nvars_; }
    int degree() const;

    Poly& row(int i) { return rows_[i]; }
    const Poly& row(int i) const { return rows_[i]; }

    Vec eval(const Vec& x) const;
    Mat jacobian(const Vec& x) const;
    CVec mlf(int order, const Vec& x, const std::vector<CVec>& dirs) const;

private:
    int nvars_ = 0;
    std::vector<Poly> rows_;
};

}  // namespace lcnf
