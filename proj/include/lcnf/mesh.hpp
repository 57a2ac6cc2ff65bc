#pragma once

#include <memory>
#include <vector>

#include "lcnf/types.hpp"

namespace lcnf {

// Piecewise-polynomial collocation mesh on [0,1] (time fractions).
// Each of the ntst intervals carries ncol Gauss-Legendre collocation nodes
// and a degree-ncol polynomial represented by its values at ncol+1
// equidistant points; interval endpoints are shared, so a function has
// ntst*ncol+1 value points per component.
class Mesh {
public:
    static std::shared_ptr<const Mesh> uniform(int ntst, int ncol);
    static std::shared_ptr<const Mesh> withBreaks(std::vector<double> breaks, int ncol);

    int ntst() const { return ntst_; }
    int ncol() const { return ncol_; }
    int nPoints() const { return ntst_ * ncol_ + 1; }
    int nGauss() const { return ntst_ * ncol_; }

    const std::vector<double>& breaks() const { return breaks_; }
    double intervalLen(int j) const { return breaks_[j + 1] - breaks_[j]; }
    double repSigma(int idx) const;
    double gaussSigma(int j, int g) const;
    // Quadrature weight of node (j,g) in fraction units; weights of an
    // interval sum to its length.
    double gaussWeight(int j, int g) const;

    // Local basis values/derivatives at the local Gauss nodes: rows are
    // Gauss nodes, columns the ncol+1 interval points. Derivatives are with
    // respect to the local coordinate on [0,1].
    const Mat& basisAtGauss() const { return Lg_; }
    const Mat& basisDerivAtGauss() const { return Lgd_; }

    // Lagrange weights for evaluating at local coordinate s in [0,1].
    Vec lagrange(double s) const;
    Vec lagrangeDeriv(double s) const;

    int findInterval(double sigma) const;

private:
    Mesh(std::vector<double> breaks, int ncol);

    int ntst_ = 0, ncol_ = 0;
    std::vector<double> breaks_;
    std::vector<double> gauss_nodes_, gauss_weights_;  // local, on [0,1]
    std::vector<double> local_points_;                 // i/ncol
    Mat Lg_, Lgd_;
};

// Gauss-Legendre nodes/weights on [0,1].
void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Vector-valued function on the mesh, scaled to actual time by the period:
// tau = period * sigma. Values may be complex.
class MeshFunction {
public:
    MeshFunction() = default;
    MeshFunction(std::shared_ptr<const Mesh> mesh, double period, int n);
    MeshFunction(std::shared_ptr<const Mesh> mesh, double period, CMat values);

    bool valid() const { return mesh_ != nullptr; }
    int n() const { return static_cast<int>(values_.rows()); }
    double period() const { return period_; }
    const std::shared_ptr<const Mesh>& mesh() const { return mesh_; }

    CMat& values() { return values_; }
    const CMat& values() const { return values_; }

    CVec atPoint(int idx) const { return values_.col(idx); }
    CVec atGauss(int j, int g) const;
    CVec derivAtGauss(int j, int g) const;  // d/dtau
    CVec interpolate(double tau) const;
    CVec interpDerivative(double tau) const;

    MeshFunction conjugate() const;
    MeshFunction scaled(Cplx s) const;
    MeshFunction realPart() const;
    // Interpolate onto another mesh (same period).
    MeshFunction remesh(std::shared_ptr<const Mesh> to) const;

    MeshFunction& operator+=(const MeshFunction& o);
    MeshFunction& operator-=(const MeshFunction& o);

private:
    std::shared_ptr<const Mesh> mesh_;
    double period_ = 0.0;
    CMat values_;
};

// Integral over [0,T] of <a,b> = conj(a)^T b by per-interval Gauss
// quadrature; exact for piecewise-polynomial integrands of degree
// <= 2*ncol-1 per interval.
Cplx inner_product(const MeshFunction& a, const MeshFunction& b);
double norm_l2(const MeshFunction& f);

}  // namespace lcnf
