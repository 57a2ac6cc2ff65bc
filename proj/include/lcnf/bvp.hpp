#pragma once

#include <vector>

#include "lcnf/mesh.hpp"
#include "lcnf/types.hpp"

namespace lcnf {

// Discretized linear differential operator
//     h  ->  dh/dtau - A(tau) h + shift h          (adjoint = false)
//     h  ->  dh/dtau + A(tau)^T h + shift h        (adjoint = true)
// on [0,T] with boundary row h(T) - boundary_sign*h(0) = 0.
struct BvpOperator {
    std::shared_ptr<const Mesh> mesh;
    double T = 0.0;
    int n = 0;
    std::vector<Mat> A;  // A(tau) at Gauss nodes, indexed j*ncol+g
    Cplx shift = 0.0;
    bool adjoint = false;
    int boundary_sign = +1;  // +1 periodic, -1 anti-periodic

    int nodeIndex(int j, int g) const { return j * mesh->ncol() + g; }
};

// Integral row  int_0^T <w, h> dtau = target  (conjugation on w).
struct BvpConstraint {
    MeshFunction w;
    Cplx target = 0.0;
};

struct BvpSolution {
    MeshFunction h;
    std::vector<Cplx> border_multipliers;
    double residual_norm = 0.0;        // collocation rows, relative
    double constraint_residual = 0.0;  // max over constraint rows
};

// Square bordered collocation system: #constraints extra rows are balanced
// by #borders extra columns (border functions enter as added unknowns
// multiplying the given functions on the collocation rows). Throws
// NumericallySingular when the bordered matrix condition estimate exceeds
// cond_threshold, ConstraintInconsistent when a constraint row residual
// stays above tolerance.
BvpSolution solve_linear_bvp(const BvpOperator& op, const std::vector<CVec>& rhs_gauss,
                             const std::vector<BvpConstraint>& constraints,
                             const std::vector<MeshFunction>& borders,
                             double cond_threshold = 1e12);

// One-dimensional kernel of a singular operator. If norm_w is non-null the
// kernel vector is fixed by the linear row int<norm_w, h> = norm_target,
// otherwise it is returned with unit L2 norm. Throws
// KernelDimensionMismatch when the operator has no isolated kernel
// direction (relative residual above kernel_tol).
MeshFunction solve_kernel(const BvpOperator& op, const MeshFunction* norm_w,
                          Cplx norm_target, double kernel_tol = 1e-6);

// Residual of the operator applied to h (collocation rows only, relative).
double operator_residual(const BvpOperator& op, const MeshFunction& h,
                         const std::vector<CVec>* rhs_gauss = nullptr);

}  // namespace lcnf
