#pragma once

#include <array>
#include <map>

#include "lcnf/bvp.hpp"
#include "lcnf/locator.hpp"
#include "lcnf/models.hpp"

namespace lcnf {

// Critical eigenfunctions and adjoint eigenfunctions on the cycle. For LPNS
// v1 is the real generalized eigenfunction of the fold; for PDNS it is the
// real anti-periodic eigenfunction of -1; for NSNS both v1 and v2 are
// complex with frequencies omega1 > omega2.
struct EigenfunctionBundle {
    BifKind kind = BifKind::LPNS;
    double omega1 = 0.0, omega2 = 0.0;
    MeshFunction v1, v2, phi_star, v1_star, v2_star;
    std::map<std::string, double> residuals;
};

// Index of a center-manifold expansion function: (i,j,k,0) for the
// three-index LPNS/PDNS families, (i,j,k,l) for NSNS.
using HIndex = std::array<int, 4>;

struct CenterManifoldTerms {
    std::map<HIndex, MeshFunction> h;
    std::map<std::string, double> border_multipliers;
};

struct NormalFormReport {
    BifKind kind = BifKind::LPNS;
    int order = 2;
    std::map<std::string, Cplx> coefficients;
    std::map<std::string, double> diagnostics;

    Cplx coef(const std::string& name) const;
    bool has(const std::string& name) const { return coefficients.count(name) != 0; }
};

struct NfOptions {
    double phase_rotation1 = 0.0;  // extra phase on v1 (NSNS gauge test)
    double phase_rotation2 = 0.0;  // extra phase on v2 (gauge test)
    double kernel_tol = 1e-6;
    double cond_threshold = 1e12;
    CenterManifoldTerms* capture_h = nullptr;  // optional tap on the h solves
};

EigenfunctionBundle build_eigenbundle(const OdeSystem& sys, const Codim2Point& point,
                                      const NfOptions& opts = {});

// order: LPNS 2 or 3; PDNS/NSNS 3 or 5.
NormalFormReport lpns_coefficients(const OdeSystem& sys, const Codim2Point& point,
                                   const EigenfunctionBundle& bundle, int order,
                                   const NfOptions& opts = {});
NormalFormReport pdns_coefficients(const OdeSystem& sys, const Codim2Point& point,
                                   const EigenfunctionBundle& bundle, int order,
                                   const NfOptions& opts = {});
NormalFormReport nsns_coefficients(const OdeSystem& sys, const Codim2Point& point,
                                   const EigenfunctionBundle& bundle, int order,
                                   const NfOptions& opts = {});

// Kind dispatch; high_order selects 3 (LPNS) or 5 (PDNS/NSNS).
NormalFormReport normal_form(const OdeSystem& sys, const Codim2Point& point,
                             bool high_order, const NfOptions& opts = {});

// Solves the requested center-manifold functions in the given order; each
// BVP may reference only previously solved (or conjugate) functions, else
// DependencyMissing is thrown.
CenterManifoldTerms solve_center_manifold_terms(const OdeSystem& sys,
                                                const Codim2Point& point,
                                                const EigenfunctionBundle& bundle,
                                                const std::vector<HIndex>& needed,
                                                const NfOptions& opts = {});

}  // namespace lcnf
