#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lcnf/normalform.hpp"
#include "lcnf/types.hpp"

namespace lcnf {

// Coefficient combinations that select the local bifurcation diagram.
struct UnfoldingQuantities {
    BifKind kind = BifKind::LPNS;
    // LPNS
    std::optional<int> s;
    std::optional<double> E;
    // shared: theta for LPNS is Re(b110)/a200, for the Hopf-Hopf pair it is
    // p12/p22 with delta = p21/p11
    std::optional<double> theta, delta;
    std::optional<double> p11, p12, p21, p22;
    std::optional<double> s1, s2, Theta, Delta;
    std::optional<int> sign_l1;
};

UnfoldingQuantities derive_unfolding(const NormalFormReport& report);

struct InvariantSet {
    std::string object;     // "cycle", "doubled-cycle", "T2", "doubled-T2", "T3", "T4"
    std::string stability;  // "stable", "unstable", "unknown"
};

struct ScenarioVerdict {
    std::string case_label;  // LPNS: a..d; PDNS/NSNS: "simple-III" etc.
    bool swapped = false;    // theta/delta roles reversed
    std::vector<InvariantSet> torus_inventory;
};

ScenarioVerdict classify_lpns(const UnfoldingQuantities& q);
ScenarioVerdict classify_hopfhopf(const UnfoldingQuantities& q, BifKind kind);
ScenarioVerdict classify(const UnfoldingQuantities& q);

// Sign of the first Lyapunov coefficient of the Neimark-Sacker bifurcation
// in the truncated amplitude system: -sign(theta*(theta*(theta-1)*Delta +
// delta*(delta-1)*Theta)). Throws BoundaryDegenerate at zero.
int sign_l1(double theta, double delta, double Theta, double Delta);

// Quadratic approximations of the Hopf and heteroclinic curves of the
// rescaled Hopf-Hopf amplitude system; both share the linear coefficient.
struct CurveAsymptotics {
    double linear_coeff;
    double hopf_quadratic;
    double het_quadratic;
    int l1_sign;
};
CurveAsymptotics hh_curve_asymptotics(double theta, double delta, double Theta,
                                      double Delta);

// Equilibria of the truncated planar amplitude system with stability labels.
struct AmplitudeEquilibrium {
    double r1, r2;
    std::string type;  // "origin", "axis1", "axis2", "interior"
    Cplx eig1, eig2;
    bool stable;
};

// LPNS amplitude system xi' = beta1 + xi^2 + s*rho^2,
// rho' = rho(beta2 + theta*xi + xi^2); r1 plays xi (may be negative).
std::vector<AmplitudeEquilibrium> amplitude_portrait_lpns(int s, double theta,
                                                          double beta1, double beta2);
// Hopf-Hopf amplitude system r_i' = r_i(mu_i + p_i1 r1^2 + p_i2 r2^2 + ...).
std::vector<AmplitudeEquilibrium> amplitude_portrait_hh(const UnfoldingQuantities& q,
                                                        double mu1, double mu2);

}  // namespace lcnf
