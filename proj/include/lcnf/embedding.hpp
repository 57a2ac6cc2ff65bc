#pragma once

#include <map>

#include "lcnf/models.hpp"
#include "lcnf/types.hpp"

namespace lcnf {

// Synthetic test systems: a polynomial vector field whose flow, restricted
// to a flat invariant manifold around the unit circle, is exactly the
// periodic normal form of the chosen bifurcation with the planted
// coefficients. The circle is traversed with period 2*pi; critical
// multipliers are exact by construction, so the planted coefficients act
// as ground truth for the whole coefficient pipeline.
struct EmbeddingSpec {
    BifKind kind = BifKind::LPNS;
    // Keys use the normal-form coefficient names (a200, b110, alpha011, ...,
    // a2100, b0021, ...). Missing keys default to zero.
    std::map<std::string, Cplx> coeffs;
    double theta1 = 2.2;   // NS angle(s), in (0, pi), non-resonant
    double theta2 = 1.0;   // second NS angle (NSNS only), theta1 > theta2
    double decay = 6.0;    // rate of the appended stable directions
    int n_stable = 2;

    double period() const { return 2.0 * M_PI; }
};

OdeSystem build_embedding(const EmbeddingSpec& spec);

// Registry factories with all planted coefficients exposed as parameters.
OdeSystem make_nf_embed(BifKind kind);

// Exact cycle profile of an embedding at time tau (unit circle, zeros).
Vec embedding_cycle_state(const EmbeddingSpec& spec, double tau);

}  // namespace lcnf
