#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace lcnf {

using Cplx = std::complex<double>;
using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;

inline constexpr Cplx kI{0.0, 1.0};

struct LcnfError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class BifKind { LPNS, PDNS, NSNS };

inline const char* to_string(BifKind k) {
    switch (k) {
        case BifKind::LPNS: return "LPNS";
        case BifKind::PDNS: return "PDNS";
        default: return "NSNS";
    }
}

inline BifKind bif_kind_from_string(const std::string& s) {
    if (s == "LPNS" || s == "lpns") return BifKind::LPNS;
    if (s == "PDNS" || s == "pdns") return BifKind::PDNS;
    if (s == "NSNS" || s == "nsns") return BifKind::NSNS;
    throw LcnfError("unknown bifurcation kind '" + s + "'");
}

struct ModelError : LcnfError {
    using LcnfError::LcnfError;
};
struct NumericallySingular : LcnfError {
    using LcnfError::LcnfError;
};
struct ConstraintInconsistent : LcnfError {
    using LcnfError::LcnfError;
};
struct KernelDimensionMismatch : LcnfError {
    using LcnfError::LcnfError;
};
struct NoConvergence : LcnfError {
    using LcnfError::LcnfError;
};
struct PeriodCollapse : LcnfError {
    using LcnfError::LcnfError;
};
struct ResonanceGuardTripped : LcnfError {
    using LcnfError::LcnfError;
};
struct AmbiguousPairing : LcnfError {
    using LcnfError::LcnfError;
};
struct NormalizationDegenerate : LcnfError {
    using LcnfError::LcnfError;
};
struct DependencyMissing : LcnfError {
    using LcnfError::LcnfError;
};
struct MissingHigherOrder : LcnfError {
    using LcnfError::LcnfError;
};
struct BoundaryDegenerate : LcnfError {
    using LcnfError::LcnfError;
};
struct DomainViolation : LcnfError {
    using LcnfError::LcnfError;
};
struct Divergence : LcnfError {
    using LcnfError::LcnfError;
};
struct CriticalityCheckFailed : LcnfError {
    using LcnfError::LcnfError;
};
struct InvalidCoefficients : LcnfError {
    using LcnfError::LcnfError;
};

}  // namespace lcnf
