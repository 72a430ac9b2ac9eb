#ifndef CT_ERRORS_HPP
#define CT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ct {

// Error hierarchy shared by all modules. Every failure mode carries a
// human-readable message naming the offending quantity.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DomainError : Error { using Error::Error; };            // kappa outside the energy's domain
struct ParameterError : Error { using Error::Error; };         // constructor precondition violated
struct SingularDenominator : Error { using Error::Error; };
struct NoOscillation : Error { using Error::Error; };
struct QuadratureFailure : Error { using Error::Error; };
struct UnsupportedRelation : Error { using Error::Error; };
struct IntegrationDiverged : Error { using Error::Error; };
struct DegenerateRotation : Error { using Error::Error; };
struct NoRoot : Error { using Error::Error; };
struct NotClosed : Error { using Error::Error; };
struct OffSphere : Error { using Error::Error; };
struct ChartSingularity : Error { using Error::Error; };
struct NotClosedLift : Error { using Error::Error; };
struct ChartExit : Error { using Error::Error; };
struct PoorFit : Error { using Error::Error; };
struct NonPeriodicOrbit : Error { using Error::Error; };
struct IsoparametricInput : Error { using Error::Error; };
struct BranchTooShort : Error { using Error::Error; };
struct CurvatureZeroCrossing : Error { using Error::Error; };
struct AtPole : Error { using Error::Error; };
struct DegenerateCell : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

} // namespace ct

#endif
