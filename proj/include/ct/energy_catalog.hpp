#ifndef CT_ENERGY_CATALOG_HPP
#define CT_ENERGY_CATALOG_HPP

#include <functional>
#include <iosfwd>
#include <string>

#include "ct/errors.hpp"

namespace ct {

// Catalog of curvature Lagrangians P(kappa). All derivatives are closed
// forms; nothing here is ever finite-differenced.
enum class EnergyKind {
    Bending,            // P = kappa^2 + lambda
    ExtendedBlaschke,   // P = sqrt(kappa - lambda),      kappa > lambda
    TotalCurvatureType, // P = sqrt(eps*(kappa^2+lambda)), eps*(kappa^2+lambda) > 0
    Astigmatism,        // P = kappa * exp(lambda/kappa),  kappa > 0, lambda != 0
    Exponential,        // P = exp(lambda*kappa)
    QElastic            // P = (kappa - lambda)^q,         kappa > lambda, q not in {0,1}
};

std::string to_string(EnergyKind kind);
EnergyKind energy_kind_from_string(const std::string& name);

struct EnergyEval {
    double P = 0.0;
    double dP = 0.0;   // dP/dkappa
    double ddP = 0.0;  // d2P/dkappa2
    double dddP = 0.0; // d3P/dkappa3
};

struct EnergySpec {
    EnergyKind kind = EnergyKind::Bending;
    double lambda = 0.0;
    double q = 0.0;       // QElastic only
    int epsilon = +1;     // TotalCurvatureType only, sign of kappa^2+lambda
    double scale = 1.0;   // multiplicative constant, 1 at the canonical form

    // Open interval on which P is real, finite and smooth. For Bending and
    // Exponential this is the whole line; dP = 0 points inside it are legal
    // for evaluation and are guarded only where P/dP is actually formed.
    double domain_lo() const;
    double domain_hi() const;
    bool in_domain(double kappa) const;

    static EnergySpec bending(double lambda = 0.0);
    static EnergySpec extended_blaschke(double lambda = 0.0);
    static EnergySpec total_curvature(double lambda, int epsilon = +1);
    static EnergySpec astigmatism(double lambda);
    static EnergySpec exponential(double lambda);
    static EnergySpec q_elastic(double lambda, double q);
};

// P and its first three kappa-derivatives at a single point.
// Throws DomainError outside spec's domain.
EnergyEval eval_energy(const EnergySpec& spec, double kappa);

// P(kappa)/dP(kappa); throws DomainError outside the domain and
// DomainError when dP vanishes at kappa.
double p_over_dp(const EnergySpec& spec, double kappa);

// Weingarten relations generated by the catalog (those the construction integrates
// back to an energy).
struct WeingartenRelation {
    enum class Kind { Linear, ConstantGauss, ConstantAstigmatism, ConstantSkew };
    Kind kind = Kind::Linear;
    double a = 0.0;   // Linear: kappa1 = a*kappa2 + b (a != 0)
    double b = 0.0;   // Linear / ConstantSkew: kappa1 - kappa2 = b
    double K_o = 0.0; // ConstantGauss
    double c = 0.0;   // ConstantAstigmatism: 1/kappa1 - 1/kappa2 = c, c != 0
    double ambient_rho = 0.0;

    static WeingartenRelation linear(double a, double b, double rho = 0.0);
    static WeingartenRelation constant_gauss(double K_o, double rho);
    static WeingartenRelation constant_astigmatism(double c, double rho = 0.0);
    static WeingartenRelation constant_skew(double b, double rho = 0.0);
};

// The energy whose critical curves generate binormal-evolution tori
// satisfying the relation; normalized to unit multiplicative constant.
EnergySpec energy_from_weingarten(const WeingartenRelation& rel);

// Residual evaluator kappa1 - kappa2 + P(kappa)/dP(kappa) with kappa = -kappa1.
// Vanishes exactly on the Weingarten locus of spec.
std::function<double(double kappa1, double kappa2)> weingarten_of(const EnergySpec& spec);

// Plain-text key=value serialization ("kind=extended_blaschke" etc).
std::string serialize(const EnergySpec& spec);
EnergySpec parse_energy_spec(std::istream& in);

} // namespace ct

#endif
