#ifndef CT_CRITICAL_PROFILES_HPP
#define CT_CRITICAL_PROFILES_HPP

#include <array>
#include <functional>
#include <iosfwd>
#include <vector>

#include "ct/energy_catalog.hpp"

namespace ct {

// One period of a critical curvature function kappa(s) on a uniform
// arc-length grid over [0, L).
struct CurvatureProfile {
    EnergySpec spec;
    double rho = 0.0;    // Gaussian curvature of the base surface
    double d = 0.0;      // first-integral constant
    double period = 0.0; // L
    bool closed_form = false;
    bool constant = false;

    std::vector<double> kappa;   // kappa(s_j), s_j = j*L/n
    std::vector<double> kappa_s; // dkappa/ds at s_j

    // (kappa, kappa_s, kappa_ss) at arbitrary s; present for closed-form and
    // constant profiles, null for numerically solved ones.
    std::function<std::array<double, 3>(double s)> analytic;

    int n() const { return static_cast<int>(kappa.size()); }
    double grid_step() const { return period / static_cast<double>(n()); }
};

// Extended Blaschke closed form on B(rho), P = sqrt(kappa - lambda).
// When the oscillation amplitude degenerates (4d^2+4lambda*d-rho = 0) and
// allow_constant is set, returns the constant profile instead of throwing.
CurvatureProfile blaschke_profile(double rho, double lambda, double d, int n_samples,
                                  bool allow_constant = false);

// Total-curvature-type closed form, signed smooth branch kappa ~ sin.
CurvatureProfile total_curvature_profile(double rho, double lambda, double d, int epsilon,
                                         int n_samples);

// Constant-curvature profile (valid for EL checks, excluded from tori).
CurvatureProfile constant_profile(const EnergySpec& spec, double kappa0, double rho,
                                  double period, int n_samples);

// Generic construction from the first integral
//   dP_s^2 + (kappa*dP - P)^2 + rho*dP^2 = d,
// integrating between consecutive turning points of the level set.
CurvatureProfile solve_profile(const EnergySpec& spec, double rho, double d, int n_samples);

// Dispatch: closed form when the catalog has one for spec, else solve_profile.
CurvatureProfile make_profile(const EnergySpec& spec, double rho, double d, int n_samples);

// The "potential" part of the first integral, g(kappa) = (kappa*dP-P)^2 + rho*dP^2.
double profile_potential(const EnergySpec& spec, double rho, double kappa);

// Value of the first integral at a sample.
double first_integral_value(const EnergySpec& spec, double rho, double kappa, double kappa_s);

// kappa_ss from the Euler-Lagrange equation (regular wherever ddP != 0).
double el_kappa_ss(const EnergySpec& spec, double rho, double kappa, double kappa_s);

// max |dP_ss + dP(kappa^2+rho) - kappa*P| over the samples.
// force_spectral re-derives kappa_ss from the grid even for closed forms
// (used by convergence-order tests).
double el_residual(const CurvatureProfile& profile, bool force_spectral = false);

struct FirstIntegralReport {
    double d_est = 0.0;
    double deviation = 0.0;
};
FirstIntegralReport first_integral_check(const CurvatureProfile& profile);

// Columnar text "s kappa kappa_s" with a #-header carrying provenance.
void write_profile(const CurvatureProfile& profile, std::ostream& out);

} // namespace ct

#endif
