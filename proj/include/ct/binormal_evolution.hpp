#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ct/hopf_submersion.hpp"

namespace ct {

// Killing field of the ambient 3-space form extending I = dP(kappa) B along
// the embedded profile curve.
struct KillingMotion {
    double ambient_rho = 0.0;
    Eigen::Matrix4d generator = Eigen::Matrix4d::Zero();  // skew, rho > 0
    Eigen::Vector3d omega = Eigen::Vector3d::Zero();      // rho = 0 screw pair
    Eigen::Vector3d trans = Eigen::Vector3d::Zero();
    double fit_residual = 0.0;
    double rate = 0.0;          // dominant rotation rate
    double orbit_period = 0.0;  // 2*pi / rate
};

// Profile curve embedded in the equator {x4 = 0} of S^3(rho) (or the plane
// {z = 0} of R^3 for rho = 0), with the binormal B = e4 (e3 for rho = 0).
struct EmbeddedCurve {
    double rho = 0.0;
    std::vector<Vec4> points;
    std::vector<double> kappa;
    std::vector<double> dP;  // dP(kappa(s)), the prescribed velocity along B
    double step = 0.0;
    bool closed = false;
};

struct EvolutionTorusMesh {
    double rho = 0.0;
    int n_s = 0, n_t = 0;
    std::vector<Vec4> vertices;    // row-major; [3] = 0 when rho = 0
    std::vector<double> G;         // signed velocity <y_t, B> at t = 0, per s
    std::vector<double> kappa_row;
    double step_s = 0.0, step_t = 0.0;
    bool closed_s = false;

    const Vec4& at(int j, int k) const { return vertices[static_cast<size_t>(j) * n_t + k]; }
};

// spec and rho are passed separately so a deliberately wrong energy can be
// used as a negative control (the fit then fails with PoorFit)
std::pair<EmbeddedCurve, KillingMotion> embed_and_fit(const SphereCurve& curve,
                                                      const CurvatureProfile& profile,
                                                      const EnergySpec& spec, double rho);

EvolutionTorusMesh evolve(const EmbeddedCurve& embedded, const KillingMotion& motion,
                          const CurvatureProfile& profile, int n_t);

struct CurvatureReport {
    std::vector<double> kappa1, kappa2, H, K;  // numeric per-vertex fields
    double max_k1_defect = 0.0;  // vs analytic kappa1 = -kappa
    double max_k2_defect = 0.0;  // vs analytic kappa2 = P/dP - kappa
    double max_gauss_defect = 0.0;  // |K - (kappa1*kappa2 + rho)|
    int masked = 0;  // vertices skipped near kappa = 0 or dP = 0 pinches
};

CurvatureReport surface_curvatures(const EvolutionTorusMesh& mesh, const CurvatureProfile& profile);

// max |kappa1 - kappa2 + P/dP| with kappa1 = -kappa and kappa2 from the
// independent h22 form (1/kappa)(dP_ss/dP + rho); zero exactly on critical
// profiles
double weingarten_residual(const CurvatureProfile& profile);

struct RecoveredEnergy {
    std::vector<double> kappa;  // monotone branch samples
    std::vector<double> P;      // recovered energy density on the branch
    EnergySpec spec;            // best catalog match, scale fitted
    double lambda_shift = 0.0;  // the recovered spec's lambda
    double rel_residual = 0.0;  // max |P - fit| / max |P|
};

RecoveredEnergy recover_energy(const EvolutionTorusMesh& mesh);

}  // namespace ct
