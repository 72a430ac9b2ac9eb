#pragma once

#include <array>
#include <cmath>
#include <ostream>
#include <utility>
#include <vector>

#include "ct/critical_profiles.hpp"
#include "ct/errors.hpp"

namespace ct {

using Vec3 = std::array<double, 3>;

// Arc-length sampled curve on the round sphere S^2(rho) of radius 1/sqrt(rho).
struct SphereCurve {
    double rho = 1.0;
    std::vector<Vec3> points;
    std::vector<Vec3> tangents;
    std::vector<Vec3> normals;
    std::vector<double> kappa;
    double total_length = 0.0;
    int lobes = 0;     // m
    int windings = 0;  // n
    double closure_gap = 0.0;

    int n() const { return static_cast<int>(points.size()); }
    double grid_step() const { return total_length / n(); }
};

// Integrates gamma' = T, T' = kappa N - rho gamma, N' = -kappa T from the
// canonical frame gamma(0) = (1/sqrt(rho),0,0), T(0) = (0,1,0) over m_periods
// curvature periods.  samples_per_period <= 0 means reuse the profile grid.
SphereCurve reconstruct(const CurvatureProfile& profile, double rho, int m_periods,
                        int samples_per_period = 0);

struct ProgressionReport {
    double angle = 0.0;  // Lambda in (0, 2*pi)
    Vec3 axis{0.0, 0.0, 1.0};
};

// Rotation of R^3 carrying the initial frame to the frame after one curvature
// period; its angle Lambda satisfies m*Lambda = 2*pi*n at closure.
ProgressionReport progression_angle(const CurvatureProfile& profile, double rho);

struct ClosureResult {
    double d_star = 0.0;
    SphereCurve curve;
    bool constraint_warning = false;  // (m, n) outside m < 2n < sqrt(2) m
};

ClosureResult closure_search(const EnergySpec& spec, double rho, int m, int n,
                             std::pair<double, double> d_bracket);

struct CurveStats {
    double length = 0.0;
    double energy = 0.0;
    double area = 0.0;
    double area_excess = 0.0;  // independent spherical-polygon oracle
    double closure_gap = 0.0;
};

CurveStats curve_stats(const SphereCurve& curve, const EnergySpec& spec);

void write_curve(const SphereCurve& curve, std::ostream& os);

// small vector helpers shared by the lift / evolution modules
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

}  // namespace ct
