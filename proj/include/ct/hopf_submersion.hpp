#pragma once

#include <array>
#include <optional>
#include <vector>

#include "ct/sphere_curves.hpp"

namespace ct {

using Vec4 = std::array<double, 4>;

// Horizontal lift of a curve on S^2(4) to S^3(1) under the Hopf map.
struct HopfLift {
    SphereCurve base;  // after the chart pre-rotation, |points| = 1/2
    std::vector<Vec4> lift_points;
    std::vector<double> beta;
    double holonomy_per_cover = 0.0;  // beta gain over one base traverse
    std::optional<int> m_cover;       // smallest closing cover <= 64, if any

    int n() const { return static_cast<int>(lift_points.size()); }
    double grid_step() const { return base.total_length / n(); }
};

struct VerticalTorusMesh {
    int n_s = 0;
    int n_t = 0;
    std::vector<Vec4> vertices;        // row-major, vertices[j*n_t + k]
    std::vector<double> kappa_row;     // base geodesic curvature per s-row
    double step_s = 0.0;
    double step_t = 0.0;
    double twist = 0.0;  // phase advance over the s-extent, 0 mod 2*pi if closed

    const Vec4& at(int j, int k) const { return vertices[j * n_t + k]; }
};

// pi~(z, w) = 1/2 (|z|^2 - |w|^2, 2 conj(z) w) with (z, w) = (p1+ip2, p3+ip4);
// lands on the radius-1/2 sphere
Vec3 hopf_project(const Vec4& p);

HopfLift horizontal_lift(const SphereCurve& curve);

VerticalTorusMesh hopf_torus(const HopfLift& lift, int m_covers, int n_t, bool strict = true);

struct VerticalReport {
    double max_h_defect = 0.0;       // max |H - kappa/2|
    double max_gauss = 0.0;          // max |K_S|
    double max_sphere_defect = 0.0;  // max ||vertex| - 1|
};

VerticalReport verify_vertical_geometry(const VerticalTorusMesh& mesh);

struct BcvReport {
    double max_h_defect = 0.0;         // max |H - kappa/2|
    double max_identity_defect = 0.0;  // max |2R + Ric(eta,eta) - 4a|
};

// Vertical cylinder (x(s), y(s), t) over a base curve given in the
// Bianchi-Cartan-Vranceanu chart g_{a,b}, arc-length sampled in the base
// metric with geodesic curvature kappa(s); derivatives are taken by central
// differences, so checks run over interior samples only.
BcvReport bcv_vertical_check(double a, double b, const std::vector<std::array<double, 2>>& base_xy,
                             const std::vector<double>& kappa, double step_s);

// Centered coordinate circle of radius r, arc-length sampled; its base
// geodesic curvature is 1/r - a*r.
std::vector<std::array<double, 2>> bcv_circle(double a, double r, int n_samples);

}  // namespace ct
