#include "ct/sphere_curves.hpp"

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "ct/ode.hpp"

namespace ct {

namespace {

// frame + (kappa, kappa_s) carried jointly so numerically solved profiles
// stay self-consistent with the frame integration
using State = Eigen::Matrix<double, 11, 1>;

struct FrameSystem {
    const CurvatureProfile* profile;
    double rho;

    double kappa_at(double s, const State& y) const {
        if (profile->analytic) return profile->analytic(s)[0];
        return y[9];
    }

    State operator()(double s, const State& y) const {
        const double k = kappa_at(s, y);
        State dy;
        // gamma' = T
        dy[0] = y[3];
        dy[1] = y[4];
        dy[2] = y[5];
        // T' = kappa N - rho gamma
        dy[3] = k * y[6] - rho * y[0];
        dy[4] = k * y[7] - rho * y[1];
        dy[5] = k * y[8] - rho * y[2];
        // N' = -kappa T
        dy[6] = -k * y[3];
        dy[7] = -k * y[4];
        dy[8] = -k * y[5];
        if (profile->analytic) {
            dy[9] = 0.0;
            dy[10] = 0.0;
        } else {
            dy[9] = y[10];
            dy[10] = el_kappa_ss(profile->spec, rho, y[9], y[10]);
        }
        return dy;
    }
};

double renormalize(State& y, double rho) {
    Eigen::Vector3d t = y.segment<3>(3);
    if (rho == 0.0) {
        // planar frame: gamma free in {z = 0}, N = e_z x T
        const double drift = std::max(std::abs(t.norm() - 1.0), std::abs(y[2]));
        y[2] = 0.0;
        t[2] = 0.0;
        t.normalize();
        y.segment<3>(3) = t;
        y.segment<3>(6) = Eigen::Vector3d(-t[1], t[0], 0.0);
        return drift;
    }
    Eigen::Vector3d g = y.segment<3>(0);
    const double r = 1.0 / std::sqrt(rho);
    const double drift = std::max(std::abs(g.norm() - r), std::abs(t.norm() - 1.0));
    g *= r / g.norm();
    t -= (t.dot(g) / g.squaredNorm()) * g;
    t.normalize();
    const Eigen::Vector3d n = std::sqrt(rho) * g.cross(t);
    y.segment<3>(0) = g;
    y.segment<3>(3) = t;
    y.segment<3>(6) = n;
    return drift;
}

State initial_state(const CurvatureProfile& profile, double rho) {
    State y = State::Zero();
    if (rho > 0.0) {
        y[0] = 1.0 / std::sqrt(rho);
        y[8] = 1.0;  // N = sqrt(rho) gamma x T = e3
    } else {
        y[6] = -1.0;  // planar: gamma at origin, N = e_z x T
    }
    y[4] = 1.0;
    y[9] = profile.kappa.empty() ? 0.0 : profile.kappa[0];
    y[10] = profile.kappa_s.empty() ? 0.0 : profile.kappa_s[0];
    return y;
}

constexpr int kSubsteps = 8;

// advance one grid interval of width h with substeps and constraint projection
void advance(State& y, double s, double h, const FrameSystem& sys) {
    const double hs = h / kSubsteps;
    for (int k = 0; k < kSubsteps; ++k) {
        y = dopri5_step(sys, s + k * hs, y, hs);
        if (renormalize(y, sys.rho) > 1e-6)
            throw IntegrationDiverged("reconstruct: frame drift exceeded 1e-6");
    }
}

Eigen::Matrix3d frame_of(const State& y) {
    Eigen::Matrix3d F;
    F.col(0) = y.segment<3>(0).normalized();
    F.col(1) = y.segment<3>(3);
    F.col(2) = y.segment<3>(6);
    return F;
}

}  // namespace

SphereCurve reconstruct(const CurvatureProfile& profile, double rho, int m_periods,
                        int samples_per_period) {
    if (rho < 0.0) throw ParameterError("reconstruct: rho must be non-negative");
    if (m_periods < 1) throw ParameterError("reconstruct: m_periods must be >= 1");
    const int spp = samples_per_period > 0 ? samples_per_period : profile.n();
    if (!profile.analytic && spp != profile.n())
        throw ParameterError("reconstruct: resampling a numeric profile is not supported");

    const double h = profile.period / spp;
    const int total = spp * m_periods;
    const FrameSystem sys{&profile, rho};

    SphereCurve c;
    c.rho = rho;
    c.total_length = profile.period * m_periods;
    c.points.reserve(total);
    c.tangents.reserve(total);
    c.normals.reserve(total);
    c.kappa.reserve(total);

    State y = initial_state(profile, rho);
    for (int j = 0; j < total; ++j) {
        const double s = j * h;
        c.points.push_back({y[0], y[1], y[2]});
        c.tangents.push_back({y[3], y[4], y[5]});
        c.normals.push_back({y[6], y[7], y[8]});
        if (profile.analytic)
            c.kappa.push_back(profile.analytic(std::fmod(s, profile.period))[0]);
        else
            c.kappa.push_back(profile.kappa[j % profile.n()]);
        advance(y, s, h, sys);
    }
    const Vec3 end{y[0], y[1], y[2]};
    const Vec3& start = c.points.front();
    c.closure_gap = norm({end[0] - start[0], end[1] - start[1], end[2] - start[2]});
    return c;
}

ProgressionReport progression_angle(const CurvatureProfile& profile, double rho) {
    if (rho <= 0.0) throw ParameterError("progression_angle: rho must be positive");
    const int spp = std::max(profile.n(), 256);
    const int use = profile.analytic ? spp : profile.n();
    const double h = profile.period / use;
    const FrameSystem sys{&profile, rho};

    State y = initial_state(profile, rho);
    const Eigen::Matrix3d F0 = frame_of(y);
    Eigen::Vector3d momentum = Eigen::Vector3d::Zero();
    for (int j = 0; j < use; ++j) {
        momentum += y.segment<3>(0).cross(y.segment<3>(3));
        advance(y, j * h, h, sys);
    }
    momentum /= use;
    const Eigen::Matrix3d R = frame_of(y) * F0.transpose();

    if ((R - Eigen::Matrix3d::Identity()).norm() < 1e-9) {
        // circles close in one period: a full turn about the polar axis
        if (profile.constant) {
            momentum.normalize();
            return ProgressionReport{2.0 * M_PI, {momentum[0], momentum[1], momentum[2]}};
        }
        throw DegenerateRotation("progression_angle: frame map is the identity");
    }

    Eigen::AngleAxisd aa(R);
    double angle = aa.angle();
    Eigen::Vector3d axis = aa.axis();
    // orient the axis along the curve's mean angular momentum so the angle is
    // measured consistently in (0, 2*pi)
    if (axis.dot(momentum) < 0.0) {
        axis = -axis;
        angle = 2.0 * M_PI - angle;
    }
    ProgressionReport rep;
    rep.angle = angle;
    rep.axis = {axis[0], axis[1], axis[2]};
    return rep;
}

ClosureResult closure_search(const EnergySpec& spec, double rho, int m, int n,
                             std::pair<double, double> d_bracket) {
    if (m < 1 || n < 1 || std::gcd(m, n) != 1)
        throw ParameterError("closure_search: need coprime positive (m, n)");
    ClosureResult out;
    out.constraint_warning = !(m < 2 * n && 2 * n < std::sqrt(2.0) * m);

    const double target = 2.0 * M_PI * n / m;
    const int prof_n = 1024;
    auto lambda_of = [&](double d) {
        return progression_angle(make_profile(spec, rho, d, prof_n), rho).angle - target;
    };

    double a = d_bracket.first, b = d_bracket.second;
    double fa = lambda_of(a), fb = lambda_of(b);
    if (fa == 0.0) b = a;
    if (fa * fb > 0.0)
        throw NoRoot("closure_search: bracket does not straddle 2*pi*n/m");

    // bisection with a secant proposal when it stays inside the bracket
    double d_star = a, f_star = fa;
    for (int it = 0; it < 200 && std::abs(f_star) > 1e-10; ++it) {
        double mid = 0.5 * (a + b);
        if (fb != fa) {
            const double sec = a - fa * (b - a) / (fb - fa);
            if (sec > std::min(a, b) && sec < std::max(a, b)) mid = sec;
        }
        const double fm = lambda_of(mid);
        if (std::abs(fm) < std::abs(f_star)) {
            d_star = mid;
            f_star = fm;
        }
        if (fa * fm <= 0.0) {
            b = mid;
            fb = fm;
        } else {
            a = mid;
            fa = fm;
        }
        if (std::abs(b - a) < 1e-15 * (1.0 + std::abs(a))) break;
    }
    if (std::abs(f_star) > 1e-10)
        throw NoRoot("closure_search: progression angle did not converge to target");

    out.d_star = d_star;
    out.curve = reconstruct(make_profile(spec, rho, d_star, prof_n), rho, m);
    out.curve.lobes = m;
    out.curve.windings = n;
    return out;
}

CurveStats curve_stats(const SphereCurve& curve, const EnergySpec& spec) {
    if (curve.closure_gap > 1e-5)
        throw NotClosed("curve_stats: curve is not closed to tolerance");
    CurveStats st;
    st.closure_gap = curve.closure_gap;
    st.length = curve.total_length;

    const double h = curve.grid_step();
    double energy = 0.0, total_kappa = 0.0;
    for (double k : curve.kappa) {
        energy += eval_energy(spec, k).P;
        total_kappa += k;
    }
    st.energy = energy * h;

    const int r_index = curve.windings > 0 ? curve.windings : 1;
    st.area = (2.0 * M_PI * r_index - total_kappa * h) / curve.rho;

    // independent oracle: fan of signed spherical-triangle excesses about the
    // mean angular-momentum pole, on the unit sphere, scaled by 1/rho
    Eigen::Vector3d pole = Eigen::Vector3d::Zero();
    for (int j = 0; j < curve.n(); ++j) {
        const Vec3 l = cross(curve.points[j], curve.tangents[j]);
        pole += Eigen::Vector3d(l[0], l[1], l[2]);
    }
    pole.normalize();
    const double sr = std::sqrt(curve.rho);
    double excess = 0.0;
    for (int j = 0; j < curve.n(); ++j) {
        const Vec3& p = curve.points[j];
        const Vec3& q = curve.points[(j + 1) % curve.n()];
        const Eigen::Vector3d b(sr * p[0], sr * p[1], sr * p[2]);
        const Eigen::Vector3d c(sr * q[0], sr * q[1], sr * q[2]);
        excess += 2.0 * std::atan2(pole.dot(b.cross(c)),
                                   1.0 + pole.dot(b) + b.dot(c) + c.dot(pole));
    }
    st.area_excess = excess / curve.rho;
    return st;
}

void write_curve(const SphereCurve& curve, std::ostream& os) {
    os.precision(17);
    os << "# rho=" << curve.rho << " length=" << curve.total_length
       << " m=" << curve.lobes << " n=" << curve.windings
       << " closure_gap=" << curve.closure_gap << "\n";
    os << "# s x y z kappa\n";
    const double h = curve.grid_step();
    for (int j = 0; j < curve.n(); ++j)
        os << j * h << " " << curve.points[j][0] << " " << curve.points[j][1] << " "
           << curve.points[j][2] << " " << curve.kappa[j] << "\n";
}

}  // namespace ct
