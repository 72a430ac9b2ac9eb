#include "ct/hopf_submersion.hpp"

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <cmath>

#include "ct/fourier.hpp"

namespace ct {

namespace {

constexpr double kChartEps = 1e-3;

// 4th-order periodic central differences
double d1(const std::vector<double>& f, int j, double h) {
    const int n = static_cast<int>(f.size());
    auto at = [&](int i) { return f[((i % n) + n) % n]; };
    return (-at(j + 2) + 8.0 * at(j + 1) - 8.0 * at(j - 1) + at(j - 2)) / (12.0 * h);
}

Eigen::Vector4d evec(const Vec4& p) { return Eigen::Vector4d(p[0], p[1], p[2], p[3]); }

}  // namespace

Vec3 hopf_project(const Vec4& p) {
    const double n2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3];
    if (std::abs(std::sqrt(n2) - 1.0) > 1e-6)
        throw OffSphere("hopf_project: point is not on the unit 3-sphere");
    return {0.5 * (p[0] * p[0] + p[1] * p[1] - p[2] * p[2] - p[3] * p[3]),
            p[0] * p[2] + p[1] * p[3], p[0] * p[3] - p[1] * p[2]};
}

HopfLift horizontal_lift(const SphereCurve& curve) {
    if (std::abs(curve.rho - 4.0) > 1e-12)
        throw ParameterError("horizontal_lift: base curve must live on S^2(4)");
    if (curve.closure_gap > 1e-5)
        throw NotClosed("horizontal_lift: base curve must be closed");
    const int n = curve.n();

    // chart pre-rotation: send the mean angular-momentum axis to +x so the
    // curve winds about the chart pole and stays clear of A1 = -1/2
    Eigen::Vector3d momentum = Eigen::Vector3d::Zero();
    for (int j = 0; j < n; ++j) {
        const Vec3 l = cross(curve.points[j], curve.tangents[j]);
        momentum += Eigen::Vector3d(l[0], l[1], l[2]);
    }
    momentum.normalize();
    const Eigen::Matrix3d R =
        Eigen::Quaterniond::FromTwoVectors(momentum, Eigen::Vector3d::UnitX()).toRotationMatrix();

    HopfLift lift;
    lift.base = curve;
    for (int j = 0; j < n; ++j) {
        const Eigen::Vector3d p = R * Eigen::Vector3d(curve.points[j].data());
        const Eigen::Vector3d t = R * Eigen::Vector3d(curve.tangents[j].data());
        const Eigen::Vector3d nn = R * Eigen::Vector3d(curve.normals[j].data());
        lift.base.points[j] = {p[0], p[1], p[2]};
        lift.base.tangents[j] = {t[0], t[1], t[2]};
        lift.base.normals[j] = {nn[0], nn[1], nn[2]};
        if (p[0] + 0.5 < kChartEps)
            throw ChartSingularity("horizontal_lift: A1 + 1/2 below chart tolerance");
    }

    // beta' = (A3 A2' - A2 A3') / (A1 + 1/2); the + branch keeps the lift
    // horizontal against the vertical field (iz, iw)
    std::vector<double> integrand(n);
    for (int j = 0; j < n; ++j) {
        const Vec3& a = lift.base.points[j];
        const Vec3& t = lift.base.tangents[j];
        integrand[j] = (a[2] * t[1] - a[1] * t[2]) / (a[0] + 0.5);
    }
    const double mean_rate = mean(integrand);
    lift.holonomy_per_cover = mean_rate * curve.total_length;

    // spectral antiderivative of the oscillating part + linear drift
    std::vector<double> osc(integrand);
    for (double& v : osc) v -= mean_rate;
    const std::vector<double> beta_osc = spectral_antiderivative(osc, curve.total_length);
    const double h = curve.total_length / n;
    lift.beta.resize(n);
    for (int j = 0; j < n; ++j) lift.beta[j] = beta_osc[j] + mean_rate * (j * h);

    lift.lift_points.resize(n);
    for (int j = 0; j < n; ++j) {
        const Vec3& a = lift.base.points[j];
        const double a1 = std::sqrt(a[0] + 0.5);
        const double a2 = a[1] / a1, a3 = a[2] / a1;
        const double cb = std::cos(lift.beta[j]), sb = std::sin(lift.beta[j]);
        lift.lift_points[j] = {a1 * cb, a1 * sb, a2 * cb - a3 * sb, a2 * sb + a3 * cb};
    }

    // smallest cover m with m * holonomy = 0 mod 2*pi
    for (int m = 1; m <= 64; ++m) {
        const double phase = std::remainder(m * lift.holonomy_per_cover, 2.0 * M_PI);
        if (std::abs(phase) <= 1e-6 * 2.0 * M_PI) {
            lift.m_cover = m;
            break;
        }
    }
    return lift;
}

VerticalTorusMesh hopf_torus(const HopfLift& lift, int m_covers, int n_t, bool strict) {
    if (m_covers < 1 || n_t < 4) throw ParameterError("hopf_torus: bad grid parameters");
    const double twist = std::remainder(m_covers * lift.holonomy_per_cover, 2.0 * M_PI);
    if (strict && std::abs(twist) > 1e-6 * 2.0 * M_PI)
        throw NotClosedLift("hopf_torus: m_covers does not close the lift");

    const int n_s = lift.n() * m_covers;
    VerticalTorusMesh mesh;
    mesh.n_s = n_s;
    mesh.n_t = n_t;
    mesh.step_s = lift.grid_step();
    mesh.step_t = 2.0 * M_PI / n_t;
    mesh.twist = m_covers * lift.holonomy_per_cover;
    mesh.vertices.resize(static_cast<size_t>(n_s) * n_t);
    mesh.kappa_row.resize(n_s);

    for (int j = 0; j < n_s; ++j) {
        const int j0 = j % lift.n();
        const int cover = j / lift.n();
        // gamma-bar extends past one traverse by the holonomy phase
        const double shift = cover * lift.holonomy_per_cover;
        const Vec4& g = lift.lift_points[j0];
        mesh.kappa_row[j] = lift.base.kappa[j0];
        for (int k = 0; k < n_t; ++k) {
            const double t = k * mesh.step_t + shift;
            const double c = std::cos(t), s = std::sin(t);
            mesh.vertices[static_cast<size_t>(j) * n_t + k] = {
                c * g[0] - s * g[1], s * g[0] + c * g[1],
                c * g[2] - s * g[3], s * g[2] + c * g[3]};
        }
    }
    return mesh;
}

VerticalReport verify_vertical_geometry(const VerticalTorusMesh& mesh) {
    const int ns = mesh.n_s, nt = mesh.n_t;
    VerticalReport rep;

    // non-closed s-direction: wrap with the twist phase e^{i*twist}
    const double ct_ = std::cos(mesh.twist), st_ = std::sin(mesh.twist);
    auto vertex = [&](int j, int k) -> Eigen::Vector4d {
        const int kk = ((k % nt) + nt) % nt;
        int jj = j;
        int wraps = 0;
        while (jj >= ns) { jj -= ns; ++wraps; }
        while (jj < 0) { jj += ns; --wraps; }
        Eigen::Vector4d v = evec(mesh.at(jj, kk));
        for (int w = 0; w < std::abs(wraps); ++w) {
            const double c = ct_;
            const double s = wraps > 0 ? st_ : -st_;
            v = Eigen::Vector4d(c * v[0] - s * v[1], s * v[0] + c * v[1],
                                c * v[2] - s * v[3], s * v[2] + c * v[3]);
        }
        return v;
    };

    const double hs = mesh.step_s, ht = mesh.step_t;
    auto ds = [&](int j, int k) -> Eigen::Vector4d {
        return (-vertex(j + 2, k) + 8.0 * vertex(j + 1, k) - 8.0 * vertex(j - 1, k) +
                vertex(j - 2, k)) / (12.0 * hs);
    };
    auto dt = [&](int j, int k) -> Eigen::Vector4d {
        return (-vertex(j, k + 2) + 8.0 * vertex(j, k + 1) - 8.0 * vertex(j, k - 1) +
                vertex(j, k - 2)) / (12.0 * ht);
    };
    auto dss = [&](int j, int k) -> Eigen::Vector4d {
        return (-vertex(j + 2, k) + 16.0 * vertex(j + 1, k) - 30.0 * vertex(j, k) +
                16.0 * vertex(j - 1, k) - vertex(j - 2, k)) / (12.0 * hs * hs);
    };
    auto dtt = [&](int j, int k) -> Eigen::Vector4d {
        return (-vertex(j, k + 2) + 16.0 * vertex(j, k + 1) - 30.0 * vertex(j, k) +
                16.0 * vertex(j, k - 1) - vertex(j, k - 2)) / (12.0 * ht * ht);
    };
    auto dst = [&](int j, int k) -> Eigen::Vector4d {
        return (-ds(j, k + 2) + 8.0 * ds(j, k + 1) - 8.0 * ds(j, k - 1) + ds(j, k - 2)) /
               (12.0 * ht);
    };

    // per-vertex shape operator; orientation fixed globally below
    std::vector<double> hvals(static_cast<size_t>(ns) * nt), kvals(hvals.size());
    double orient = 0.0;
    for (int j = 0; j < ns; ++j) {
        for (int k = 0; k < nt; ++k) {
            const Eigen::Vector4d x = vertex(j, k);
            rep.max_sphere_defect = std::max(rep.max_sphere_defect, std::abs(x.norm() - 1.0));
            const Eigen::Vector4d xs = ds(j, k), xt = dt(j, k);

            // unit normal in T S^3: 4D cross product of x, xs, xt
            Eigen::Matrix4d M;
            M.row(1) = x.transpose();
            M.row(2) = xs.transpose();
            M.row(3) = xt.transpose();
            Eigen::Vector4d eta;
            for (int i = 0; i < 4; ++i) {
                M.row(0) = Eigen::RowVector4d::Zero();
                M(0, i) = 1.0;
                eta[i] = M.determinant();
            }
            eta.normalize();

            const double E = xs.dot(xs), F = xs.dot(xt), G = xt.dot(xt);
            const double e = dss(j, k).dot(eta), f = dst(j, k).dot(eta), g = dtt(j, k).dot(eta);
            const double det = E * G - F * F;
            const double H = (e * G - 2.0 * f * F + g * E) / (2.0 * det);
            const double KS = 1.0 + (e * g - f * f) / det;  // Gauss equation in S^3(1)
            hvals[static_cast<size_t>(j) * nt + k] = H;
            kvals[static_cast<size_t>(j) * nt + k] = KS;
            orient += H * mesh.kappa_row[j];
        }
    }
    const double sign = orient >= 0.0 ? 1.0 : -1.0;
    for (int j = 0; j < ns; ++j)
        for (int k = 0; k < nt; ++k) {
            rep.max_h_defect = std::max(
                rep.max_h_defect,
                std::abs(sign * hvals[static_cast<size_t>(j) * nt + k] - 0.5 * mesh.kappa_row[j]));
            rep.max_gauss =
                std::max(rep.max_gauss, std::abs(kvals[static_cast<size_t>(j) * nt + k]));
        }
    return rep;
}

}  // namespace ct
