#include "ct/hopf_submersion.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace ct {

namespace {

// Bianchi-Cartan-Vranceanu metric in the chart (x, y, z):
//   g = (dx^2 + dy^2)/F^2 + theta^2,  F = 1 + a(x^2+y^2),
//   theta = dz + W (y dx - x dy),     W = b/(2F)
struct BcvChart {
    double a, b;

    double F(double x, double y) const { return 1.0 + a * (x * x + y * y); }

    Eigen::Matrix3d metric(double x, double y) const {
        const double f = F(x, y);
        if (f < 1e-6) throw ChartExit("bcv: curve leaves the chart 1 + a(x^2+y^2) > 0");
        const double W = b / (2.0 * f);
        Eigen::Matrix3d g;
        g << 1.0 / (f * f) + W * W * y * y, -W * W * x * y, W * y,
             -W * W * x * y, 1.0 / (f * f) + W * W * x * x, -W * x,
             W * y, -W * x, 1.0;
        return g;
    }

    // analytic first derivatives of the metric; d/dz vanishes identically
    std::array<Eigen::Matrix3d, 2> metric_grad(double x, double y) const {
        const double f = F(x, y);
        const double W = b / (2.0 * f);
        const double Wx = -2.0 * a * x * W / f, Wy = -2.0 * a * y * W / f;
        const double Ix = -4.0 * a * x / (f * f * f), Iy = -4.0 * a * y / (f * f * f);

        Eigen::Matrix3d gx, gy;
        gx << Ix + 2.0 * W * Wx * y * y,
              -2.0 * W * Wx * x * y - W * W * y,
              Wx * y,
              0, Ix + 2.0 * W * Wx * x * x + 2.0 * W * W * x, -Wx * x - W,
              0, 0, 0.0;
        gy << Iy + 2.0 * W * Wy * y * y + 2.0 * W * W * y,
              -2.0 * W * Wy * x * y - W * W * x,
              Wy * y + W,
              0, Iy + 2.0 * W * Wy * x * x, -Wy * x,
              0, 0, 0.0;
        gx(1, 0) = gx(0, 1); gx(2, 0) = gx(0, 2); gx(2, 1) = gx(1, 2);
        gy(1, 0) = gy(0, 1); gy(2, 0) = gy(0, 2); gy(2, 1) = gy(1, 2);
        return {gx, gy};
    }

    // Christoffel symbols Gamma[k](i, j)
    std::array<Eigen::Matrix3d, 3> christoffel(double x, double y) const {
        const Eigen::Matrix3d ginv = metric(x, y).inverse();
        const auto dg = metric_grad(x, y);
        auto d = [&](int l, int i, int j) -> double {
            if (l == 2) return 0.0;
            return dg[l](i, j);
        };
        std::array<Eigen::Matrix3d, 3> G;
        for (int k = 0; k < 3; ++k)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    double s = 0.0;
                    for (int l = 0; l < 3; ++l)
                        s += ginv(k, l) * (d(i, j, l) + d(j, i, l) - d(l, i, j));
                    G[k](i, j) = 0.5 * s;
                }
        return G;
    }

    // full (1,3) Riemann tensor R^l_{ijk} = <R(e_i, e_j) e_k, dx^l>; Gamma
    // derivatives by central differences of the analytic Christoffels (the
    // metric is z-independent)
    struct Curvature {
        double R[3][3][3][3];  // fully lowered R_{lijk}
        Eigen::Matrix3d ric;
        Eigen::Matrix3d g;

        double sectional(const Eigen::Vector3d& u, const Eigen::Vector3d& v) const {
            double num = 0.0;
            for (int l = 0; l < 3; ++l)
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j)
                        for (int k = 0; k < 3; ++k)
                            num += R[l][i][j][k] * u[l] * u[i] * v[j] * v[k];
            const double denom =
                u.dot(g * u) * v.dot(g * v) - u.dot(g * v) * u.dot(g * v);
            return num / denom;
        }
    };

    Curvature curvature(double x, double y) const {
        const double h = 1e-5;
        const auto Gx_p = christoffel(x + h, y), Gx_m = christoffel(x - h, y);
        const auto Gy_p = christoffel(x, y + h), Gy_m = christoffel(x, y - h);
        const auto G = christoffel(x, y);
        auto dG = [&](int dir, int k, int i, int j) -> double {
            if (dir == 0) return (Gx_p[k](i, j) - Gx_m[k](i, j)) / (2.0 * h);
            if (dir == 1) return (Gy_p[k](i, j) - Gy_m[k](i, j)) / (2.0 * h);
            return 0.0;
        };
        // R^l_{ijk} = d_i Gamma^l_{jk} - d_j Gamma^l_{ik}
        //             + Gamma^l_{im} Gamma^m_{jk} - Gamma^l_{jm} Gamma^m_{ik}
        double Rup[3][3][3][3];
        for (int l = 0; l < 3; ++l)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    for (int k = 0; k < 3; ++k) {
                        double s = dG(i, l, j, k) - dG(j, l, i, k);
                        for (int m = 0; m < 3; ++m)
                            s += G[l](i, m) * G[m](j, k) - G[l](j, m) * G[m](i, k);
                        Rup[l][i][j][k] = s;
                    }

        Curvature cv;
        cv.g = metric(x, y);
        for (int l = 0; l < 3; ++l)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    for (int k = 0; k < 3; ++k) {
                        double s = 0.0;
                        for (int m = 0; m < 3; ++m) s += cv.g(l, m) * Rup[m][i][j][k];
                        // lowered convention R(u, v, v, u): R_{lijk} u^l u^i? --
                        // store as <R(e_i, e_j) e_k, e_l>
                        cv.R[l][i][j][k] = s;
                    }
        // Ric(j, k) = R^i_{ijk}... contract first upper with first lower slot
        cv.ric = Eigen::Matrix3d::Zero();
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                double s = 0.0;
                for (int i = 0; i < 3; ++i) s += Rup[i][i][j][k];
                cv.ric(j, k) = s;
            }
        return cv;
    }
};

}  // namespace

std::vector<std::array<double, 2>> bcv_circle(double a, double r, int n_samples) {
    if (r <= 0.0 || n_samples < 8) throw ParameterError("bcv_circle: bad parameters");
    std::vector<std::array<double, 2>> xy(n_samples);
    for (int j = 0; j < n_samples; ++j) {
        const double phi = 2.0 * M_PI * j / n_samples;
        xy[j] = {r * std::cos(phi), r * std::sin(phi)};
    }
    return xy;
}

BcvReport bcv_vertical_check(double a, double b, const std::vector<std::array<double, 2>>& base_xy,
                             const std::vector<double>& kappa, double step_s) {
    const int n = static_cast<int>(base_xy.size());
    if (n < 8 || static_cast<int>(kappa.size()) != n)
        throw ParameterError("bcv_vertical_check: need >= 8 samples with matching kappa");
    const BcvChart chart{a, b};

    auto X = [&](int j) { return Eigen::Vector2d(base_xy[j][0], base_xy[j][1]); };
    auto d1 = [&](int j) -> Eigen::Vector2d {
        return (-X(j + 2) + 8.0 * X(j + 1) - 8.0 * X(j - 1) + X(j - 2)) / (12.0 * step_s);
    };
    auto d2 = [&](int j) -> Eigen::Vector2d {
        return (-X(j + 2) + 16.0 * X(j + 1) - 30.0 * X(j) + 16.0 * X(j - 1) - X(j - 2)) /
               (12.0 * step_s * step_s);
    };

    BcvReport rep;
    std::vector<double> hvals, kref;
    for (int j = 2; j + 2 < n; ++j) {
        const double x = base_xy[j][0], y = base_xy[j][1];
        const Eigen::Matrix3d g = chart.metric(x, y);
        const auto G = chart.christoffel(x, y);

        const Eigen::Vector2d xp = d1(j), xpp = d2(j);
        const Eigen::Vector3d u(xp[0], xp[1], 0.0);
        const Eigen::Vector3d v(0.0, 0.0, 1.0);
        const Eigen::Vector3d up(xpp[0], xpp[1], 0.0);

        // eta: horizontal lift of the base normal J(T) = (-y', x')
        const double W = b / (2.0 * chart.F(x, y));
        Eigen::Vector3d eta(-xp[1], xp[0], 0.0);
        eta[2] = W * (x * eta[1] - y * eta[0]);

        auto covj = [&](const Eigen::Vector3d& A, const Eigen::Vector3d& B,
                        const Eigen::Vector3d& dAB) {
            Eigen::Vector3d out = dAB;
            for (int k = 0; k < 3; ++k) out[k] += A.transpose() * G[k] * B;
            return out;
        };
        const Eigen::Vector3d nuu = covj(u, u, up);
        const Eigen::Vector3d nuv = covj(u, v, Eigen::Vector3d::Zero());
        const Eigen::Vector3d nvv = covj(v, v, Eigen::Vector3d::Zero());

        const double E = u.dot(g * u), Fm = u.dot(g * v), Gm = v.dot(g * v);
        const double e = nuu.dot(g * eta), f = nuv.dot(g * eta), q = nvv.dot(g * eta);
        const double det = E * Gm - Fm * Fm;
        const double H = (e * Gm - 2.0 * f * Fm + q * E) / (2.0 * det);

        hvals.push_back(H);
        kref.push_back(kappa[j]);
        // R is the ambient sectional curvature of the tangent plane of the
        // tube (in a space form 2R + Ric(eta,eta) = 4*rho)
        const auto cv = chart.curvature(x, y);
        const double R = cv.sectional(u, v);
        const double ric = eta.dot(cv.ric * eta);
        rep.max_identity_defect =
            std::max(rep.max_identity_defect, std::abs(2.0 * R + ric - 4.0 * a));
    }

    // surface orientation: pick the global sign matching H with kappa/2
    double orient = 0.0;
    for (size_t i = 0; i < hvals.size(); ++i) orient += hvals[i] * kref[i];
    const double sign = orient >= 0.0 ? 1.0 : -1.0;
    for (size_t i = 0; i < hvals.size(); ++i)
        rep.max_h_defect = std::max(rep.max_h_defect, std::abs(sign * hvals[i] - 0.5 * kref[i]));
    return rep;
}

}  // namespace ct
