#include "doctest.h"

#include <cmath>

#include "ct/hopf_submersion.hpp"

using namespace ct;

namespace {

SphereCurve circle_curve(double kappa0, int n) {
    const double len = 2.0 * M_PI / std::sqrt(4.0 + kappa0 * kappa0);
    return reconstruct(constant_profile(EnergySpec::bending(0.0), kappa0, 4.0, len, n), 4.0, 1);
}

double norm4(const Vec4& p) {
    return std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3]);
}

}  // namespace

TEST_CASE("hopf_project pinned points") {
    auto q = hopf_project({1.0, 0.0, 0.0, 0.0});
    CHECK(q[0] == doctest::Approx(0.5));
    CHECK(q[1] == doctest::Approx(0.0));
    CHECK(q[2] == doctest::Approx(0.0));

    q = hopf_project({0.0, 0.0, 1.0, 0.0});
    CHECK(q[0] == doctest::Approx(-0.5));

    const double is2 = 1.0 / std::sqrt(2.0);
    q = hopf_project({is2, 0.0, is2, 0.0});
    CHECK(q[0] == doctest::Approx(0.0));
    CHECK(q[1] == doctest::Approx(0.5));
    CHECK(q[2] == doctest::Approx(0.0));

    CHECK_THROWS_AS(hopf_project({1.0, 1.0, 0.0, 0.0}), OffSphere);
}

TEST_CASE("equator lift is the Clifford torus generator") {
    const auto geo = constant_profile(EnergySpec::bending(0.0), 0.0, 4.0, M_PI, 512);
    const auto lift = horizontal_lift(reconstruct(geo, 4.0, 1));

    const double h = lift.grid_step();
    for (int j = 0; j < lift.n(); ++j) {
        CHECK(std::abs(norm4(lift.lift_points[j]) - 1.0) < 1e-10);
        CHECK(std::abs(lift.beta[j] - (-j * h)) < 1e-8); // beta = -s
    }
    CHECK(lift.holonomy_per_cover == doctest::Approx(-M_PI).epsilon(1e-10));
    REQUIRE(lift.m_cover.has_value());
    CHECK(*lift.m_cover == 2);

    // gamma-bar(s + pi) = -gamma-bar(s) on the double cover
    const auto mesh = hopf_torus(lift, 2, 8);
    for (int j = 0; j < lift.n(); ++j)
        for (int i = 0; i < 4; ++i)
            CHECK(mesh.at(j + lift.n(), 0)[i] == doctest::Approx(-mesh.at(j, 0)[i]).epsilon(1e-9));
}

TEST_CASE("lift horizontality, speed and round trip") {
    auto check_lift = [](const SphereCurve& c) {
        const auto lift = horizontal_lift(c);
        const double h = lift.grid_step();
        for (int j = 2; j + 2 < lift.n(); ++j) {
            // round trip onto the (pre-rotated) base
            const Vec3 q = hopf_project(lift.lift_points[j]);
            for (int i = 0; i < 3; ++i)
                CHECK(std::abs(q[i] - lift.base.points[j][i]) < 1e-9);

            Vec4 d{};
            for (int i = 0; i < 4; ++i)
                d[i] = (-lift.lift_points[j + 2][i] + 8.0 * lift.lift_points[j + 1][i] -
                        8.0 * lift.lift_points[j - 1][i] + lift.lift_points[j - 2][i]) /
                       (12.0 * h);
            const Vec4& p = lift.lift_points[j];
            const Vec4 xi{-p[1], p[0], -p[3], p[2]}; // vertical field (iz, iw)
            CHECK(std::abs(d[0] * xi[0] + d[1] * xi[1] + d[2] * xi[2] + d[3] * xi[3]) < 1e-7);
            CHECK(std::abs(norm4(d) - 1.0) < 1e-7); // arc-length is preserved
        }
    };
    check_lift(circle_curve(1.5, 1024));
    check_lift(closure_search(EnergySpec::extended_blaschke(0.0), 4.0, 3, 2, {1.2, 2.0}).curve);

    // lifting an open arc is rejected
    CHECK_THROWS_AS(horizontal_lift(reconstruct(blaschke_profile(4.0, 0.0, 2.0, 256), 4.0, 1)),
                    NotClosed);
}

TEST_CASE("clifford torus geometry") {
    const auto geo = constant_profile(EnergySpec::bending(0.0), 0.0, 4.0, M_PI, 256);
    const auto lift = horizontal_lift(reconstruct(geo, 4.0, 1));
    const auto mesh = hopf_torus(lift, 2, 64);
    CHECK(mesh.n_s == 512);

    for (const auto& v : mesh.vertices) CHECK(std::abs(norm4(v) - 1.0) < 1e-9);

    // fiber columns are unit circles: e^{it} orbits have constant pairwise
    // inner products and radius-1 planar span
    for (int k = 0; k < mesh.n_t; ++k) {
        const Vec4& v0 = mesh.at(17, 0);
        const Vec4& vk = mesh.at(17, k);
        double ip = 0.0;
        for (int i = 0; i < 4; ++i) ip += v0[i] * vk[i];
        CHECK(ip == doctest::Approx(std::cos(k * mesh.step_t)).epsilon(1e-9));
    }

    const auto rep = verify_vertical_geometry(mesh);
    CHECK(rep.max_sphere_defect < 1e-9);
    CHECK(rep.max_h_defect < 1e-6);
    CHECK(rep.max_gauss < 1e-5);
}

TEST_CASE("circle torus: H = kappa/2 and flatness, with refinement") {
    auto defects = [](int ns, int nt) {
        const auto lift = horizontal_lift(circle_curve(1.5, ns));
        const auto mesh = hopf_torus(lift, 1, nt, /*strict=*/false);
        return verify_vertical_geometry(mesh);
    };
    const auto coarse = defects(256, 32);
    const auto fine = defects(512, 64);
    CHECK(fine.max_h_defect < 1e-4);
    CHECK(fine.max_gauss < 1e-4);
    CHECK(fine.max_h_defect < coarse.max_h_defect);
    CHECK(fine.max_gauss < 1e-10); // exactly flat; only roundoff remains
}

TEST_CASE("gamma_{3,2} torus closes and satisfies H = kappa/2") {
    const auto res = closure_search(EnergySpec::extended_blaschke(0.0), 4.0, 3, 2, {1.2, 2.0});
    const auto lift = horizontal_lift(res.curve);

    // holonomy tracks the enclosed area: delta beta = -2 * area
    const auto st = curve_stats(res.curve, EnergySpec::extended_blaschke(0.0));
    CHECK(lift.holonomy_per_cover == doctest::Approx(-2.0 * st.area).epsilon(1e-6));

    REQUIRE(lift.m_cover.has_value());
    const auto mesh = hopf_torus(lift, *lift.m_cover, 64);
    const auto rep = verify_vertical_geometry(mesh);
    CHECK(rep.max_sphere_defect < 1e-9);
    CHECK(rep.max_h_defect < 1e-4);
    CHECK(rep.max_gauss < 1e-3);
}

TEST_CASE("bcv vertical cylinder over a circle, a=1 b=2") {
    const double r = 0.5, a = 1.0;
    const double kappa0 = 1.0 / r - a * r;
    const auto xy = bcv_circle(a, r, 512);
    const double len = 2.0 * M_PI * r / (1.0 + a * r * r);
    const auto rep = bcv_vertical_check(a, 2.0, xy, std::vector<double>(512, kappa0), len / 512);
    CHECK(rep.max_h_defect < 1e-6);
    CHECK(rep.max_identity_defect < 1e-6);
}

TEST_CASE("bcv euclidean plane over a line") {
    std::vector<std::array<double, 2>> xy(64);
    for (int j = 0; j < 64; ++j) xy[j] = {0.1 * j, 0.0};
    const auto rep = bcv_vertical_check(0.0, 0.0, xy, std::vector<double>(64, 0.0), 0.1);
    CHECK(rep.max_h_defect < 1e-10);
    CHECK(rep.max_identity_defect < 1e-10);
}

TEST_CASE("bcv chart exit") {
    const auto xy = bcv_circle(1.0, 1.0, 64); // valid chart for a=1
    CHECK_THROWS_AS(
        bcv_vertical_check(-1.0, 0.0, xy, std::vector<double>(64, 0.0), 0.1),
        ChartExit);
}
