#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ct/mesh_io.hpp"
#include "doctest.h"

using namespace ct;

namespace {

std::vector<Vec4> clifford_grid(int n_s, int n_t, double shear = 0.0) {
    std::vector<Vec4> verts(static_cast<size_t>(n_s) * n_t);
    const double hs = 2.0 * M_PI / n_s, ht = 2.0 * M_PI / n_t;
    const double c = 1.0 / std::sqrt(2.0);
    for (int j = 0; j < n_s; ++j)
        for (int k = 0; k < n_t; ++k) {
            const double u = j * hs, v = shear * j * hs + k * ht;
            verts[static_cast<size_t>(j) * n_t + k] = {c * std::cos(u), c * std::sin(u),
                                                       c * std::cos(v), c * std::sin(v)};
        }
    return verts;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("stereographic projection fixed points and pole guard") {
    const Vec4 pole{0.0, 0.0, 0.0, 1.0};
    // antipode of the pole maps to the origin
    Vec3 q = stereographic(Vec4{0.0, 0.0, 0.0, -1.0}, pole, 1.0);
    CHECK(std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2]) <= 1e-15);
    // equatorial points are fixed
    q = stereographic(Vec4{0.6, 0.0, 0.8, 0.0}, pole, 1.0);
    CHECK(std::abs(q[0] - 0.6) <= 1e-15);
    CHECK(std::abs(q[1] - 0.0) <= 1e-15);
    CHECK(std::abs(q[2] - 0.8) <= 1e-15);
    // radius scaling: equator of S^3(2) is fixed too
    q = stereographic(Vec4{2.0, 0.0, 0.0, 0.0}, pole, 2.0);
    CHECK(std::abs(q[0] - 2.0) <= 1e-14);
    CHECK_THROWS_AS(stereographic(Vec4{0.0, 1e-4, 0.0, 1.0 - 1e-8}, pole, 1.0), AtPole);
    CHECK_THROWS_AS(stereographic(Vec4{0.5, 0.0, 0.0, 0.0}, pole, 1.0), OffSphere);
}

TEST_CASE("Clifford torus projects to a torus of revolution") {
    const int n_s = 64, n_t = 64;
    ProjectedMesh mesh = project_mesh(clifford_grid(n_s, n_t), n_s, n_t, 1.0);
    // least-squares circle fit of the (distance-to-axis, z) profile:
    // d^2 + z^2 = 2 R d + 2 c z + k
    Eigen::Matrix3d A = Eigen::Matrix3d::Zero();
    Eigen::Vector3d b = Eigen::Vector3d::Zero();
    for (const Vec3& p : mesh.vertices) {
        const double d = std::hypot(p[0], p[1]), z = p[2];
        const Eigen::Vector3d row(2.0 * d, 2.0 * z, 1.0);
        A += row * row.transpose();
        b += row * (d * d + z * z);
    }
    const Eigen::Vector3d sol = A.ldlt().solve(b);
    const double R = sol[0], c = sol[1];
    const double tube = std::sqrt(sol[2] + R * R + c * c);
    CHECK(std::abs(R - std::sqrt(2.0)) <= 1e-9);
    CHECK(std::abs(c) <= 1e-9);
    CHECK(std::abs(tube - 1.0) <= 1e-9);
}

TEST_CASE("pole re-pick is deterministic and clears the mesh") {
    // a grid passing through the default pole e4
    std::vector<Vec4> verts = clifford_grid(16, 16);
    for (auto& v : verts) {  // rotate (2,4)-plane so one vertex hits e4
        const double c = 1.0 / std::sqrt(2.0);
        const double x2 = v[1], x4 = v[3];
        v[1] = c * (x2 - x4);
        v[3] = c * (x2 + x4);
    }
    bool hits_pole = false;
    for (const auto& v : verts) hits_pole = hits_pole || v[3] > 1.0 - 1e-3;
    REQUIRE(hits_pole);
    ProjectedMesh a = project_mesh(verts, 16, 16, 1.0);
    ProjectedMesh b = project_mesh(verts, 16, 16, 1.0);
    for (int i = 0; i < 4; ++i) CHECK(a.pole[i] == b.pole[i]);
    CHECK(std::abs(a.pole[3] - 1.0) > 1e-3);  // not the default pole
    for (size_t i = 0; i < a.vertices.size(); ++i)
        for (int c = 0; c < 3; ++c) CHECK(a.vertices[i][c] == b.vertices[i][c]);
}

TEST_CASE("discrete curvatures recover the round sphere") {
    const int n_s = 1024, n_t = 1024;
    const double r = 0.5;
    std::vector<Vec3> verts(static_cast<size_t>(n_s) * n_t);
    const double hs = 2.0 * M_PI / n_s, ht = 2.0 * M_PI / n_t;
    for (int j = 0; j < n_s; ++j)
        for (int k = 0; k < n_t; ++k) {
            const double th = (j + 0.5) * hs, ph = k * ht;  // double cover, poles excluded
            verts[static_cast<size_t>(j) * n_t + k] = {r * std::sin(th) * std::cos(ph),
                                                       r * std::sin(th) * std::sin(ph),
                                                       r * std::cos(th)};
        }
    DiscreteCurvatures dc = discrete_curvatures(verts, n_s, n_t);
    double worstH = 0.0, worstK = 0.0;
    for (int j = 0; j < n_s; ++j) {
        const double th = (j + 0.5) * hs;
        if (std::abs(std::sin(th)) < 0.7) continue;  // parametrization degenerates at poles
        for (int k = 0; k < n_t; ++k) {
            const size_t idx = static_cast<size_t>(j) * n_t + k;
            REQUIRE(dc.valid[idx]);
            worstH = std::max(worstH, std::abs(std::abs(dc.H[idx]) - 2.0));
            worstK = std::max(worstK, std::abs(dc.K[idx] - 4.0));
        }
    }
    CHECK(worstH <= 1e-4);
    CHECK(worstK <= 1e-4);
}

TEST_CASE("Clifford torus is minimal and flat to second order") {
    double prev_err = 0.0;
    for (int n : {256, 512}) {
        DiscreteCurvatures dc = discrete_curvatures_s3(clifford_grid(n, n), n, n, 1.0);
        double err = 0.0;
        for (size_t i = 0; i < dc.H.size(); ++i) {
            REQUIRE(dc.valid[i]);
            err = std::max(err, std::max(std::abs(dc.H[i]), std::abs(dc.K[i])));
        }
        if (n == 256) {
            prev_err = err;
            CHECK(err <= 5e-4);
        } else {
            CHECK(err <= 1e-4);
            CHECK(err * 3.0 < prev_err);  // ~4x decay at second order
        }
    }
}

TEST_CASE("stereographic projection preserves grid angles") {
    const int n = 256;
    std::vector<Vec4> grid = clifford_grid(n, n, 1.0);  // sheared: non-orthogonal directions
    ProjectedMesh proj = project_mesh(grid, n, n, 1.0);
    auto angle4 = [&](int j, int k) {
        auto at = [&](int jj, int kk) {
            const Vec4& v = grid[static_cast<size_t>(((jj % n) + n) % n) * n + ((kk % n) + n) % n];
            return Eigen::Vector4d(v[0], v[1], v[2], v[3]);
        };
        const Eigen::Vector4d xs = at(j + 1, k) - at(j - 1, k), xt = at(j, k + 1) - at(j, k - 1);
        return std::acos(xs.dot(xt) / (xs.norm() * xt.norm()));
    };
    auto angle3 = [&](int j, int k) {
        auto at = [&](int jj, int kk) {
            const Vec3& v = proj.at(((jj % n) + n) % n, ((kk % n) + n) % n);
            return Eigen::Vector3d(v[0], v[1], v[2]);
        };
        const Eigen::Vector3d xs = at(j + 1, k) - at(j - 1, k), xt = at(j, k + 1) - at(j, k - 1);
        return std::acos(xs.dot(xt) / (xs.norm() * xt.norm()));
    };
    double worst = 0.0;
    for (int j = 0; j < n; j += 5)
        for (int k = 0; k < n; k += 5)
            worst = std::max(worst, std::abs(angle4(j, k) - angle3(j, k)));
    CHECK(worst <= 1e-3);
}

TEST_CASE("degenerate quads are rejected") {
    std::vector<Vec3> verts(16 * 16, Vec3{1.0, 2.0, 3.0});
    CHECK_THROWS_AS(discrete_curvatures(verts, 16, 16), DegenerateCell);
}

TEST_CASE("OBJ polyline has N vertices and N segments") {
    std::vector<Vec3> pts;
    for (int i = 0; i < 7; ++i)
        pts.push_back({std::cos(2 * M_PI * i / 7.0), std::sin(2 * M_PI * i / 7.0), 0.0});
    const std::string path = "/tmp/ct_polyline_test.obj";
    write_obj_polyline(path, pts);
    const std::string text = slurp(path);
    int nv = 0, nl = 0;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (line.rfind("v ", 0) == 0) ++nv;
        if (line.rfind("l ", 0) == 0) ++nl;
    }
    CHECK(nv == 7);
    CHECK(nl == 7);
    CHECK(text.find("l 7 1") != std::string::npos);  // wraparound segment
}

TEST_CASE("OBJ quad torus has n_s*n_t vertices and faces") {
    const int n_s = 6, n_t = 5;
    std::vector<Vec3> verts;
    for (int j = 0; j < n_s; ++j)
        for (int k = 0; k < n_t; ++k) verts.push_back({double(j), double(k), 0.1});
    const std::string path = "/tmp/ct_quads_test.obj";
    write_obj_quads(path, verts, n_s, n_t);
    int nv = 0, nf = 0;
    std::istringstream in(slurp(path));
    for (std::string line; std::getline(in, line);) {
        if (line.rfind("v ", 0) == 0) ++nv;
        if (line.rfind("f ", 0) == 0) ++nf;
    }
    CHECK(nv == n_s * n_t);
    CHECK(nf == n_s * n_t);  // closed grid: V - E + F = 0 with E = 2 V
}

TEST_CASE("columnar and report output is deterministic") {
    const std::string cpath = "/tmp/ct_columns_test.txt";
    write_columns(cpath, {"kind=bending lambda=0", "rho=4"}, {"s", "kappa"},
                  {{0.0, 0.1, 0.2}, {1.0, 1.0 + 1e-16, M_PI}});
    const std::string first = slurp(cpath);
    CHECK(first.find("# kind=bending lambda=0\n") != std::string::npos);
    CHECK(first.find("# s kappa\n") != std::string::npos);
    CHECK(first.find("3.1415926535897931e+00") != std::string::npos);  // 17 significant digits
    write_columns(cpath, {"kind=bending lambda=0", "rho=4"}, {"s", "kappa"},
                  {{0.0, 0.1, 0.2}, {1.0, 1.0 + 1e-16, M_PI}});
    CHECK(slurp(cpath) == first);

    const std::string rpath = "/tmp/ct_report_test.txt";
    write_report(rpath, {{"max_el_residual", format_g17(1.25e-9)}, {"status", "pass"}});
    const std::string report = slurp(rpath);
    CHECK(report == "max_el_residual = 1.2500000000000000e-09\nstatus = pass\n");
    write_report(rpath, {{"max_el_residual", format_g17(1.25e-9)}, {"status", "pass"}});
    CHECK(slurp(rpath) == report);
}
