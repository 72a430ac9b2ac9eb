#include "ct/mesh_io.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "ct/errors.hpp"

namespace ct {

namespace {

Eigen::Vector4d evec(const Vec4& p) { return Eigen::Vector4d(p[0], p[1], p[2], p[3]); }

// orthonormal basis (b0, b1, b2) of the 3-plane orthogonal to a unit pole;
// reduces to (e1, e2, e3) when pole = e4
Eigen::Matrix<double, 3, 4> plane_basis(const Eigen::Vector4d& pole) {
    Eigen::Matrix4d M = Eigen::Matrix4d::Identity() - pole * pole.transpose();
    Eigen::Matrix<double, 3, 4> B;
    int row = 0;
    // Gram-Schmidt the projected coordinate axes, largest first
    for (int i = 0; i < 4 && row < 3; ++i) {
        Eigen::Vector4d v = M.col(i);
        for (int r = 0; r < row; ++r) v -= B.row(r).dot(v) * B.row(r).transpose();
        if (v.norm() > 1e-8) B.row(row++) = v.normalized().transpose();
    }
    if (row < 3) throw ParameterError("plane_basis: pole is not a unit vector");
    return B;
}

}  // namespace

Vec3 stereographic(const Vec4& p, const Vec4& pole, double radius, double eps_pole) {
    const Eigen::Vector4d pv = evec(p), nv = evec(pole);
    if (std::abs(pv.norm() - radius) > 1e-6 * radius)
        throw OffSphere("stereographic: point is not on the sphere");
    const double c = pv.dot(nv) / radius;
    if (c > 1.0 - eps_pole) throw AtPole("stereographic: point too close to the pole");
    const Eigen::Vector4d q = radius * (pv - pv.dot(nv) * nv) / (radius - pv.dot(nv));
    const Eigen::Vector3d out = plane_basis(nv) * q;
    return {out[0], out[1], out[2]};
}

ProjectedMesh project_mesh(const std::vector<Vec4>& vertices, int n_s, int n_t, double radius,
                           const Vec4& pole) {
    if (static_cast<int>(vertices.size()) != n_s * n_t)
        throw ParameterError("project_mesh: vertex count does not match the grid");

    const double eps_pole = 1e-3;
    Eigen::Vector4d nv = evec(pole).normalized();
    auto clears_pole = [&](const Eigen::Vector4d& candidate) {
        for (const Vec4& v : vertices)
            if (evec(v).dot(candidate) / radius > 1.0 - eps_pole) return false;
        return true;
    };
    if (!clears_pole(nv)) {
        std::mt19937 rng(0x9e3779b9u);  // fixed seed: re-pick must be deterministic
        std::normal_distribution<double> gauss(0.0, 1.0);
        bool found = false;
        for (int attempt = 0; attempt < 256 && !found; ++attempt) {
            Eigen::Vector4d c(gauss(rng), gauss(rng), gauss(rng), gauss(rng));
            if (c.norm() < 1e-6) continue;
            c.normalize();
            if (clears_pole(c)) {
                nv = c;
                found = true;
            }
        }
        if (!found) throw AtPole("project_mesh: could not find a pole clear of the mesh");
    }

    ProjectedMesh out;
    out.n_s = n_s;
    out.n_t = n_t;
    out.pole = {nv[0], nv[1], nv[2], nv[3]};
    out.vertices.reserve(vertices.size());
    for (const Vec4& v : vertices) out.vertices.push_back(stereographic(v, out.pole, radius));
    return out;
}

namespace {

template <typename Vertex, typename ToVec>
DiscreteCurvatures curvature_grid(const std::vector<Vertex>& verts, int n_s, int n_t,
                                  ToVec&& to_vec, double radius) {
    if (n_s < 4 || n_t < 4) throw ParameterError("discrete_curvatures: grid too small");
    if (static_cast<int>(verts.size()) != n_s * n_t)
        throw ParameterError("discrete_curvatures: vertex count does not match the grid");
    using V = decltype(to_vec(verts[0]));

    auto at = [&](int j, int k) -> V {
        return to_vec(verts[static_cast<size_t>(((j % n_s) + n_s) % n_s) * n_t +
                            ((k % n_t) + n_t) % n_t]);
    };

    // quad degeneracy guard: smallest quad area on the grid
    for (int j = 0; j < n_s; ++j)
        for (int k = 0; k < n_t; ++k) {
            const V a = at(j + 1, k) - at(j, k), b = at(j, k + 1) - at(j, k);
            const double area2 = a.squaredNorm() * b.squaredNorm() - std::pow(a.dot(b), 2);
            if (area2 < 1e-28) throw DegenerateCell("discrete_curvatures: quad area below 1e-14");
        }

    DiscreteCurvatures out;
    const size_t total = verts.size();
    out.H.assign(total, 0.0);
    out.K.assign(total, 0.0);
    out.valid.assign(total, 0);

    std::vector<double> dets(total, 0.0);
    double max_det = 0.0;

    for (int j = 0; j < n_s; ++j)
        for (int k = 0; k < n_t; ++k) {
            const V xs = 0.5 * (at(j + 1, k) - at(j - 1, k));
            const V xt = 0.5 * (at(j, k + 1) - at(j, k - 1));
            const V xss = at(j + 1, k) - 2.0 * at(j, k) + at(j - 1, k);
            const V xtt = at(j, k + 1) - 2.0 * at(j, k) + at(j, k - 1);
            const V xst = 0.25 * (at(j + 1, k + 1) - at(j + 1, k - 1) - at(j - 1, k + 1) +
                                  at(j - 1, k - 1));

            V eta;
            if constexpr (V::RowsAtCompileTime == 3) {
                eta = xs.cross(xt);
            } else {
                Eigen::Matrix4d M;
                M.row(1) = (at(j, k) / radius).transpose();
                M.row(2) = xs.transpose();
                M.row(3) = xt.transpose();
                for (int i = 0; i < 4; ++i) {
                    M.row(0) = Eigen::RowVector4d::Zero();
                    M(0, i) = 1.0;
                    eta[i] = M.determinant();
                }
            }
            const double eta_norm = eta.norm();
            const double E = xs.dot(xs), F = xs.dot(xt), G = xt.dot(xt);
            const double det = E * G - F * F;
            const size_t idx = static_cast<size_t>(j) * n_t + k;
            dets[idx] = det;
            max_det = std::max(max_det, det);
            if (eta_norm < 1e-14 || det < 1e-28) continue;
            eta /= eta_norm;
            const double e = xss.dot(eta), f = xst.dot(eta), g = xtt.dot(eta);
            out.H[idx] = (e * G - 2.0 * f * F + g * E) / (2.0 * det);
            out.K[idx] = (e * g - f * f) / det;
            if constexpr (V::RowsAtCompileTime == 4) out.K[idx] += 1.0 / (radius * radius);
        }

    for (size_t i = 0; i < total; ++i) out.valid[i] = dets[i] > 1e-8 * max_det ? 1 : 0;
    return out;
}

}  // namespace

DiscreteCurvatures discrete_curvatures(const std::vector<Vec3>& verts, int n_s, int n_t) {
    return curvature_grid(
        verts, n_s, n_t,
        [](const Vec3& v) { return Eigen::Vector3d(v[0], v[1], v[2]); }, 0.0);
}

DiscreteCurvatures discrete_curvatures_s3(const std::vector<Vec4>& verts, int n_s, int n_t,
                                          double radius) {
    return curvature_grid(
        verts, n_s, n_t, [](const Vec4& v) { return Eigen::Vector4d(v[0], v[1], v[2], v[3]); },
        radius);
}

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    return out;
}

}  // namespace

void write_obj_polyline(const std::string& path, const std::vector<Vec3>& points) {
    std::ofstream out = open_out(path);
    for (const Vec3& p : points)
        out << "v " << format_g17(p[0]) << ' ' << format_g17(p[1]) << ' ' << format_g17(p[2])
            << '\n';
    const int n = static_cast<int>(points.size());
    for (int i = 1; i <= n; ++i) out << "l " << i << ' ' << (i % n) + 1 << '\n';
    if (!out) throw IoError("write failed: " + path);
}

void write_obj_quads(const std::string& path, const std::vector<Vec3>& verts, int n_s, int n_t) {
    if (static_cast<int>(verts.size()) != n_s * n_t)
        throw ParameterError("write_obj_quads: vertex count does not match the grid");
    std::ofstream out = open_out(path);
    for (const Vec3& p : verts)
        out << "v " << format_g17(p[0]) << ' ' << format_g17(p[1]) << ' ' << format_g17(p[2])
            << '\n';
    auto vid = [&](int j, int k) { return (j % n_s) * n_t + (k % n_t) + 1; };
    for (int j = 0; j < n_s; ++j)
        for (int k = 0; k < n_t; ++k)
            out << "f " << vid(j, k) << ' ' << vid(j + 1, k) << ' ' << vid(j + 1, k + 1) << ' '
                << vid(j, k + 1) << '\n';
    if (!out) throw IoError("write failed: " + path);
}

void write_columns(const std::string& path, const std::vector<std::string>& header_lines,
                   const std::vector<std::string>& column_names,
                   const std::vector<std::vector<double>>& columns) {
    if (columns.empty() || columns.size() != column_names.size())
        throw ParameterError("write_columns: names and columns must match");
    const size_t rows = columns[0].size();
    for (const auto& c : columns)
        if (c.size() != rows) throw ParameterError("write_columns: ragged columns");

    std::ofstream out = open_out(path);
    for (const std::string& h : header_lines) out << "# " << h << '\n';
    out << '#';
    for (const std::string& n : column_names) out << ' ' << n;
    out << '\n';
    for (size_t r = 0; r < rows; ++r) {
        for (size_t c = 0; c < columns.size(); ++c)
            out << (c ? " " : "") << format_g17(columns[c][r]);
        out << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

void write_report(const std::string& path,
                  const std::vector<std::pair<std::string, std::string>>& entries) {
    std::ofstream out = open_out(path);
    for (const auto& [key, value] : entries) out << key << " = " << value << '\n';
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace ct
