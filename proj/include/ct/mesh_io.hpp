#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ct/hopf_submersion.hpp"

namespace ct {

// Stereographic projection of p on S^3(radius) from a unit pole onto the
// equatorial 3-plane orthogonal to the pole. Coordinates of the image are
// reported in a fixed orthonormal basis of that plane (the identity basis
// when pole = e4).
Vec3 stereographic(const Vec4& p, const Vec4& pole, double radius, double eps_pole = 1e-3);

struct ProjectedMesh {
    int n_s = 0, n_t = 0;
    std::vector<Vec3> vertices;  // row-major, [j * n_t + k]
    Vec4 pole{0.0, 0.0, 0.0, 1.0};

    const Vec3& at(int j, int k) const { return vertices[static_cast<size_t>(j) * n_t + k]; }
};

// Projects a closed (n_s x n_t) grid on S^3(radius). If any vertex falls
// within eps_pole of the default pole e4 the pole is re-picked by a
// deterministic pseudo-random rotation until all vertices clear it.
ProjectedMesh project_mesh(const std::vector<Vec4>& vertices, int n_s, int n_t, double radius,
                           const Vec4& pole = Vec4{0.0, 0.0, 0.0, 1.0});

struct DiscreteCurvatures {
    std::vector<double> H, K;  // per-vertex; K is intrinsic (Gauss) curvature
    std::vector<char> valid;   // 0 where the grid metric degenerates
};

// Second-order centered-difference curvature estimates on a closed quad grid
// in R^3. H carries the sign of the cross(x_s, x_t) normal.
DiscreteCurvatures discrete_curvatures(const std::vector<Vec3>& verts, int n_s, int n_t);

// Same for a grid constrained to S^3(radius); K is the Gauss curvature of the
// surface inside the sphere (1/radius^2 + extrinsic determinant term).
DiscreteCurvatures discrete_curvatures_s3(const std::vector<Vec4>& verts, int n_s, int n_t,
                                          double radius);

std::string format_g17(double x);

void write_obj_polyline(const std::string& path, const std::vector<Vec3>& points);
void write_obj_quads(const std::string& path, const std::vector<Vec3>& verts, int n_s, int n_t);
void write_columns(const std::string& path, const std::vector<std::string>& header_lines,
                   const std::vector<std::string>& column_names,
                   const std::vector<std::vector<double>>& columns);
void write_report(const std::string& path,
                  const std::vector<std::pair<std::string, std::string>>& entries);

}  // namespace ct
