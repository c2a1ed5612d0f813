#pragma once

#include <array>
#include <optional>

namespace vvf {

using Rgb = std::array<double, 3>;

/// Point of the working domain. Spatial coordinates live in the unit square
/// [0,1]^2; the optional RGB triple is the 5-dimensional color extension.
struct Point {
    double x = 0.0;
    double y = 0.0;
    std::optional<Rgb> color;
};

/// Affine action on RGB coordinates: rgb' = linear * rgb + offset.
struct ColorMap {
    std::array<std::array<double, 3>, 3> linear{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    Rgb offset{0, 0, 0};
};

/// One affine plane map  (x,y) -> (a x + b y + e,  c x + d y + f),
/// optionally lifted to 5-D by a color part. Contractivity is validated at
/// IFS level, not per map.
struct AffineMap {
    double a = 1.0, b = 0.0;
    double c = 0.0, d = 1.0;
    double e = 0.0, f = 0.0;
    std::optional<ColorMap> color_part;
};

Point apply(const AffineMap& map, const Point& p);

/// Both singular values of the spatial linear part, largest first.
/// Closed form via the eigenvalues of A^T A.
std::array<double, 2> singular_values(const AffineMap& map);

/// Spatial Lipschitz constant: the largest singular value.
double lipschitz(const AffineMap& map);

/// The common scaling ratio if the map is a similitude (both singular values
/// agree within tol); absent otherwise.
std::optional<double> similitude_ratio(const AffineMap& map, double tol);

/// The similitude with ratio `ratio`, rotation `angle_rad` and the given
/// fixed point: x -> R (x - fix) + fix. Preset-building helper.
AffineMap similarity_about(double ratio, double angle_rad, double fix_x, double fix_y);

}  // namespace vvf
