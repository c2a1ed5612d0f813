#include "vvf/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace vvf {

Point apply(const AffineMap& map, const Point& p) {
    Point out;
    out.x = map.a * p.x + map.b * p.y + map.e;
    out.y = map.c * p.x + map.d * p.y + map.f;
    if (p.color) {
        if (map.color_part) {
            const ColorMap& cm = *map.color_part;
            Rgb c{};
            for (int i = 0; i < 3; ++i) {
                c[i] = cm.linear[i][0] * (*p.color)[0] + cm.linear[i][1] * (*p.color)[1] +
                       cm.linear[i][2] * (*p.color)[2] + cm.offset[i];
            }
            out.color = c;
        } else {
            out.color = p.color;  // spatial-only maps pass color through
        }
    }
    return out;
}

std::array<double, 2> singular_values(const AffineMap& m) {
    // Closed-form 2x2 SVD. Writing A in its rotation/reflection split gives
    // the eigenvalues of A^T A as (q +- r)^2 with q, r below; this form has
    // no cancellation, so exact similitudes come out with equal values.
    const double q = std::hypot(0.5 * (m.a + m.d), 0.5 * (m.c - m.b));
    const double r = std::hypot(0.5 * (m.a - m.d), 0.5 * (m.c + m.b));
    return {q + r, std::abs(q - r)};
}

double lipschitz(const AffineMap& map) { return singular_values(map)[0]; }

std::optional<double> similitude_ratio(const AffineMap& map, double tol) {
    const auto sv = singular_values(map);
    if (sv[0] - sv[1] > tol) return std::nullopt;
    return 0.5 * (sv[0] + sv[1]);
}

AffineMap similarity_about(double ratio, double angle_rad, double fix_x, double fix_y) {
    AffineMap m;
    const double co = ratio * std::cos(angle_rad);
    const double si = ratio * std::sin(angle_rad);
    m.a = co;
    m.b = -si;
    m.c = si;
    m.d = co;
    m.e = fix_x - (m.a * fix_x + m.b * fix_y);
    m.f = fix_y - (m.c * fix_x + m.d * fix_y);
    return m;
}

}  // namespace vvf
