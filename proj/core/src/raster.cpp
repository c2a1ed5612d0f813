#include "vvf/raster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "vvf/rng.hpp"

namespace vvf {

Raster Raster::full_square(int w, int h) {
    Raster r(w, h, RasterKind::set);
    std::fill(r.cells.begin(), r.cells.end(), 1.0);
    return r;
}

Raster Raster::uniform_measure(int w, int h) {
    Raster r(w, h, RasterKind::measure);
    const double per_cell = 1.0 / (static_cast<double>(w) * h);
    std::fill(r.cells.begin(), r.cells.end(), per_cell);
    return r;
}

int Raster::clamp_ix(double x) const {
    const int ix = static_cast<int>(std::floor(x * width));
    return std::clamp(ix, 0, width - 1);
}

int Raster::clamp_iy(double y) const {
    const int iy = static_cast<int>(std::floor(y * height));
    return std::clamp(iy, 0, height - 1);
}

void Raster::deposit(double x, double y, double mass) { at(clamp_ix(x), clamp_iy(y)) += mass; }

void Raster::mark(double x, double y) { at(clamp_ix(x), clamp_iy(y)) = 1.0; }

std::int64_t Raster::occupied_count() const {
    std::int64_t n = 0;
    for (double v : cells) n += (v > 0.0);
    return n;
}

double Raster::total_mass() const {
    double sum = 0.0;
    for (double v : cells) sum += v;
    return sum;
}

double Raster::max_mass() const {
    double m = 0.0;
    for (double v : cells) m = std::max(m, v);
    return m;
}

bool Raster::empty() const {
    for (double v : cells)
        if (v > 0.0) return false;
    return true;
}

Raster hutchinson_step(const Ifs& ifs, const Raster& r) {
    if (r.kind != RasterKind::set)
        throw std::invalid_argument("hutchinson_step expects a set raster");
    Raster out(r.width, r.height, RasterKind::set);
    for (int iy = 0; iy < r.height; ++iy) {
        const double cy = r.center_y(iy);
        for (int ix = 0; ix < r.width; ++ix) {
            if (r.at(ix, iy) <= 0.0) continue;
            const double cx = r.center_x(ix);
            for (const AffineMap& m : ifs.maps) {
                out.mark(m.a * cx + m.b * cy + m.e, m.c * cx + m.d * cy + m.f);
            }
        }
    }
    return out;
}

Raster backward_process(const Ifs& ifs, const Raster& initial, int k) {
    Raster r = initial;
    for (int i = 0; i < k; ++i) r = hutchinson_step(ifs, r);
    return r;
}

Raster chaos_game(const Ifs& ifs, std::int64_t n_points, std::int64_t burn_in,
                  std::uint64_t seed, int width, int height) {
    if (n_points <= 0) throw std::invalid_argument("chaos_game: n_points must be > 0");
    if (burn_in < 0) throw std::invalid_argument("chaos_game: burn_in must be >= 0");
    Raster out(width, height, RasterKind::measure);
    Rng rng(seed);
    double x = 0.5, y = 0.5;
    const std::size_t map_count = ifs.maps.size();
    for (std::int64_t i = 0; i < burn_in + n_points; ++i) {
        const double u = rng.next_double();
        std::size_t m = 0;
        double acc = 0.0;
        for (; m + 1 < map_count; ++m) {
            acc += ifs.weights[m];
            if (u < acc) break;
        }
        const AffineMap& f = ifs.maps[m];
        const double nx = f.a * x + f.b * y + f.e;
        const double ny = f.c * x + f.d * y + f.f;
        x = nx;
        y = ny;
        if (i >= burn_in) out.deposit(x, y, 1.0);
    }
    return out;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1-D squared distance transform (Felzenszwalb-Huttenlocher lower envelope)
// with sample spacing `h`: out[i] = min_j (h*(i-j))^2 + f[j].
void edt_1d(const double* f, double* out, int n, double h, int* v, double* z) {
    int k = 0;
    v[0] = 0;
    z[0] = -kInf;
    z[1] = kInf;
    const double h2 = h * h;
    for (int q = 1; q < n; ++q) {
        if (f[q] == kInf) continue;
        if (f[v[0]] == kInf) {
            k = 0;
            v[0] = q;
            z[0] = -kInf;
            z[1] = kInf;
            continue;
        }
        double s;
        for (;;) {
            const int p = v[k];
            s = ((f[q] + h2 * q * q) - (f[p] + h2 * p * p)) / (2.0 * h2 * (q - p));
            if (s > z[k]) break;
            --k;
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kInf;
    }
    if (f[v[0]] == kInf) {  // empty row/column
        for (int q = 0; q < n; ++q) out[q] = kInf;
        return;
    }
    int k2 = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k2 + 1] < q) ++k2;
        const double d = h * (q - v[k2]);
        out[q] = d * d + f[v[k2]];
    }
}

}  // namespace

std::vector<double> squared_distance_map(const Raster& a) {
    const int w = a.width, h = a.height;
    std::vector<double> dist(std::size_t(w) * h);
    for (std::size_t i = 0; i < dist.size(); ++i) dist[i] = a.cells[i] > 0.0 ? 0.0 : kInf;

    const int n = std::max(w, h);
    std::vector<double> f(n), out(n), z(n + 1);
    std::vector<int> v(n);

    // rows: distance along x with spacing 1/w
    for (int iy = 0; iy < h; ++iy) {
        double* row = dist.data() + std::size_t(iy) * w;
        std::copy(row, row + w, f.data());
        edt_1d(f.data(), out.data(), w, 1.0 / w, v.data(), z.data());
        std::copy(out.data(), out.data() + w, row);
    }
    // columns: distance along y with spacing 1/h
    for (int ix = 0; ix < w; ++ix) {
        for (int iy = 0; iy < h; ++iy) f[iy] = dist[std::size_t(iy) * w + ix];
        edt_1d(f.data(), out.data(), h, 1.0 / h, v.data(), z.data());
        for (int iy = 0; iy < h; ++iy) dist[std::size_t(iy) * w + ix] = out[iy];
    }
    return dist;
}

namespace {

double directed_hausdorff(const Raster& from, const std::vector<double>& sq_dist_to_other) {
    double worst = 0.0;
    for (std::size_t i = 0; i < from.cells.size(); ++i)
        if (from.cells[i] > 0.0) worst = std::max(worst, sq_dist_to_other[i]);
    return std::sqrt(worst);
}

}  // namespace

double hausdorff_distance(const Raster& a, const Raster& b) {
    if (!a.same_shape(b))
        throw std::invalid_argument("hausdorff_distance: resolution mismatch");
    if (a.empty() || b.empty())
        throw std::invalid_argument("empty set has no Hausdorff distance");
    const auto da = squared_distance_map(a);
    const auto db = squared_distance_map(b);
    return std::max(directed_hausdorff(a, db), directed_hausdorff(b, da));
}

Raster dilate(const Raster& a, int pixels) {
    Raster out(a.width, a.height, RasterKind::set);
    for (int iy = 0; iy < a.height; ++iy) {
        for (int ix = 0; ix < a.width; ++ix) {
            if (a.at(ix, iy) <= 0.0) continue;
            const int x0 = std::max(0, ix - pixels), x1 = std::min(a.width - 1, ix + pixels);
            const int y0 = std::max(0, iy - pixels), y1 = std::min(a.height - 1, iy + pixels);
            for (int yy = y0; yy <= y1; ++yy)
                for (int xx = x0; xx <= x1; ++xx) out.at(xx, yy) = 1.0;
        }
    }
    return out;
}

bool subset_of(const Raster& a, const Raster& b) {
    if (!a.same_shape(b)) return false;
    for (std::size_t i = 0; i < a.cells.size(); ++i)
        if (a.cells[i] > 0.0 && !(b.cells[i] > 0.0)) return false;
    return true;
}

}  // namespace vvf
