#pragma once

#include <cstdint>
#include <vector>

#include "vvf/ifs.hpp"

namespace vvf {

enum class RasterKind { set, measure };

/// Discretization of the unit square: cell (ix,iy) covers
/// [ix/w,(ix+1)/w) x [iy/h,(iy+1)/h), iy = 0 at the bottom. Set rasters hold
/// masses in {0,1}; measure rasters hold nonnegative masses. Points binned
/// into the grid are clamped to the boundary cells, so deposited mass is
/// conserved exactly.
struct Raster {
    int width = 0;
    int height = 0;
    RasterKind kind = RasterKind::set;
    std::vector<double> cells;  // row-major: cells[iy * width + ix]

    Raster() = default;
    Raster(int w, int h, RasterKind k) : width(w), height(h), kind(k), cells(std::size_t(w) * h, 0.0) {}

    static Raster full_square(int w, int h);      // set raster, all cells 1
    static Raster uniform_measure(int w, int h);  // total mass 1, spread evenly

    double& at(int ix, int iy) { return cells[std::size_t(iy) * width + ix]; }
    double at(int ix, int iy) const { return cells[std::size_t(iy) * width + ix]; }

    double center_x(int ix) const { return (ix + 0.5) / width; }
    double center_y(int iy) const { return (iy + 0.5) / height; }

    int clamp_ix(double x) const;
    int clamp_iy(double y) const;

    void deposit(double x, double y, double mass);
    void mark(double x, double y);  // set-raster deposit (cell := 1)

    std::int64_t occupied_count() const;
    double total_mass() const;
    double max_mass() const;
    bool empty() const;
    bool same_shape(const Raster& other) const {
        return width == other.width && height == other.height;
    }
};

/// One application of the set map T -> union of f_m(T): every occupied cell
/// center is pushed through each map and the covering cell is set.
Raster hutchinson_step(const Ifs& ifs, const Raster& r);

/// k-fold composition of hutchinson_step.
Raster backward_process(const Ifs& ifs, const Raster& initial, int k);

/// Random orbit from (0.5, 0.5), map m drawn with probability p_m (one RNG
/// draw per step). The first burn_in points are discarded; each retained
/// point deposits unit mass. Total deposited mass is exactly n_points.
Raster chaos_game(const Ifs& ifs, std::int64_t n_points, std::int64_t burn_in,
                  std::uint64_t seed, int width = 1024, int height = 1024);

/// Symmetric max-min distance between occupied cell centers, in units of the
/// domain side. Both rasters must be nonempty set rasters of equal shape.
double hausdorff_distance(const Raster& a, const Raster& b);

/// Exact squared Euclidean distance (domain units) from each cell center to
/// the nearest occupied cell center. Unoccupied-everywhere input yields +inf.
std::vector<double> squared_distance_map(const Raster& a);

/// Set raster whose cells lie within `pixels` chebyshev steps of an occupied
/// cell of `a`.
Raster dilate(const Raster& a, int pixels);

/// True iff every occupied cell of `a` is occupied in `b`.
bool subset_of(const Raster& a, const Raster& b);

}  // namespace vvf
