#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vvf/vvar.hpp"

namespace vvf {

/// 8-bit image, row-major with the top row first (raster y axis points up,
/// so row 0 of the image is the top of the domain). channels is 1 (grey)
/// or 3 (RGB).
struct ImageBuffer {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<std::uint8_t> pixels;

    ImageBuffer() = default;
    ImageBuffer(int w, int h, int ch)
        : width(w), height(h), channels(ch), pixels(std::size_t(w) * h * ch, 0) {}
};

/// Density to greyscale: intensity = (mass / max mass)^(1/gamma_correction),
/// scaled to 8 bits. An all-zero raster maps to uniform black.
ImageBuffer to_greyscale(const Raster& measure, double gamma_correction = 2.2);

/// The V-variable forward process on colored point sets: V buffers of
/// n_points 5-D samples, resampled through the recorded transitions for
/// k_steps levels, then deposited as per-pixel running-average RGB. Every map
/// must carry a color part. Color transforms consume no RNG draws, so the
/// spatial trajectory matches a color-stripped run with the same seed.
ImageBuffer color_chaos_game(const SuperIfs& s, std::int64_t n_points, std::uint64_t seed,
                             int width = 1024, int height = 1024, int k_steps = 30,
                             Rgb initial_color = {0.5, 0.5, 0.5});

/// Sums every buffer of every state into one density raster and renders it
/// with to_greyscale. All rasters must share one resolution.
ImageBuffer superpose(const std::vector<BufferState>& states, double gamma_correction = 2.2);

enum class ImageFormat { pgm, ppm, png };

/// Infers pgm/ppm/png from the path extension.
ImageFormat format_from_path(const std::string& path);

/// Canonical encodings: PGM is binary P5, maxval 255, no comments; PPM is
/// binary P6 likewise; PNG is 8-bit grey or RGB with one fixed zlib setting.
std::vector<std::uint8_t> encode_image(const ImageBuffer& img, ImageFormat format);

/// Encodes and writes via a temp file + rename. Throws IoError with the path
/// on failure.
void write_image(const ImageBuffer& img, const std::string& path, ImageFormat format);

/// Decoder for the canonical binary PGM/PPM layouts (round-trip checks,
/// golden fixtures).
ImageBuffer decode_pnm(const std::vector<std::uint8_t>& bytes);

}  // namespace vvf
