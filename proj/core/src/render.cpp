#include "vvf/render.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "vvf/errors.hpp"

namespace vvf {

ImageBuffer to_greyscale(const Raster& measure, double gamma_correction) {
    if (gamma_correction <= 0.0)
        throw std::invalid_argument("to_greyscale: gamma_correction must be > 0");
    ImageBuffer img(measure.width, measure.height, 1);
    const double max_mass = measure.max_mass();
    if (max_mass <= 0.0) return img;  // uniform black
    const double inv_gamma = 1.0 / gamma_correction;
    for (int iy = 0; iy < measure.height; ++iy) {
        const int row = measure.height - 1 - iy;  // image top row = largest y
        for (int ix = 0; ix < measure.width; ++ix) {
            const double mass = measure.at(ix, iy);
            if (mass <= 0.0) continue;
            const double t = std::pow(mass / max_mass, inv_gamma);
            img.pixels[std::size_t(row) * measure.width + ix] =
                static_cast<std::uint8_t>(std::llround(255.0 * std::min(t, 1.0)));
        }
    }
    return img;
}

ImageBuffer color_chaos_game(const SuperIfs& s, std::int64_t n_points, std::uint64_t seed,
                             int width, int height, int k_steps, Rgb initial_color) {
    require_valid(s);
    if (n_points <= 0) throw std::invalid_argument("color_chaos_game: n_points must be > 0");
    for (const Ifs& ifs : s.ifss)
        for (const AffineMap& m : ifs.maps)
            if (!m.color_part)
                throw ValidationError("color_chaos_game: ifs '" + ifs.name +
                                      "' has maps without color parts");

    const int v_count = s.variability;
    Rng rng(seed);

    // Level-1 buffers: uniformly scattered points with the initial color.
    // Draw order: buffer-major, then x before y.
    std::vector<std::vector<Point>> buffers(v_count);
    for (int v = 0; v < v_count; ++v) {
        buffers[v].resize(n_points);
        for (auto& p : buffers[v]) {
            p.x = rng.next_double();
            p.y = rng.next_double();
            p.color = initial_color;
        }
    }

    // One level: sample the transition, then refill every buffer by
    // resampling its chosen inputs (map slot by weight, then a uniform
    // particle of the slot's input buffer).
    for (int k = 0; k < k_steps; ++k) {
        const TransitionRecord rec = sample_transition(s, rng);
        std::vector<std::vector<Point>> next(v_count);
        for (int v = 0; v < v_count; ++v) {
            const BufferChoice& choice = rec.choices[v];
            const Ifs& ifs = s.ifss[choice.ifs_index];
            next[v].resize(n_points);
            for (std::int64_t t = 0; t < n_points; ++t) {
                const double u = rng.next_double();
                std::size_t i = 0;
                double acc = 0.0;
                for (; i + 1 < ifs.maps.size(); ++i) {
                    acc += ifs.weights[i];
                    if (u < acc) break;
                }
                const auto& source = buffers[choice.inputs[i]];
                const Point& sample =
                    source[rng.next_index(static_cast<std::uint32_t>(source.size()))];
                next[v][t] = apply(ifs.maps[i], sample);
            }
        }
        buffers = std::move(next);
    }

    // Running-average RGB deposition over all buffers.
    std::vector<double> sums(std::size_t(width) * height * 3, 0.0);
    std::vector<std::uint32_t> counts(std::size_t(width) * height, 0);
    for (const auto& buffer : buffers) {
        for (const Point& p : buffer) {
            const int ix = std::clamp(static_cast<int>(std::floor(p.x * width)), 0, width - 1);
            const int iy = std::clamp(static_cast<int>(std::floor(p.y * height)), 0, height - 1);
            const std::size_t cell = std::size_t(iy) * width + ix;
            for (int ch = 0; ch < 3; ++ch) sums[cell * 3 + ch] += (*p.color)[ch];
            ++counts[cell];
        }
    }

    ImageBuffer img(width, height, 3);
    for (int iy = 0; iy < height; ++iy) {
        const int row = height - 1 - iy;
        for (int ix = 0; ix < width; ++ix) {
            const std::size_t cell = std::size_t(iy) * width + ix;
            if (counts[cell] == 0) continue;
            for (int ch = 0; ch < 3; ++ch) {
                const double avg = sums[cell * 3 + ch] / counts[cell];
                img.pixels[(std::size_t(row) * width + ix) * 3 + ch] =
                    static_cast<std::uint8_t>(std::llround(255.0 * std::clamp(avg, 0.0, 1.0)));
            }
        }
    }
    return img;
}

ImageBuffer superpose(const std::vector<BufferState>& states, double gamma_correction) {
    if (states.empty()) throw std::invalid_argument("superpose: no states");
    const Raster& first = states.front().buffers.at(0);
    Raster density(first.width, first.height, RasterKind::measure);
    for (const BufferState& state : states) {
        for (const Raster& buffer : state.buffers) {
            if (!buffer.same_shape(density))
                throw std::invalid_argument("superpose: resolution mismatch");
            for (std::size_t i = 0; i < density.cells.size(); ++i)
                density.cells[i] += buffer.cells[i];
        }
    }
    return to_greyscale(density, gamma_correction);
}

ImageFormat format_from_path(const std::string& path) {
    const auto dot = path.find_last_of('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (ext == "pgm") return ImageFormat::pgm;
    if (ext == "ppm") return ImageFormat::ppm;
    if (ext == "png") return ImageFormat::png;
    throw std::invalid_argument("unsupported image extension '" + ext + "' (use pgm, ppm or png)");
}

namespace {

void append_u32_be(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void append_png_chunk(std::vector<std::uint8_t>& out, const char type[4],
                      const std::vector<std::uint8_t>& data) {
    append_u32_be(out, static_cast<std::uint32_t>(data.size()));
    const std::size_t crc_start = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), data.begin(), data.end());
    const auto crc = crc32(0L, out.data() + crc_start, static_cast<uInt>(out.size() - crc_start));
    append_u32_be(out, static_cast<std::uint32_t>(crc));
}

// Fixed encoder configuration: 8-bit grey/RGB, filter 0 on every scanline,
// zlib level 6. Output bytes depend only on the pixel data.
std::vector<std::uint8_t> encode_png(const ImageBuffer& img) {
    std::vector<std::uint8_t> out = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};

    std::vector<std::uint8_t> ihdr;
    append_u32_be(ihdr, static_cast<std::uint32_t>(img.width));
    append_u32_be(ihdr, static_cast<std::uint32_t>(img.height));
    ihdr.push_back(8);                                   // bit depth
    ihdr.push_back(img.channels == 1 ? 0 : 2);           // greyscale / truecolor
    ihdr.push_back(0);                                   // compression
    ihdr.push_back(0);                                   // filter method
    ihdr.push_back(0);                                   // no interlace
    append_png_chunk(out, "IHDR", ihdr);

    const std::size_t stride = std::size_t(img.width) * img.channels;
    std::vector<std::uint8_t> raw;
    raw.reserve((stride + 1) * img.height);
    for (int row = 0; row < img.height; ++row) {
        raw.push_back(0);  // filter type none
        const auto* begin = img.pixels.data() + std::size_t(row) * stride;
        raw.insert(raw.end(), begin, begin + stride);
    }

    uLongf bound = compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> idat(bound);
    if (compress2(idat.data(), &bound, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK)
        throw std::runtime_error("png: zlib compression failed");
    idat.resize(bound);
    append_png_chunk(out, "IDAT", idat);

    append_png_chunk(out, "IEND", {});
    return out;
}

std::vector<std::uint8_t> encode_pnm(const ImageBuffer& img, bool color) {
    const char* magic = color ? "P6" : "P5";
    std::string header = std::string(magic) + "\n" + std::to_string(img.width) + " " +
                         std::to_string(img.height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), img.pixels.begin(), img.pixels.end());
    return out;
}

}  // namespace

std::vector<std::uint8_t> encode_image(const ImageBuffer& img, ImageFormat format) {
    if (img.width <= 0 || img.height <= 0) throw std::invalid_argument("encode_image: empty image");
    switch (format) {
        case ImageFormat::pgm:
            if (img.channels != 1)
                throw std::invalid_argument("pgm requires a single-channel image");
            return encode_pnm(img, false);
        case ImageFormat::ppm:
            if (img.channels != 3) throw std::invalid_argument("ppm requires a 3-channel image");
            return encode_pnm(img, true);
        case ImageFormat::png:
            if (img.channels != 1 && img.channels != 3)
                throw std::invalid_argument("png requires 1 or 3 channels");
            return encode_png(img);
    }
    throw std::invalid_argument("encode_image: unknown format");
}

void write_image(const ImageBuffer& img, const std::string& path, ImageFormat format) {
    const auto bytes = encode_image(img, format);
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp + "' for writing");
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
        if (!out) throw IoError("failed writing '" + tmp + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
}

ImageBuffer decode_pnm(const std::vector<std::uint8_t>& bytes) {
    const auto fail = [] { throw std::invalid_argument("decode_pnm: not a canonical P5/P6 file"); };
    if (bytes.size() < 2) fail();
    const bool color = bytes[1] == '6';
    if (bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6')) fail();

    // Canonical layout only: "P5\n<w> <h>\n255\n" followed by raw samples.
    std::size_t pos = 2;
    const auto read_int = [&]() -> int {
        while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
        int value = 0;
        bool any = false;
        while (pos < bytes.size() && std::isdigit(bytes[pos])) {
            value = value * 10 + (bytes[pos] - '0');
            ++pos;
            any = true;
        }
        if (!any) fail();
        return value;
    };
    const int w = read_int();
    const int h = read_int();
    const int maxval = read_int();
    if (maxval != 255 || pos >= bytes.size() || !std::isspace(bytes[pos])) fail();
    ++pos;  // single whitespace after maxval

    ImageBuffer img(w, h, color ? 3 : 1);
    if (bytes.size() - pos != img.pixels.size()) fail();
    std::copy(bytes.begin() + static_cast<std::ptrdiff_t>(pos), bytes.end(), img.pixels.begin());
    return img;
}

}  // namespace vvf
