// vvfractal: construct V-variable fractals, render attractors, and estimate
// fractal dimension from products of random matrices. Every command is a
// pure function of (config, flags, seed); identical invocations produce
// byte-identical outputs.

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "vvf/dimension.hpp"
#include "vvf/errors.hpp"
#include "vvf/ifs.hpp"
#include "vvf/raster.hpp"
#include "vvf/render.hpp"
#include "vvf/vvar.hpp"

namespace {

constexpr std::uint64_t kDefaultSeed = 1729;

struct SystemOpts {
    std::string preset_name;
    std::string config_path;
    int v_override = 0;
};

struct SeedOpt {
    std::uint64_t seed = kDefaultSeed;
    bool given = false;
};

void add_system_options(CLI::App* cmd, SystemOpts& opts) {
    auto* preset = cmd->add_option("--preset", opts.preset_name,
                                   "Built-in system (sierpinski-half, sierpinski-pair, up-down, "
                                   "fern-lettuce)");
    auto* config = cmd->add_option("--config", opts.config_path, "Config file path");
    preset->excludes(config);
    config->excludes(preset);
    cmd->add_option("--V", opts.v_override, "Override the variability V")->check(CLI::PositiveNumber);
}

void add_seed_option(CLI::App* cmd, SeedOpt& opt) {
    cmd->add_option("--seed", opt.seed, "Master seed (all randomness derives from it)")
        ->each([&opt](const std::string&) { opt.given = true; });
}

vvf::SuperIfs resolve_system(const SystemOpts& opts) {
    if (opts.preset_name.empty() && opts.config_path.empty())
        throw CLI::RequiredError("--preset or --config");
    vvf::SuperIfs s = opts.preset_name.empty() ? vvf::load_config_file(opts.config_path)
                                               : vvf::preset(opts.preset_name);
    if (opts.v_override > 0) s.variability = opts.v_override;
    vvf::require_valid(s);
    return s;
}

std::uint64_t resolve_seed(const SeedOpt& opt) {
    if (!opt.given)
        std::cerr << "note: no --seed given; using default seed " << kDefaultSeed
                  << " (outputs are reproducible)\n";
    return opt.seed;
}

const vvf::Ifs& select_ifs(const vvf::SuperIfs& s, const std::string& name) {
    if (name.empty()) {
        if (s.ifss.size() != 1)
            throw vvf::ValidationError("config defines " + std::to_string(s.ifss.size()) +
                                       " IFSs; select one with --ifs <name>");
        return s.ifss.front();
    }
    for (const vvf::Ifs& ifs : s.ifss)
        if (ifs.name == name) return ifs;
    throw vvf::ValidationError("no IFS named '" + name + "' in this system");
}

void write_text_atomic(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw vvf::IoError("cannot open '" + tmp + "' for writing");
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!out) throw vvf::IoError("failed writing '" + tmp + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw vvf::IoError("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
}

// ---------------------------------------------------------------- attractor

struct AttractorOpts {
    SystemOpts system;
    SeedOpt seed;
    std::string ifs_name;
    std::string mode = "backward";
    int k = 12;
    std::int64_t points = 100000;
    std::int64_t burn_in = 50;
    int res = 1024;
    std::string out;
};

void run_attractor(const AttractorOpts& opts) {
    const vvf::SuperIfs s = resolve_system(opts.system);
    const vvf::Ifs& ifs = select_ifs(s, opts.ifs_name);
    const auto format = vvf::format_from_path(opts.out);

    if (opts.mode == "backward") {
        vvf::Raster current = vvf::Raster::full_square(opts.res, opts.res);
        for (int step = 1; step <= opts.k; ++step) {
            vvf::Raster next = vvf::hutchinson_step(ifs, current);
            std::cout << "k=" << step
                      << " d_H=" << vvf::format_double(vvf::hausdorff_distance(next, current))
                      << "\n";
            current = std::move(next);
        }
        vvf::write_image(vvf::to_greyscale(current, 1.0), opts.out, format);
    } else {
        const vvf::Raster measure = vvf::chaos_game(ifs, opts.points, opts.burn_in,
                                                    resolve_seed(opts.seed), opts.res, opts.res);
        vvf::write_image(vvf::to_greyscale(measure, 2.2), opts.out, format);
    }
    std::cout << "wrote " << opts.out << "\n";
}

// --------------------------------------------------------------------- vvar

struct VvarOpts {
    SystemOpts system;
    SeedOpt seed;
    int k = 20;
    int res = 1024;
    std::string out_dir;
    std::string records_path;
    bool measure = false;
};

void run_vvar(const VvarOpts& opts) {
    const vvf::SuperIfs s = resolve_system(opts.system);
    const std::uint64_t seed = resolve_seed(opts.seed);
    const auto kind = opts.measure ? vvf::RasterKind::measure : vvf::RasterKind::set;
    const double gamma = opts.measure ? 2.2 : 1.0;

    std::error_code ec;
    std::filesystem::create_directories(opts.out_dir, ec);
    if (ec) throw vvf::IoError("cannot create directory '" + opts.out_dir + "': " + ec.message());

    // Same record stream as run(s, initial, k, seed); unrolled so each
    // level's buffers can be written as they are produced.
    vvf::BufferState state = vvf::initial_state(s, opts.res, opts.res, kind);
    vvf::Rng rng(seed);
    std::vector<vvf::TransitionRecord> records;
    records.reserve(opts.k);
    for (int step = 1; step <= opts.k; ++step) {
        vvf::TransitionRecord rec = vvf::sample_transition(s, rng);
        state = vvf::step(state, rec, s);
        for (int v = 0; v < s.variability; ++v) {
            char name[64];
            std::snprintf(name, sizeof(name), "level_%03d_buffer_%d.pgm", state.level, v + 1);
            const auto path = (std::filesystem::path(opts.out_dir) / name).string();
            vvf::write_image(vvf::to_greyscale(state.buffers[v], gamma), path,
                             vvf::ImageFormat::pgm);
        }
        records.push_back(std::move(rec));
    }

    const std::string dump = vvf::format_record_dump(records, s);
    std::cout << dump;
    if (!opts.records_path.empty()) write_text_atomic(opts.records_path, dump);
    std::cout << "wrote " << opts.k * s.variability << " images to " << opts.out_dir << "\n";
}

// ---------------------------------------------------------------- dimension

struct DimensionOpts {
    SystemOpts system;
    SeedOpt seed;
    bool solve = false;
    std::string alpha_grid;
    int k = 5000;
    int chains = 64;
    double tol = 1e-3;
    std::string csv_path;
};

void parse_grid(const std::string& text, double& lo, double& hi, double& step) {
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw CLI::ValidationError("--alpha-grid", "expected <lo>:<hi>:<step>");
    try {
        lo = std::stod(text.substr(0, c1));
        hi = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
        step = std::stod(text.substr(c2 + 1));
    } catch (const std::exception&) {
        throw CLI::ValidationError("--alpha-grid", "expected <lo>:<hi>:<step>");
    }
    if (step <= 0.0 || hi < lo) throw CLI::ValidationError("--alpha-grid", "need step > 0 and hi >= lo");
}

void run_dimension(const DimensionOpts& opts) {
    const vvf::SuperIfs s = resolve_system(opts.system);
    const std::uint64_t seed = resolve_seed(opts.seed);

    // Without --solve the command emits a pressure curve; the default grid
    // covers the [d(1), d(infinity)] region.
    std::string grid = opts.alpha_grid;
    if (grid.empty() && !opts.solve) grid = "1.0:1.4:0.02";

    if (!grid.empty()) {
        double lo = 0.0, hi = 0.0, step = 0.0;
        parse_grid(grid, lo, hi, step);
        std::string csv = "alpha,gamma_hat,ci95,k,chains,V,seed\n";
        const int count = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
        for (int i = 0; i < count; ++i) {
            const double alpha = lo + i * step;
            const auto est = vvf::pressure_estimate(s, alpha, opts.k, opts.chains, seed);
            csv += vvf::format_double(alpha) + "," + vvf::format_double(est.gamma_hat) + "," +
                   (est.ci95_halfwidth ? vvf::format_double(*est.ci95_halfwidth) : "nan") + "," +
                   std::to_string(opts.k) + "," + std::to_string(opts.chains) + "," +
                   std::to_string(s.variability) + "," + std::to_string(seed) + "\n";
        }
        if (opts.csv_path.empty())
            std::cout << csv;
        else
            write_text_atomic(opts.csv_path, csv);
    }

    if (opts.solve) {
        const double d = vvf::solve_dimension(s, opts.tol, opts.k, opts.chains, seed);
        const auto at_root = vvf::pressure_estimate(s, d, opts.k, opts.chains, seed);
        std::string line = "d(V=" + std::to_string(s.variability) + ") = " + vvf::format_double(d);
        if (at_root.ci95_halfwidth) {
            // The pressure slope magnitude is at least |log r_max|, so this
            // converts the gamma CI into a conservative CI on the root.
            double r_max = 0.0;
            for (const auto& per_ifs : vvf::similitude_ratios(s))
                for (double r : per_ifs) r_max = std::max(r_max, r);
            const double d_ci = *at_root.ci95_halfwidth / -std::log(r_max);
            line += " +/- " + vvf::format_double(d_ci) + " (95% CI)";
        }
        line += "  [bracket tol " + vvf::format_double(opts.tol) + ", k=" + std::to_string(opts.k) +
                ", chains=" + std::to_string(opts.chains) + ", seed=" + std::to_string(seed) + "]";
        std::cout << line << "\n";
    }
}

// ---------------------------------------------------------------- superpose

struct SuperposeOpts {
    SystemOpts system;
    SeedOpt seed;
    int samples = 200;
    int burn_in = 15;
    int res = 1024;
    bool measure = false;
    std::string out;
};

void run_superpose(const SuperposeOpts& opts) {
    const vvf::SuperIfs s = resolve_system(opts.system);
    const std::uint64_t seed = resolve_seed(opts.seed);
    const auto kind = opts.measure ? vvf::RasterKind::measure : vvf::RasterKind::set;
    const auto format = vvf::format_from_path(opts.out);

    vvf::BufferState state = vvf::initial_state(s, opts.res, opts.res, kind);
    vvf::Rng rng(seed);
    for (int step = 0; step < opts.burn_in; ++step)
        state = vvf::step(state, vvf::sample_transition(s, rng), s);

    // Accumulates the density in collection order, which matches
    // superpose() applied to the collected state list.
    vvf::Raster density(opts.res, opts.res, vvf::RasterKind::measure);
    for (int sample = 0; sample < opts.samples; ++sample) {
        state = vvf::step(state, vvf::sample_transition(s, rng), s);
        for (const vvf::Raster& buffer : state.buffers)
            for (std::size_t i = 0; i < density.cells.size(); ++i)
                density.cells[i] += buffer.cells[i];
    }
    vvf::write_image(vvf::to_greyscale(density, 2.2), opts.out, format);
    std::cout << "superposed " << opts.samples << " states into " << opts.out << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"V-variable fractal toolkit: superIFS runs, attractor rendering, and\n"
                 "Monte Carlo dimension estimation from products of random matrices."};
    app.require_subcommand(1);

    AttractorOpts attractor;
    auto* cmd_attractor =
        app.add_subcommand("attractor", "Render a single-IFS attractor (backward process or chaos game)");
    add_system_options(cmd_attractor, attractor.system);
    add_seed_option(cmd_attractor, attractor.seed);
    cmd_attractor->add_option("--ifs", attractor.ifs_name, "IFS name when the system holds several");
    cmd_attractor->add_option("--mode", attractor.mode, "backward | chaos")
        ->check(CLI::IsMember({"backward", "chaos"}));
    cmd_attractor->add_option("--k", attractor.k, "Backward-process steps")->check(CLI::NonNegativeNumber);
    cmd_attractor->add_option("--points", attractor.points, "Chaos-game points");
    cmd_attractor->add_option("--burn-in", attractor.burn_in, "Chaos-game points to discard");
    cmd_attractor->add_option("--res", attractor.res, "Raster resolution")->check(CLI::PositiveNumber);
    cmd_attractor->add_option("--out", attractor.out, "Output image (.pgm/.ppm/.png)")->required();
    cmd_attractor->callback([&attractor] { run_attractor(attractor); });

    VvarOpts vvar;
    auto* cmd_vvar = app.add_subcommand("vvar", "Run the V-buffer forward algorithm, writing each level");
    add_system_options(cmd_vvar, vvar.system);
    add_seed_option(cmd_vvar, vvar.seed);
    cmd_vvar->add_option("--k", vvar.k, "Construction steps")->check(CLI::NonNegativeNumber);
    cmd_vvar->add_option("--res", vvar.res, "Raster resolution")->check(CLI::PositiveNumber);
    cmd_vvar->add_option("--out-dir", vvar.out_dir, "Directory for per-level buffer images")->required();
    cmd_vvar->add_option("--dump-records", vvar.records_path, "Write the record dump to this file");
    cmd_vvar->add_flag("--measure", vvar.measure, "Evolve measures instead of sets");
    cmd_vvar->callback([&vvar] { run_vvar(vvar); });

    DimensionOpts dimension;
    auto* cmd_dimension =
        app.add_subcommand("dimension", "Estimate the pressure function and solve for the dimension");
    add_system_options(cmd_dimension, dimension.system);
    add_seed_option(cmd_dimension, dimension.seed);
    cmd_dimension->add_flag("--solve", dimension.solve, "Solve gamma_V(d) = 0 by bisection");
    cmd_dimension->add_option("--alpha-grid", dimension.alpha_grid,
                              "Pressure-curve grid <lo>:<hi>:<step>, e.g. 1.0:1.4:0.02");
    cmd_dimension->add_option("--k", dimension.k, "Steps per chain")->check(CLI::PositiveNumber);
    cmd_dimension->add_option("--chains", dimension.chains, "Independent chains")
        ->check(CLI::PositiveNumber);
    cmd_dimension->add_option("--tol", dimension.tol, "Bisection bracket tolerance");
    cmd_dimension->add_option("--csv", dimension.csv_path, "Write the pressure curve CSV here");
    cmd_dimension->callback([&dimension] { run_dimension(dimension); });

    SuperposeOpts superpose;
    auto* cmd_superpose =
        app.add_subcommand("superpose", "Superpose post-burn-in states into one density image");
    add_system_options(cmd_superpose, superpose.system);
    add_seed_option(cmd_superpose, superpose.seed);
    cmd_superpose->add_option("--samples", superpose.samples, "States to collect")
        ->check(CLI::PositiveNumber);
    cmd_superpose->add_option("--burn-in", superpose.burn_in, "Steps discarded before collecting")
        ->check(CLI::NonNegativeNumber);
    cmd_superpose->add_option("--res", superpose.res, "Raster resolution")->check(CLI::PositiveNumber);
    cmd_superpose->add_flag("--measure", superpose.measure, "Evolve measures instead of sets");
    cmd_superpose->add_option("--out", superpose.out, "Output image (.pgm/.ppm/.png)")->required();
    cmd_superpose->callback([&superpose] { run_superpose(superpose); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const vvf::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
