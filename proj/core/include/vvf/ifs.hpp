#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "vvf/geometry.hpp"

namespace vvf {

/// One weighted IFS: maps f_1..f_M plus chaos-game selection probabilities.
struct Ifs {
    std::string name;
    std::vector<AffineMap> maps;
    std::vector<double> weights;

    int map_count() const { return static_cast<int>(maps.size()); }
};

/// A probability-weighted family of IFSs plus the variability parameter V.
struct SuperIfs {
    std::vector<Ifs> ifss;
    std::vector<double> probabilities;
    int variability = 1;  // V: number of buffers

    int ifs_count() const { return static_cast<int>(ifss.size()); }
};

/// Empty iff all invariants hold; each entry names the field and the failed
/// bound. Checked: positive weights summing to 1 (1e-9), positive IFS
/// probabilities summing to 1 (1e-9), strict per-map contractivity, V >= 1,
/// at least one map per IFS.
std::vector<std::string> validate(const SuperIfs& s);

/// Throws ValidationError listing all violations if validate(s) is nonempty.
void require_valid(const SuperIfs& s);

/// Built-in systems: "sierpinski-half", "sierpinski-pair", "up-down",
/// "fern-lettuce". Unknown names throw ValidationError naming the choices.
SuperIfs preset(const std::string& name);

const std::vector<std::string>& preset_names();

/// Parses the line-oriented config grammar:
///
///   # comment
///   superifs V=<int>
///   ifs <name> prob=<decimal>
///   map a=<dec> b=<dec> c=<dec> d=<dec> e=<dec> f=<dec> [weight=<dec>] [color: <12 decimals>]
///
/// Decimals are parsed exactly as written. Maps without weight= get uniform
/// weights 1/M (all-or-none per IFS). Throws ParseError with line/column on
/// syntax errors and ValidationError on semantic ones.
SuperIfs parse_config(std::string_view text);

/// Canonical form: shortest round-trip decimals, weight= always emitted,
/// color emitted only when present. parse_config(serialize_config(s)) == s.
std::string serialize_config(const SuperIfs& s);

SuperIfs load_config_file(const std::string& path);

/// Exact structural equality (coefficients compared as doubles).
bool structurally_equal(const SuperIfs& a, const SuperIfs& b);

double max_lipschitz(const SuperIfs& s);

/// Shortest decimal that round-trips to the same double (std::to_chars).
std::string format_double(double value);

}  // namespace vvf
