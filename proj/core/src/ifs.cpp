#include "vvf/ifs.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "vvf/errors.hpp"

namespace vvf {

namespace {

constexpr double kProbabilityTol = 1e-9;

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

bool valid_identifier(const std::string& name) {
    if (name.empty()) return false;
    for (char c : name) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '_' || c == '-';
        if (!ok) return false;
    }
    return true;
}

bool map_finite(const AffineMap& m) {
    for (double v : {m.a, m.b, m.c, m.d, m.e, m.f})
        if (!std::isfinite(v)) return false;
    if (m.color_part) {
        for (const auto& row : m.color_part->linear)
            for (double v : row)
                if (!std::isfinite(v)) return false;
        for (double v : m.color_part->offset)
            if (!std::isfinite(v)) return false;
    }
    return true;
}

}  // namespace

std::vector<std::string> validate(const SuperIfs& s) {
    std::vector<std::string> out;
    if (s.variability < 1) out.push_back("V must be >= 1 (got " + std::to_string(s.variability) + ")");
    if (s.ifss.empty()) out.push_back("superifs: needs at least one ifs");
    if (s.probabilities.size() != s.ifss.size()) {
        out.push_back("superifs: expected " + std::to_string(s.ifss.size()) +
                      " probabilities, got " + std::to_string(s.probabilities.size()));
    } else if (!s.ifss.empty()) {
        double sum = 0.0;
        for (std::size_t n = 0; n < s.probabilities.size(); ++n) {
            if (!(s.probabilities[n] > 0.0))
                out.push_back("superifs: probability " + std::to_string(n + 1) + " must be > 0");
            sum += s.probabilities[n];
        }
        if (std::abs(sum - 1.0) > kProbabilityTol)
            out.push_back("superifs: probabilities sum " + format_double(sum) + " != 1");
    }
    for (const Ifs& ifs : s.ifss) {
        const std::string tag = "ifs '" + ifs.name + "'";
        if (!valid_identifier(ifs.name))
            out.push_back(tag + ": name must be a nonempty identifier ([A-Za-z0-9_-]+)");
        if (ifs.maps.empty()) {
            out.push_back(tag + ": needs at least one map");
            continue;
        }
        if (ifs.weights.size() != ifs.maps.size()) {
            out.push_back(tag + ": expected " + std::to_string(ifs.maps.size()) +
                          " weights, got " + std::to_string(ifs.weights.size()));
        } else {
            double sum = 0.0;
            for (std::size_t m = 0; m < ifs.weights.size(); ++m) {
                if (!(ifs.weights[m] > 0.0))
                    out.push_back(tag + ": weight " + std::to_string(m + 1) + " must be > 0");
                sum += ifs.weights[m];
            }
            if (std::abs(sum - 1.0) > kProbabilityTol)
                out.push_back(tag + ": weights sum " + format_double(sum) + " != 1");
        }
        for (std::size_t m = 0; m < ifs.maps.size(); ++m) {
            const std::string map_tag = tag + " map " + std::to_string(m + 1);
            if (!map_finite(ifs.maps[m])) {
                out.push_back(map_tag + ": non-finite coefficient");
                continue;
            }
            const double lip = lipschitz(ifs.maps[m]);
            if (!(lip < 1.0))
                out.push_back(map_tag + ": not contractive (lipschitz = " + format_double(lip) + ")");
        }
    }
    return out;
}

void require_valid(const SuperIfs& s) {
    const auto violations = validate(s);
    if (!violations.empty()) throw ValidationError(join(violations, "; "));
}

namespace {

AffineMap homothety(double ratio, double fix_x, double fix_y) {
    AffineMap m;
    m.a = m.d = ratio;
    m.b = m.c = 0.0;
    m.e = (1.0 - ratio) * fix_x;
    m.f = (1.0 - ratio) * fix_y;
    return m;
}

// Triangle vertices used by the Sierpinski presets.
constexpr double kAx = 0.0, kAy = 0.0;
constexpr double kBx = 1.0, kBy = 0.0;
constexpr double kCx = 0.5;
const double kCy = std::sqrt(3.0) / 2.0;

Ifs sierpinski_ifs(const std::string& name, double ratio) {
    Ifs ifs;
    ifs.name = name;
    ifs.maps = {homothety(ratio, kAx, kAy), homothety(ratio, kBx, kBy), homothety(ratio, kCx, kCy)};
    ifs.weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    return ifs;
}

AffineMap coeffs(double a, double b, double c, double d, double e, double f) {
    AffineMap m;
    m.a = a; m.b = b; m.c = c; m.d = d; m.e = e; m.f = f;
    return m;
}

ColorMap color_toward(double strength, const Rgb& target) {
    ColorMap cm;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) cm.linear[i][j] = (i == j) ? 1.0 - strength : 0.0;
        cm.offset[i] = strength * target[i];
    }
    return cm;
}

// Conjugates a map by the scaling x -> (x - origin) / scale so that systems
// designed in other frames land in the unit square.
AffineMap rescale_into_unit(AffineMap m, double scale, double ox, double oy) {
    m.e = (m.a * ox + m.b * oy + m.e - ox) / scale;
    m.f = (m.c * ox + m.d * oy + m.f - oy) / scale;
    return m;
}

Ifs fern_ifs() {
    // Classic 4-map affine fern in its usual frame (x in [-2.19, 2.66],
    // y in [0, 10]), rescaled into the unit square.
    const double scale = 10.4;
    const double ox = -5.0, oy = -0.2;
    Ifs ifs;
    ifs.name = "fern";
    ifs.maps = {
        rescale_into_unit(coeffs(0.0, 0.0, 0.0, 0.16, 0.0, 0.0), scale, ox, oy),
        rescale_into_unit(coeffs(0.85, 0.04, -0.04, 0.85, 0.0, 1.6), scale, ox, oy),
        rescale_into_unit(coeffs(0.2, -0.26, 0.23, 0.22, 0.0, 1.6), scale, ox, oy),
        rescale_into_unit(coeffs(-0.15, 0.28, 0.26, 0.24, 0.0, 0.44), scale, ox, oy),
    };
    ifs.weights = {0.01, 0.85, 0.07, 0.07};
    ifs.maps[0].color_part = color_toward(0.35, {0.45, 0.32, 0.12});
    ifs.maps[1].color_part = color_toward(0.20, {0.08, 0.50, 0.12});
    ifs.maps[2].color_part = color_toward(0.30, {0.20, 0.70, 0.25});
    ifs.maps[3].color_part = color_toward(0.30, {0.32, 0.78, 0.30});
    return ifs;
}

Ifs lettuce_ifs() {
    // Lettuce-styled rosette: three rotated lobes plus a core, all similitudes.
    Ifs ifs;
    ifs.name = "lettuce";
    ifs.maps = {
        similarity_about(0.60, 0.50, 0.28, 0.30),
        similarity_about(0.60, -0.50, 0.72, 0.30),
        similarity_about(0.52, 1.05, 0.50, 0.68),
        similarity_about(0.38, -0.15, 0.50, 0.16),
    };
    ifs.weights = {0.3, 0.3, 0.25, 0.15};
    ifs.maps[0].color_part = color_toward(0.30, {0.62, 0.85, 0.45});
    ifs.maps[1].color_part = color_toward(0.30, {0.55, 0.80, 0.40});
    ifs.maps[2].color_part = color_toward(0.30, {0.70, 0.90, 0.50});
    ifs.maps[3].color_part = color_toward(0.35, {0.45, 0.70, 0.35});
    return ifs;
}

}  // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {"sierpinski-half", "sierpinski-pair", "up-down",
                                                   "fern-lettuce"};
    return names;
}

SuperIfs preset(const std::string& name) {
    SuperIfs s;
    if (name == "sierpinski-half") {
        s.ifss = {sierpinski_ifs("F", 0.5)};
        s.probabilities = {1.0};
        s.variability = 1;
    } else if (name == "sierpinski-pair") {
        s.ifss = {sierpinski_ifs("F", 0.5), sierpinski_ifs("G", 1.0 / 3.0)};
        s.probabilities = {0.5, 0.5};
        s.variability = 5;
    } else if (name == "up-down") {
        Ifs up;
        up.name = "U";
        up.maps = {coeffs(0.5, 0.375, 0.5, -0.375, -0.0625, 0.5625),
                   coeffs(0.5, -0.375, -0.5, -0.375, 0.5625, 1.0625)};
        up.weights = {0.5, 0.5};
        Ifs down;
        down.name = "D";
        down.maps = {coeffs(0.5, 0.375, -0.5, 0.375, -0.0625, 0.4375),
                     coeffs(0.5, -0.375, 0.5, 0.375, 0.5625, -0.0625)};
        down.weights = {0.5, 0.5};
        s.ifss = {up, down};
        s.probabilities = {0.5, 0.5};
        s.variability = 2;
    } else if (name == "fern-lettuce") {
        s.ifss = {fern_ifs(), lettuce_ifs()};
        s.probabilities = {0.5, 0.5};
        s.variability = 2;
    } else {
        throw ValidationError("unknown preset '" + name + "'; available: " +
                              join(preset_names(), ", "));
    }
    return s;
}

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

namespace {

struct Token {
    std::string_view text;
    int column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        if (line[i] == '#') break;
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
               line[i] != '#')
            ++i;
        out.push_back({line.substr(start, i - start), static_cast<int>(start + 1)});
    }
    return out;
}

double parse_decimal(const Token& tok, std::string_view text, int line_no) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last)
        throw ParseError(line_no, tok.column, "expected a decimal, got '" + std::string(tok.text) + "'");
    return value;
}

// Splits "key=value", checks the key, and parses the value as a decimal.
double parse_kv(const Token& tok, std::string_view key, int line_no) {
    const auto eq = tok.text.find('=');
    if (eq == std::string_view::npos || tok.text.substr(0, eq) != key)
        throw ParseError(line_no, tok.column,
                         "expected " + std::string(key) + "=<decimal>, got '" + std::string(tok.text) + "'");
    return parse_decimal(tok, tok.text.substr(eq + 1), line_no);
}

}  // namespace

SuperIfs parse_config(std::string_view text) {
    SuperIfs s;
    s.variability = 0;
    bool saw_header = false;
    std::vector<bool> explicit_weights;  // per ifs: any weight= seen
    std::vector<bool> missing_weights;   // per ifs: any map without weight=

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
        ++line_no;

        const auto toks = tokenize(line);
        if (toks.empty()) continue;
        const Token& head = toks[0];

        if (head.text == "superifs") {
            if (saw_header) throw ParseError(line_no, head.column, "duplicate superifs line");
            if (toks.size() != 2)
                throw ParseError(line_no, head.column, "expected: superifs V=<int>");
            const Token& vt = toks[1];
            if (vt.text.substr(0, 2) != "V=")
                throw ParseError(line_no, vt.column, "expected V=<int>, got '" + std::string(vt.text) + "'");
            int v = 0;
            const auto val = vt.text.substr(2);
            const auto res = std::from_chars(val.data(), val.data() + val.size(), v);
            if (res.ec != std::errc() || res.ptr != val.data() + val.size())
                throw ParseError(line_no, vt.column, "expected V=<int>, got '" + std::string(vt.text) + "'");
            s.variability = v;
            saw_header = true;
        } else if (head.text == "ifs") {
            if (!saw_header)
                throw ParseError(line_no, head.column, "superifs line must come first");
            if (toks.size() != 3)
                throw ParseError(line_no, head.column, "expected: ifs <name> prob=<decimal>");
            Ifs ifs;
            ifs.name = std::string(toks[1].text);
            s.probabilities.push_back(parse_kv(toks[2], "prob", line_no));
            s.ifss.push_back(std::move(ifs));
            explicit_weights.push_back(false);
            missing_weights.push_back(false);
        } else if (head.text == "map") {
            if (s.ifss.empty())
                throw ParseError(line_no, head.column, "map outside of an ifs block");
            static constexpr const char* kKeys[6] = {"a", "b", "c", "d", "e", "f"};
            if (toks.size() < 7)
                throw ParseError(line_no, head.column,
                                 "expected: map a= b= c= d= e= f= [weight=] [color: ...]");
            AffineMap m;
            double* slots[6] = {&m.a, &m.b, &m.c, &m.d, &m.e, &m.f};
            for (int i = 0; i < 6; ++i) *slots[i] = parse_kv(toks[1 + i], kKeys[i], line_no);

            std::size_t next = 7;
            double weight = -1.0;
            bool has_weight = false;
            if (next < toks.size() && toks[next].text.substr(0, 7) == "weight=") {
                weight = parse_kv(toks[next], "weight", line_no);
                has_weight = true;
                ++next;
            }
            if (next < toks.size()) {
                if (toks[next].text != "color:")
                    throw ParseError(line_no, toks[next].column,
                                     "unexpected token '" + std::string(toks[next].text) + "'");
                ++next;
                if (toks.size() - next != 12)
                    throw ParseError(line_no, toks[next - 1].column,
                                     "color: takes exactly 12 decimals, got " +
                                         std::to_string(toks.size() - next));
                ColorMap cm;
                double* cslots[12] = {&cm.linear[0][0], &cm.linear[0][1], &cm.linear[0][2],
                                      &cm.linear[1][0], &cm.linear[1][1], &cm.linear[1][2],
                                      &cm.linear[2][0], &cm.linear[2][1], &cm.linear[2][2],
                                      &cm.offset[0],    &cm.offset[1],    &cm.offset[2]};
                for (int i = 0; i < 12; ++i)
                    *cslots[i] = parse_decimal(toks[next + i], toks[next + i].text, line_no);
                m.color_part = cm;
                next += 12;
            }
            Ifs& ifs = s.ifss.back();
            ifs.maps.push_back(m);
            if (has_weight) {
                ifs.weights.push_back(weight);
                explicit_weights.back() = true;
            } else {
                ifs.weights.push_back(-1.0);  // placeholder, resolved below
                missing_weights.back() = true;
            }
        } else {
            throw ParseError(line_no, head.column,
                             "unknown directive '" + std::string(head.text) + "'");
        }
    }
    if (!saw_header) throw ParseError(line_no, 1, "missing superifs line");

    for (std::size_t n = 0; n < s.ifss.size(); ++n) {
        Ifs& ifs = s.ifss[n];
        if (explicit_weights[n] && missing_weights[n])
            throw ValidationError("ifs '" + ifs.name + "': weight must be given for all maps or none");
        if (missing_weights[n])
            for (double& w : ifs.weights) w = 1.0 / static_cast<double>(ifs.maps.size());
    }
    require_valid(s);
    return s;
}

std::string serialize_config(const SuperIfs& s) {
    std::string out;
    out += "superifs V=" + std::to_string(s.variability) + "\n";
    for (std::size_t n = 0; n < s.ifss.size(); ++n) {
        const Ifs& ifs = s.ifss[n];
        out += "ifs " + ifs.name + " prob=" + format_double(s.probabilities[n]) + "\n";
        for (std::size_t m = 0; m < ifs.maps.size(); ++m) {
            const AffineMap& map = ifs.maps[m];
            out += "map a=" + format_double(map.a) + " b=" + format_double(map.b) +
                   " c=" + format_double(map.c) + " d=" + format_double(map.d) +
                   " e=" + format_double(map.e) + " f=" + format_double(map.f) +
                   " weight=" + format_double(ifs.weights[m]);
            if (map.color_part) {
                out += " color:";
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j) out += " " + format_double(map.color_part->linear[i][j]);
                for (int i = 0; i < 3; ++i) out += " " + format_double(map.color_part->offset[i]);
            }
            out += "\n";
        }
    }
    return out;
}

SuperIfs load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("failed reading config file '" + path + "'");
    return parse_config(buf.str());
}

namespace {

bool maps_equal(const AffineMap& x, const AffineMap& y) {
    if (x.a != y.a || x.b != y.b || x.c != y.c || x.d != y.d || x.e != y.e || x.f != y.f)
        return false;
    if (x.color_part.has_value() != y.color_part.has_value()) return false;
    if (x.color_part) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (x.color_part->linear[i][j] != y.color_part->linear[i][j]) return false;
        for (int i = 0; i < 3; ++i)
            if (x.color_part->offset[i] != y.color_part->offset[i]) return false;
    }
    return true;
}

}  // namespace

bool structurally_equal(const SuperIfs& a, const SuperIfs& b) {
    if (a.variability != b.variability || a.ifss.size() != b.ifss.size()) return false;
    if (a.probabilities != b.probabilities) return false;
    for (std::size_t n = 0; n < a.ifss.size(); ++n) {
        const Ifs& x = a.ifss[n];
        const Ifs& y = b.ifss[n];
        if (x.name != y.name || x.weights != y.weights || x.maps.size() != y.maps.size())
            return false;
        for (std::size_t m = 0; m < x.maps.size(); ++m)
            if (!maps_equal(x.maps[m], y.maps[m])) return false;
    }
    return true;
}

double max_lipschitz(const SuperIfs& s) {
    double lip = 0.0;
    for (const Ifs& ifs : s.ifss)
        for (const AffineMap& m : ifs.maps) lip = std::max(lip, lipschitz(m));
    return lip;
}

}  // namespace vvf
