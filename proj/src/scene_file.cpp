#include "heis/scene_file.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "heis/error.hpp"

namespace heis {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string unquote(std::string_view s) {
    s = trim(s);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return std::string(s.substr(1, s.size() - 2));
    return std::string(s);
}

// Strips a trailing comment that is not inside quotes.
std::string_view strip_comment(std::string_view line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (!quoted && (line[i] == '#' || line[i] == ';')) return line.substr(0, i);
    }
    return line;
}

struct Entry {
    std::string value;
    int line = 0;
};

using Section = std::map<std::string, Entry, std::less<>>;

[[noreturn]] void fail(int line, const std::string& msg) {
    throw SceneError("line " + std::to_string(line) + ": " + msg);
}

double number(const Entry& e, std::string_view what) {
    try {
        return parse_constant(unquote(e.value));
    } catch (const ParseError& pe) {
        fail(e.line, std::string(what) + ": " + pe.what());
    }
}

std::vector<double> numbers(const Entry& e, std::string_view what) {
    std::vector<double> out;
    for (const auto& item : split_top_level(e.value)) {
        try {
            out.push_back(parse_constant(unquote(item)));
        } catch (const ParseError& pe) {
            fail(e.line, std::string(what) + ": " + pe.what());
        }
    }
    return out;
}

// Three expressions, given either as three quoted items or one quoted comma list.
std::array<std::string, 3> triple(const Entry& e, std::string_view what) {
    std::vector<std::string> items = split_top_level(e.value);
    if (items.size() == 1) items = split_top_level(unquote(items[0]));
    if (items.size() != 3) fail(e.line, std::string(what) + " needs three components");
    return {unquote(items[0]), unquote(items[1]), unquote(items[2])};
}

template <class F>
auto with_line(int line, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ParseError& pe) {
        throw SceneError("line " + std::to_string(line) + ": " + pe.what() + "\n" + pe.annotated());
    }
}

Domain parse_domain(const Entry& e) {
    const std::string v = unquote(e.value);
    const auto open = v.find('(');
    if (open == std::string::npos || v.back() != ')') fail(e.line, "domain must be disk(c1, c2, R) or rectangle(a, b, c, d)");
    const std::string head(trim(std::string_view(v).substr(0, open)));
    const Entry args{v.substr(open + 1, v.size() - open - 2), e.line};
    const std::vector<double> a = numbers(args, "domain");
    try {
        if (head == "disk") {
            if (a.size() != 3) fail(e.line, "disk takes three arguments");
            return Domain::disk(a[0], a[1], a[2]);
        }
        if (head == "rectangle") {
            if (a.size() != 4) fail(e.line, "rectangle takes four arguments");
            return Domain::rectangle(a[0], a[1], a[2], a[3]);
        }
    } catch (const SceneError&) {
        throw;
    } catch (const InputError& ie) {
        fail(e.line, ie.what());
    }
    fail(e.line, "unknown domain shape '" + head + "'");
}

const Entry& require(const Section& s, std::string_view section, std::string_view key) {
    const auto it = s.find(key);
    if (it == s.end()) throw SceneError("[" + std::string(section) + "] is missing '" + std::string(key) + "'");
    return it->second;
}

void reject_unknown(const Section& s, std::string_view section, std::initializer_list<std::string_view> known) {
    for (const auto& [k, e] : s) {
        if (std::find(known.begin(), known.end(), k) == known.end())
            fail(e.line, "unknown key '" + k + "' in [" + std::string(section) + "]");
    }
}

}  // namespace

std::vector<std::string> split_top_level(std::string_view s) {
    std::vector<std::string> out;
    int depth = 0;
    bool quoted = false;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        const char c = i < s.size() ? s[i] : ',';
        if (c == '"') quoted = !quoted;
        if (quoted) continue;
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            out.emplace_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    if (out.size() == 1 && out[0].empty()) out.clear();
    return out;
}

Scene parse_scene(std::string_view text, std::string name) {
    std::map<std::string, Section, std::less<>> sections;
    std::map<std::string, int, std::less<>> section_line;
    std::string current;
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string_view line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(lineno, "unterminated section header");
            current = std::string(trim(line.substr(1, line.size() - 2)));
            if (sections.count(current)) fail(lineno, "duplicate section [" + current + "]");
            sections[current];
            section_line[current] = lineno;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail(lineno, "expected 'key = value'");
        if (current.empty()) fail(lineno, "key outside any section");
        const std::string key(trim(line.substr(0, eq)));
        Section& sec = sections[current];
        if (sec.count(key)) fail(lineno, "duplicate key '" + key + "'");
        sec[key] = Entry{std::string(trim(line.substr(eq + 1))), lineno};
    }

    Scene scene;
    scene.name = std::move(name);
    const auto surf = sections.find("surface");
    if (surf == sections.end()) throw SceneError("missing [surface] section");
    const Section& S = surf->second;
    reject_unknown(S, "surface", {"u", "chart", "domain"});
    const Entry& u = require(S, "surface", "u");
    scene.u = with_line(u.line, [&] { return parse(unquote(u.value), VariableSet::fields()); });
    const Entry& ch = require(S, "surface", "chart");
    const auto cc = triple(ch, "chart");
    scene.chart = with_line(ch.line, [&] { return Chart::parse(cc[0], cc[1], cc[2]); });
    scene.domain = parse_domain(require(S, "surface", "domain"));

    std::vector<std::pair<int, const Section*>> bounds;
    for (const auto& [sec, body] : sections) {
        if (sec == "surface" || sec == "options") continue;
        if (sec.rfind("boundary.", 0) != 0) fail(section_line[sec], "unknown section [" + sec + "]");
        const std::string idx = sec.substr(9);
        if (idx.empty() || !std::all_of(idx.begin(), idx.end(), [](char c) { return c >= '0' && c <= '9'; }))
            fail(section_line[sec], "boundary sections are named [boundary.N]");
        bounds.emplace_back(std::stoi(idx), &body);
    }
    std::sort(bounds.begin(), bounds.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [idx, body] : bounds) {
        const std::string sec = "boundary." + std::to_string(idx);
        reject_unknown(*body, sec, {"gamma", "interval"});
        const Entry& g = require(*body, sec, "gamma");
        const auto gc = triple(g, "gamma");
        ParamCurve curve = with_line(g.line, [&] { return ParamCurve::parse(gc[0], gc[1], gc[2]); });
        if (const auto it = body->find("interval"); it != body->end()) {
            const auto iv = numbers(it->second, "interval");
            if (iv.size() != 2 || !(iv[0] < iv[1])) fail(it->second.line, "interval needs two increasing numbers");
            curve.a = iv[0];
            curve.b = iv[1];
        }
        scene.boundary.push_back(std::move(curve));
    }
    if (scene.boundary.empty()) throw SceneError("scene needs at least one [boundary.N] section");

    if (const auto opt = sections.find("options"); opt != sections.end()) {
        const Section& O = opt->second;
        reject_unknown(O, "options",
                       {"name", "euler_characteristic", "orientation", "rho_excise", "abs_tol", "rel_tol", "max_cells",
                        "L_grid"});
        if (auto it = O.find("name"); it != O.end()) scene.name = unquote(it->second.value);
        if (auto it = O.find("euler_characteristic"); it != O.end()) {
            const double v = number(it->second, "euler_characteristic");
            if (v != std::round(v) || std::abs(v) > 1e6) fail(it->second.line, "euler_characteristic must be an integer");
            scene.euler_characteristic = static_cast<int>(v);
        }
        if (auto it = O.find("orientation"); it != O.end()) {
            const std::string v = unquote(it->second.value);
            if (v == "auto") scene.orientation = OrientationMode::Auto;
            else if (v == "as-authored") scene.orientation = OrientationMode::AsAuthored;
            else if (v == "flip" || v == "flipped") scene.orientation = OrientationMode::Flipped;
            else fail(it->second.line, "orientation must be auto, as-authored or flip");
        }
        if (auto it = O.find("rho_excise"); it != O.end()) {
            scene.rho_excise = number(it->second, "rho_excise");
            if (!(scene.rho_excise > 0 && scene.rho_excise < 1)) fail(it->second.line, "rho_excise must lie in (0, 1)");
        }
        if (auto it = O.find("abs_tol"); it != O.end()) {
            scene.tolerance.abs = number(it->second, "abs_tol");
            if (!(scene.tolerance.abs > 0)) fail(it->second.line, "abs_tol must be positive");
        }
        if (auto it = O.find("rel_tol"); it != O.end()) {
            scene.tolerance.rel = number(it->second, "rel_tol");
            if (!(scene.tolerance.rel >= 0)) fail(it->second.line, "rel_tol must be non-negative");
        }
        if (auto it = O.find("max_cells"); it != O.end()) {
            const double v = number(it->second, "max_cells");
            if (!(v >= 16 && v <= 1 << 24)) fail(it->second.line, "max_cells must lie in [16, 2^24]");
            scene.tolerance.max_cells = static_cast<std::size_t>(v);
        }
        if (auto it = O.find("L_grid"); it != O.end()) {
            scene.L_grid = numbers(it->second, "L_grid");
            if (scene.L_grid.empty() ||
                std::any_of(scene.L_grid.begin(), scene.L_grid.end(), [](double L) { return !(L > 0); }))
                fail(it->second.line, "L_grid needs positive values");
        }
    }
    return scene;
}

Scene load_scene(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open scene file '" + path.string() + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_scene(ss.str(), path.stem().string());
}

}  // namespace heis
