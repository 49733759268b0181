#include "inputs.hpp"

#include <fstream>

#include "hb/error.hpp"

namespace hbcli {

namespace {

const json& field(const json& j, const char* key, const std::string& path) {
    if (!j.is_object()) throw InputError(path, "expected an object");
    const auto it = j.find(key);
    if (it == j.end()) throw InputError(path + "." + key, "missing");
    return *it;
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) throw InputError(path, "expected a number");
    return j.get<double>();
}

double number_or(const json& j, const char* key, double fallback, const std::string& path) {
    const auto it = j.find(key);
    return it == j.end() ? fallback : number(*it, path + "." + key);
}

std::vector<double> numbers(const json& j, const std::string& path) {
    if (!j.is_array()) throw InputError(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

hb::Vec2 point(const json& j, const std::string& path) {
    const std::vector<double> v = numbers(j, path);
    if (v.size() != 2) throw InputError(path, "expected [x, y]");
    return {v[0], v[1]};
}

std::vector<hb::Vec2> points(const json& j, const std::string& path) {
    if (!j.is_array()) throw InputError(path, "expected an array of points");
    std::vector<hb::Vec2> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(point(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

std::string type_of(const json& j, const std::string& path) {
    const json& t = field(j, "type", path);
    if (!t.is_string()) throw InputError(path + ".type", "expected a string");
    return t.get<std::string>();
}

// Library errors raised while building an input are reported against it.
template <class F>
auto building(const std::string& path, F&& f) {
    try {
        return f();
    } catch (const hb::Error& e) {
        throw InputError(path, e.what());
    }
}

}  // namespace

json load_json(const std::string& arg, const std::string& what) {
    try {
        if (!arg.empty() && arg.front() == '{') return json::parse(arg);
        std::ifstream in(arg);
        if (!in) throw InputError(what, "cannot open " + arg);
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(what, std::string("invalid JSON: ") + e.what());
    }
}

hb::FourierSupportSpec parse_support(const json& j, const std::string& path) {
    const std::string type = type_of(j, path);
    if (type == "disc") return {1.0, {}, {}};
    if (type != "fourier") throw InputError(path + ".type", "expected \"disc\" or \"fourier\"");
    hb::FourierSupportSpec s;
    s.c0 = number_or(j, "c0", 1.0, path);
    if (j.contains("cos")) s.cos = numbers(j["cos"], path + ".cos");
    if (j.contains("sin")) s.sin = numbers(j["sin"], path + ".sin");
    return s;
}

hb::PolygonSpec parse_polygon(const json& j, const std::string& path) {
    std::vector<hb::Vec2> v = points(field(j, "vertices", path), path + ".vertices");
    const double mark = number_or(j, "mark", 0.0, path);
    const auto it = j.find("normalize");
    if (it != j.end() && !it->is_boolean()) throw InputError(path + ".normalize", "expected a boolean");
    hb::PolygonSpec p = it != j.end() && it->get<bool>() ? hb::scaled_to_unit_perimeter(v, mark) : hb::PolygonSpec{v, mark};
    building(path, [&] {
        hb::validate_polygon(p);
        return 0;
    });
    return p;
}

hb::TableCurve parse_table(const json& j, const std::string& path) {
    const std::string type = type_of(j, path);
    hb::TableCurve t = building(path, [&]() -> hb::TableCurve {
        if (type == "disc" || type == "fourier") {
            if (type == "disc") return hb::disc_table();
            return hb::build_fourier_table(parse_support(j, path));
        }
        if (type == "samples") {
            const std::vector<hb::Vec2> p = points(field(j, "points", path), path + ".points");
            return hb::table_from_samples(p);
        }
        if (type == "smoothed_polygon") {
            const hb::PolygonSpec poly = parse_polygon(field(j, "polygon", path), path + ".polygon");
            const double s = number(field(j, "s", path), path + ".s");
            return hb::family_from_polygon(poly, number_or(j, "width", 0.0, path)).table(s);
        }
        throw InputError(path + ".type", "unknown table type \"" + type + "\"");
    });
    if (j.contains("rotate"))
        t = t.rotated(number(j["rotate"], path + ".rotate"),
                      j.contains("about") ? point(j["about"], path + ".about") : hb::Vec2::Zero());
    if (j.contains("translate")) t = t.translated(point(j["translate"], path + ".translate"));
    if (j.contains("mark_shift")) t = t.with_mark_shift(number(j["mark_shift"], path + ".mark_shift"));
    return t;
}

hb::TablePath parse_path(const json& j, const std::string& path) {
    const std::string type = type_of(j, path);
    return building(path, [&]() -> hb::TablePath {
        if (type == "translation")
            return hb::translation_path(parse_table(field(j, "table", path), path + ".table"),
                                        point(field(j, "v", path), path + ".v"));
        if (type == "support_interp")
            return hb::support_interp_path(parse_support(field(j, "from", path), path + ".from"),
                                           parse_support(field(j, "to", path), path + ".to"));
        if (type == "normal_perturbation") {
            const std::vector<double> f = numbers(field(j, "f", path), path + ".f");
            return hb::normal_perturbation_path(parse_table(field(j, "table", path), path + ".table"), f).path;
        }
        if (type == "smoothing_restriction") {
            const hb::PolygonSpec poly = parse_polygon(field(j, "polygon", path), path + ".polygon");
            return hb::restriction_path(hb::family_from_polygon(poly, number_or(j, "width", 0.0, path)),
                                        number(field(j, "from", path), path + ".from"),
                                        number(field(j, "to", path), path + ".to"));
        }
        throw InputError(path + ".type", "unknown path type \"" + type + "\"");
    });
}

}  // namespace hbcli
