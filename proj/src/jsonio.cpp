#include "schiffer/jsonio.hpp"

#include <cstdio>
#include <fstream>
#include <set>

#include "schiffer/errors.hpp"

namespace schiffer::io {

using nlohmann::json;

namespace {

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ValidationError(path + ": " + e.what());
    }
    return j;
}

void check_keys(const json& j, const std::set<std::string>& required,
                const std::set<std::string>& optional, const char* what) {
    if (!j.is_object())
        throw ValidationError(std::string(what) + " must be a JSON object");
    for (const auto& key : required)
        if (!j.contains(key))
            throw ValidationError(std::string(what) + " is missing \"" + key +
                                  "\"");
    for (const auto& [key, val] : j.items()) {
        (void)val;
        if (!required.count(key) && !optional.count(key))
            throw ValidationError(std::string(what) + " has unknown key \"" +
                                  key + "\"");
    }
}

double get_num(const json& j, const char* key, const char* what) {
    if (!j[key].is_number())
        throw ValidationError(std::string(what) + " field \"" + key +
                              "\" must be a number");
    return j[key].get<double>();
}

Point get_point(const json& j, const char* key, const char* what) {
    const auto& v = j[key];
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() ||
        !v[1].is_number())
        throw ValidationError(std::string(what) + " field \"" + key +
                              "\" must be [x, y]");
    return {v[0].get<double>(), v[1].get<double>()};
}

} // namespace

geom2d::BoundaryCurve curve_from_json(const json& j) {
    check_keys(j, {"kind", "center", "coeffs"}, {"r0"}, "curve");
    if (!j["kind"].is_string())
        throw ValidationError("curve \"kind\" must be a string");
    std::string kind = j["kind"].get<std::string>();
    Point center = get_point(j, "center", "curve");
    if (!j["coeffs"].is_array())
        throw ValidationError("curve \"coeffs\" must be an array");
    std::vector<geom2d::FourierTerm> terms;
    for (const auto& t : j["coeffs"]) {
        check_keys(t, {"k", "a", "b"}, {}, "curve coefficient");
        if (!t["k"].is_number_integer())
            throw ValidationError("curve coefficient \"k\" must be an integer");
        terms.push_back({t["k"].get<int>(), get_num(t, "a", "coefficient"),
                         get_num(t, "b", "coefficient")});
    }
    if (kind == "polar") {
        if (!j.contains("r0"))
            throw ValidationError("polar curve is missing \"r0\"");
        return geom2d::BoundaryCurve::polar(center,
                                            get_num(j, "r0", "curve"), terms);
    }
    if (kind == "direct") {
        if (j.contains("r0"))
            throw ValidationError("\"r0\" only applies to polar curves");
        return geom2d::BoundaryCurve::direct(center, terms);
    }
    throw ValidationError("curve \"kind\" must be \"polar\" or \"direct\"");
}

geom2d::BoundaryCurve load_curve(const std::string& path) {
    return curve_from_json(load_json(path));
}

json curve_to_json(const geom2d::BoundaryCurve& curve) {
    json j;
    j["kind"] =
        curve.kind() == geom2d::CurveKind::polar ? "polar" : "direct";
    j["center"] = {curve.center().x, curve.center().y};
    if (curve.kind() == geom2d::CurveKind::polar) j["r0"] = curve.r0();
    j["coeffs"] = json::array();
    for (const auto& t : curve.terms())
        j["coeffs"].push_back({{"k", t.k}, {"a", t.a}, {"b", t.b}});
    return j;
}

void save_curve(const geom2d::BoundaryCurve& curve, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << curve_to_json(curve).dump(2) << "\n";
}

wavefield::WaveField field_from_json(const json& j) {
    check_keys(j, {"k", "origin", "coeffs"}, {}, "field");
    double k = get_num(j, "k", "field");
    Point origin = get_point(j, "origin", "field");
    if (!j["coeffs"].is_array())
        throw ValidationError("field \"coeffs\" must be an array");
    int nmax = 0;
    for (const auto& t : j["coeffs"]) {
        check_keys(t, {"n", "alpha", "beta"}, {}, "field coefficient");
        if (!t["n"].is_number_integer() || t["n"].get<int>() < 0)
            throw ValidationError(
                "field coefficient \"n\" must be a nonnegative integer");
        nmax = std::max(nmax, t["n"].get<int>());
    }
    std::vector<double> alpha(nmax + 1, 0.0), beta(nmax + 1, 0.0);
    std::vector<char> seen(nmax + 1, 0);
    for (const auto& t : j["coeffs"]) {
        int n = t["n"].get<int>();
        if (seen[n])
            throw ValidationError("field lists order " + std::to_string(n) +
                                  " twice");
        seen[n] = 1;
        alpha[n] = get_num(t, "alpha", "coefficient");
        beta[n] = get_num(t, "beta", "coefficient");
    }
    return wavefield::WaveField(k, origin, alpha, beta);
}

wavefield::WaveField load_field(const std::string& path) {
    return field_from_json(load_json(path));
}

json field_to_json(const wavefield::WaveField& f) {
    json j;
    j["k"] = f.k();
    j["origin"] = {f.origin().x, f.origin().y};
    j["coeffs"] = json::array();
    for (int n = 0; n <= f.max_order(); ++n)
        j["coeffs"].push_back({{"n", n},
                               {"alpha", f.alpha()[n]},
                               {"beta", f.beta()[n]}});
    return j;
}

void save_field(const wavefield::WaveField& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << field_to_json(f).dump(2) << "\n";
}

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << header << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out << ",";
            out << format_g17(row[i]);
        }
        out << "\n";
    }
}

} // namespace schiffer::io
