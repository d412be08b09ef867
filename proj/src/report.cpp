#include "mmi/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace mmi {

std::string format_double(double x) {
    if (!std::isfinite(x)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    std::string s(buf);
    // Keep a marker that the value is floating.
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
}

namespace {

void dump(const json& v, int indent, int depth, std::string& out) {
    const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
    const std::string close = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
    const char* nl = indent > 0 ? "\n" : "";
    switch (v.type()) {
    case json::value_t::object: {
        if (v.empty()) {
            out += "{}";
            return;
        }
        out += "{";
        out += nl;
        bool first = true;
        for (auto it = v.begin(); it != v.end(); ++it) {
            if (!first) {
                out += ",";
                out += nl;
            }
            first = false;
            out += pad;
            out += json(it.key()).dump();
            out += indent > 0 ? ": " : ":";
            dump(it.value(), indent, depth + 1, out);
        }
        out += nl;
        out += close;
        out += "}";
        return;
    }
    case json::value_t::array: {
        if (v.empty()) {
            out += "[]";
            return;
        }
        // Flat numeric arrays stay on one line.
        const bool flat = std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_primitive(); });
        out += "[";
        if (!flat) out += nl;
        bool first = true;
        for (const auto& e : v) {
            if (!first) {
                out += ",";
                out += flat ? (indent > 0 ? " " : "") : nl;
            }
            first = false;
            if (!flat) out += pad;
            dump(e, indent, depth + 1, out);
        }
        if (!flat) {
            out += nl;
            out += close;
        }
        out += "]";
        return;
    }
    case json::value_t::number_float: out += format_double(v.get<double>()); return;
    default: out += v.dump(); return;
    }
}

} // namespace

std::string dump_json(const json& value, int indent) {
    std::string out;
    dump(value, indent, 0, out);
    out += "\n";
    return out;
}

std::optional<std::string> exact_rational(double x, long long max_den, double tol) {
    if (!std::isfinite(x)) return std::nullopt;
    // Continued-fraction convergents.
    long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double r = x;
    for (int it = 0; it < 64; ++it) {
        const double a = std::floor(r);
        if (std::abs(a) > 1e15) break;
        const long long ai = static_cast<long long>(a);
        const long long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
        if (q2 > max_den) break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        const double approx = static_cast<double>(p1) / static_cast<double>(q1);
        if (std::abs(approx - x) <= tol * std::max(1.0, std::abs(x))) {
            if (q1 == 1) return std::to_string(p1);
            return std::to_string(p1) + "/" + std::to_string(q1);
        }
        const double frac = r - a;
        if (frac == 0.0) break;
        r = 1.0 / frac;
    }
    return std::nullopt;
}

} // namespace mmi
