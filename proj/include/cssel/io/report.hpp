#ifndef CSSEL_IO_REPORT_HPP
#define CSSEL_IO_REPORT_HPP

#include <cstdint>
#include <cstring>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "../bounds.hpp"
#include "../matrix.hpp"

namespace cssel::io {

struct InputDigest {
    index_t rows = 0;
    index_t cols = 0;
    std::string field = "real";
    std::string checksum;  // FNV-1a 64 over dims and column-major values, hex

    friend bool operator==(const InputDigest&, const InputDigest&) = default;
};

/// Machine-readable result of one CLI command.  Indices are 1-based.
struct RunReport {
    std::string command;
    std::map<std::string, std::string> params;
    InputDigest input;
    std::vector<index_t> row_indices;
    std::vector<index_t> col_indices;
    std::map<std::string, double> errors;
    std::vector<BoundCheck> bounds;
    bool all_pass = true;
    std::vector<std::string> warnings;
    double wall_time_s = 0.0;

    friend bool operator==(const RunReport&, const RunReport&) = default;
};

inline std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h = 1469598103934665603ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

template <typename T>
InputDigest digest(const Matrix<T>& A) {
    InputDigest d;
    d.rows = A.rows();
    d.cols = A.cols();
    d.field = is_complex_v<T> ? "complex" : "real";
    const std::uint64_t dims[2] = {A.rows(), A.cols()};
    std::uint64_t h = fnv1a(dims, sizeof dims);
    for (index_t k = 0; k < A.size(); ++k) {
        double parts[2] = {0.0, 0.0};
        if constexpr (is_complex_v<T>) {
            parts[0] = static_cast<double>(A.data()[k].real());
            parts[1] = static_cast<double>(A.data()[k].imag());
            h = fnv1a(parts, sizeof parts, h);
        } else {
            parts[0] = static_cast<double>(A.data()[k]);
            h = fnv1a(parts, sizeof(double), h);
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    d.checksum = buf;
    return d;
}

inline std::vector<index_t> one_based(const std::vector<index_t>& idx) {
    std::vector<index_t> out(idx);
    for (auto& i : out)
        ++i;
    return out;
}

namespace detail {

inline nlohmann::json number(double x) {
    if (std::isfinite(x))
        return x;
    return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
}

inline double number_from(const nlohmann::json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf")
            return std::numeric_limits<double>::infinity();
        if (s == "-inf")
            return -std::numeric_limits<double>::infinity();
        return std::numeric_limits<double>::quiet_NaN();
    }
    return j.get<double>();
}

}  // namespace detail
}  // namespace cssel::io

namespace cssel {

inline void to_json(nlohmann::json& j, const BoundCheck& b) {
    j = nlohmann::json{{"name", b.name},
                       {"achieved", io::detail::number(b.achieved)},
                       {"bound", io::detail::number(b.bound)},
                       {"ratio", io::detail::number(b.ratio)},
                       {"pass", b.pass}};
}

inline void from_json(const nlohmann::json& j, BoundCheck& b) {
    b.name = j.at("name").get<std::string>();
    b.achieved = io::detail::number_from(j.at("achieved"));
    b.bound = io::detail::number_from(j.at("bound"));
    b.ratio = io::detail::number_from(j.at("ratio"));
    b.pass = j.at("pass").get<bool>();
}

}  // namespace cssel

namespace cssel::io {

inline void to_json(nlohmann::json& j, const InputDigest& d) {
    j = nlohmann::json{{"rows", d.rows}, {"cols", d.cols}, {"field", d.field}, {"checksum", d.checksum}};
}

inline void from_json(const nlohmann::json& j, InputDigest& d) {
    d.rows = j.at("rows").get<index_t>();
    d.cols = j.at("cols").get<index_t>();
    d.field = j.at("field").get<std::string>();
    d.checksum = j.at("checksum").get<std::string>();
}

inline void to_json(nlohmann::json& j, const RunReport& r) {
    nlohmann::json errs = nlohmann::json::object();
    for (const auto& [k, v] : r.errors)
        errs[k] = detail::number(v);
    j = nlohmann::json{{"command", r.command},   {"params", r.params},
                       {"input", r.input},       {"row_indices", r.row_indices},
                       {"col_indices", r.col_indices}, {"errors", errs},
                       {"bounds", r.bounds},     {"all_pass", r.all_pass},
                       {"warnings", r.warnings}, {"wall_time_s", r.wall_time_s}};
}

inline void from_json(const nlohmann::json& j, RunReport& r) {
    r.command = j.at("command").get<std::string>();
    r.params = j.at("params").get<std::map<std::string, std::string>>();
    r.input = j.at("input").get<InputDigest>();
    r.row_indices = j.at("row_indices").get<std::vector<index_t>>();
    r.col_indices = j.at("col_indices").get<std::vector<index_t>>();
    r.errors.clear();
    for (const auto& [k, v] : j.at("errors").items())
        r.errors[k] = detail::number_from(v);
    r.bounds = j.at("bounds").get<std::vector<BoundCheck>>();
    r.all_pass = j.at("all_pass").get<bool>();
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    r.wall_time_s = j.at("wall_time_s").get<double>();
}

inline std::string to_text(const RunReport& r) { return nlohmann::json(r).dump(2) + "\n"; }

inline RunReport report_from_text(const std::string& s) {
    try {
        return nlohmann::json::parse(s).get<RunReport>();
    } catch (const nlohmann::json::exception& e) {
        fail(errc::parse_error, std::string("report: ") + e.what());
    }
}

}  // namespace cssel::io

#endif
