#pragma once

// JSON/CSV plumbing shared by the command-line tool and the tests.

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tipfold/errors.hpp"
#include "tipfold/model.hpp"

namespace tipfold {

inline void to_json(nlohmann::json& j, const SystemConfig& c) {
    j = nlohmann::json{{"mu0", c.mu0},     {"eps", c.eps}, {"A", c.A},   {"omega", c.omega},
                       {"phase", c.phase}, {"alpha", c.alpha}, {"K", c.K}, {"x0", c.x0},
                       {"kind", std::string(to_string(c.kind))}};
}

/// Missing keys keep their defaults; unknown keys are rejected so typos do
/// not go unnoticed.
inline void from_json(const nlohmann::json& j, SystemConfig& c) {
    if (!j.is_object()) throw ConfigError("config JSON must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        const auto& v = it.value();
        auto num = [&]() {
            if (!v.is_number()) throw ConfigError("config key '" + k + "' must be a number");
            return v.get<double>();
        };
        if (k == "mu0") c.mu0 = num();
        else if (k == "eps") c.eps = num();
        else if (k == "A") c.A = num();
        else if (k == "omega") c.omega = num();
        else if (k == "phase") c.phase = num();
        else if (k == "alpha") c.alpha = num();
        else if (k == "K") c.K = num();
        else if (k == "x0") c.x0 = num();
        else if (k == "kind") {
            if (!v.is_string()) throw ConfigError("config key 'kind' must be a string");
            c.kind = parse_system_kind(v.get<std::string>());
        } else
            throw ConfigError("unknown config key '" + k + "'");
    }
}

inline SystemConfig read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config file '" + path + "': " + e.what());
    }
    return j.get<SystemConfig>();
}

/// null for absent or non-finite values.
inline nlohmann::json json_number(std::optional<double> v) {
    if (!v || !std::isfinite(*v)) return nullptr;
    return *v;
}

/// 10 significant digits; empty cell for absent or non-finite values.
inline std::string csv_number(std::optional<double> v) {
    if (!v || !std::isfinite(*v)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", *v);
    return buf;
}

class CsvWriter {
public:
    CsvWriter(std::ostream& os, const std::vector<std::string>& header) : os_(os) { row(header); }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os_ << ',';
            os_ << cells[i];
        }
        os_ << '\n';
    }

private:
    std::ostream& os_;
};

/// "start:stop:count" (linear) or "start:stop:countL" (count points with
/// log10 spacing between 10^start and 10^stop).
inline std::vector<double> parse_grid(const std::string& spec) {
    const auto p1 = spec.find(':');
    const auto p2 = p1 == std::string::npos ? p1 : spec.find(':', p1 + 1);
    if (p2 == std::string::npos) throw ConfigError("grid spec '" + spec + "' must be start:stop:count");
    double start = 0.0, stop = 0.0;
    long count = 0;
    bool log = false;
    try {
        std::size_t used = 0;
        start = std::stod(spec.substr(0, p1), &used);
        if (used != p1) throw ConfigError("");
        const std::string mid = spec.substr(p1 + 1, p2 - p1 - 1);
        stop = std::stod(mid, &used);
        if (used != mid.size()) throw ConfigError("");
        std::string tail = spec.substr(p2 + 1);
        if (!tail.empty() && (tail.back() == 'L' || tail.back() == 'l')) {
            log = true;
            tail.pop_back();
        }
        count = std::stol(tail, &used);
        if (used != tail.size()) throw ConfigError("");
    } catch (const std::exception&) {
        throw ConfigError("grid spec '" + spec + "' must be start:stop:count or logstart:logstop:countL");
    }
    if (count < 1) throw ConfigError("grid count must be >= 1");
    if (count > 1 && !(stop > start)) throw ConfigError("grid stop must exceed start");
    std::vector<double> g;
    g.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) {
        const double u = count == 1 ? start : start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
        g.push_back(log ? std::pow(10.0, u) : u);
    }
    return g;
}

} // namespace tipfold
