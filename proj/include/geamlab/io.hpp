#pragma once

#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include "geamlab/coherence.hpp"
#include "geamlab/entangle.hpp"
#include "geamlab/geam.hpp"
#include "geamlab/linalg.hpp"

namespace geamlab {

using json = nlohmann::json;

// Matrix exchange format: JSON array of rows, each entry a [re, im] pair.
inline json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j)
            row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Matrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix JSON: expected array of rows");
    std::size_t rows = j.size();
    std::size_t cols = j[0].size();
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (j[i].size() != cols) throw std::invalid_argument("matrix JSON: ragged rows");
        for (std::size_t c = 0; c < cols; ++c) {
            const json& e = j[i][c];
            if (!e.is_array() || e.size() != 2)
                throw std::invalid_argument("matrix JSON: entries must be [re, im] pairs");
            m(i, c) = cplx{e[0].get<double>(), e[1].get<double>()};
        }
    }
    return m;
}

inline DensityMatrix density_from_json(const json& j) { return DensityMatrix(matrix_from_json(j)); }

inline DensityMatrix load_state_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open state file: " + path);
    json j;
    in >> j;
    return density_from_json(j);
}

inline json spec_to_json(const GeamSpec& spec, const std::vector<int>& signs = {}) {
    json j;
    j["d"] = spec.dim();
    j["N"] = spec.frames();
    j["M"] = spec.frame_sizes();
    j["gamma"] = spec.gammas();
    if (spec.conical()) {
        j["S"] = spec.s();
    } else {
        json sk = json::array();
        for (std::size_t k = 0; k < spec.frames(); ++k) sk.push_back(spec.s_of(k));
        j["S"] = sk;
    }
    j["signs"] = signs.empty() ? std::vector<int>(spec.frames(), 1) : signs;
    if (!spec.preset().empty()) j["preset"] = spec.preset();
    return j;
}

inline json report_to_json(const IdentityReport& r, const json& spec) {
    return json{{"identity", r.identity}, {"d", r.d},        {"f", r.f_name},
                {"spec", spec},           {"lhs", r.lhs},    {"rhs", r.rhs},
                {"residual", r.residual}, {"tolerance", r.tolerance},
                {"pass", r.pass},         {"seed", r.seed},  {"applicable", r.applicable}};
}

inline json report_to_json(const DetectionReport& r, const json& spec) {
    return json{{"criterion", r.criterion},
                {"value", r.value},
                {"threshold", r.threshold},
                {"verdict", std::string(to_string(r.verdict))},
                {"family", r.state_description},
                {"param", r.param},
                {"d", r.d},
                {"spec", spec},
                {"f", r.f_name.empty() ? json(nullptr) : json(r.f_name)}};
}

// Locale-independent numeric formatting: 17 significant digits.
inline std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace geamlab
