#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ncp/channels.hpp"
#include "ncp/matrix.hpp"
#include "ncp/states.hpp"
#include "ncp/tomography.hpp"

namespace ncp {

using nlohmann::json;

// matrix encoding used everywhere: {"rows":R,"cols":C,"data":[[re,im],...]} row-major
inline json matrix_to_json(const CMatrix& m) {
    json data = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            data.push_back({m(i, j).real(), m(i, j).imag()});
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

inline CMatrix matrix_from_json(const json& j) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
        throw std::invalid_argument("matrix JSON needs rows, cols and data");
    const std::size_t r = j.at("rows").get<std::size_t>();
    const std::size_t c = j.at("cols").get<std::size_t>();
    const json& data = j.at("data");
    if (!data.is_array() || data.size() != r * c)
        throw std::invalid_argument("matrix JSON data length must be rows*cols");
    CMatrix m(r, c);
    for (std::size_t k = 0; k < r * c; ++k) {
        const json& e = data.at(k);
        if (!e.is_array() || e.size() != 2)
            throw std::invalid_argument("matrix JSON entries must be [re, im] pairs");
        m(k / c, k % c) = cx(e.at(0).get<double>(), e.at(1).get<double>());
    }
    return m;
}

// a state entry is either a known name or an inline matrix
inline DensityMatrix state_from_json(const json& j) {
    if (j.is_string()) {
        const std::string name = j.get<std::string>();
        if (name == "bell") {
            CMatrix v(4, 1);
            v(0, 0) = v(3, 0) = 1.0 / std::sqrt(2.0);
            return DensityMatrix(v * v.adjoint());
        }
        return named_state(name);
    }
    return DensityMatrix(matrix_from_json(j));
}

inline CMatrix unitary_from_json(const json& j) {
    if (j.is_string()) {
        const std::string name = j.get<std::string>();
        if (name == "cnot")
            return CMatrix(4, 4,
                           {1, 0, 0, 0,
                            0, 0, 0, 1,
                            0, 0, 1, 0,
                            0, 1, 0, 0});
        if (name == "cz") {
            CMatrix m = CMatrix::identity(4);
            m(3, 3) = -1.0;
            return m;
        }
        throw std::invalid_argument("unknown unitary name: " + name);
    }
    return matrix_from_json(j);
}

// {"kind":"kraus"|"choi"|"superop","d":N,"matrices":[...]} -> Choi form
inline ProcessMatrix channel_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j.contains("d") || !j.contains("matrices"))
        throw std::invalid_argument("channel JSON needs kind, d and matrices");
    const std::string kind = j.at("kind").get<std::string>();
    const std::size_t d = j.at("d").get<std::size_t>();
    const json& ms = j.at("matrices");
    if (!ms.is_array() || ms.empty())
        throw std::invalid_argument("channel JSON matrices must be a non-empty array");
    if (kind == "kraus") {
        KrausSet k;
        for (const json& e : ms) k.ops.push_back(matrix_from_json(e));
        if (k.dim() != d) throw std::invalid_argument("channel JSON dimension mismatch");
        return kraus_to_process(k);
    }
    if (ms.size() != 1)
        throw std::invalid_argument("channel JSON expects one matrix for this kind");
    CMatrix m = matrix_from_json(ms.at(0));
    if (kind == "choi") return ProcessMatrix(m, d);
    if (kind == "superop") return superop_to_process(Superoperator(m, d));
    throw std::invalid_argument("unknown channel kind: " + kind);
}

inline json channel_to_json(const ProcessMatrix& L) {
    return json{{"kind", "choi"}, {"d", L.d}, {"matrices", json::array({matrix_to_json(L.mat)})}};
}

// counts CSV: input,measurement,shots,count
inline void write_counts_csv(std::ostream& os, const std::vector<CountRecord>& recs) {
    os << "input,measurement,shots,count\n";
    for (const CountRecord& r : recs)
        os << r.input_label << ',' << r.measurement_label << ',' << r.shots << ','
           << r.sampled << '\n';
}

inline std::vector<CountRecord> read_counts_csv(std::istream& is) {
    std::vector<CountRecord> recs;
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("counts CSV is empty");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        CountRecord r;
        std::string field;
        if (!std::getline(ss, r.input_label, ',') || !std::getline(ss, r.measurement_label, ','))
            throw std::invalid_argument("counts CSV row is malformed: " + line);
        if (!std::getline(ss, field, ',')) throw std::invalid_argument("counts CSV missing shots");
        r.shots = std::stoull(field);
        if (!std::getline(ss, field, ',')) throw std::invalid_argument("counts CSV missing count");
        r.sampled = std::stoull(field);
        recs.push_back(r);
    }
    return recs;
}

inline std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path);
    if (!f) throw std::invalid_argument("cannot write file: " + path);
    f << content;
}

}  // namespace ncp
