#include "ymland/io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ymland {

using nlohmann::json;

namespace {

json poly_to_json(const Poly4& p) {
    json arr = json::array();
    for (const auto& [e, c] : p.terms()) {
        arr.push_back({{"mono", {e[0], e[1], e[2], e[3]}}, {"coef", c}});
    }
    return arr;
}

Poly4 poly_from_json(const json& arr) {
    Poly4 p;
    for (const json& term : arr) {
        const auto& mono = term.at("mono");
        if (mono.size() != 4) throw std::invalid_argument("boundary spec: mono must have 4 exponents");
        Poly4::Exponents e{mono[0].get<int>(), mono[1].get<int>(), mono[2].get<int>(), mono[3].get<int>()};
        p.add_term(e, term.at("coef").get<double>());
    }
    return p;
}

json mat3_to_json(const Mat3& m) {
    json rows = json::array();
    for (int i = 0; i < 3; ++i) rows.push_back({m(i, 0), m(i, 1), m(i, 2)});
    return rows;
}

Mat3 mat3_from_json(const json& rows) {
    if (rows.size() != 3) throw std::invalid_argument("boundary spec: A must be 3x3");
    Mat3 m;
    for (int i = 0; i < 3; ++i) {
        if (rows[i].size() != 3) throw std::invalid_argument("boundary spec: A must be 3x3");
        for (int j = 0; j < 3; ++j) m(i, j) = rows[i][j].get<double>();
    }
    return m;
}

}  // namespace

std::string boundary_spec_to_json(const BoundarySpec& spec, int indent) {
    json j;
    j["schema_version"] = kSchemaVersion;
    json base = json::array();
    for (int l = 0; l < 3; ++l) {
        json comps = json::array();
        for (int c = 0; c < 4; ++c) comps.push_back(poly_to_json(spec.base()[l].comp[c]));
        base.push_back(comps);
    }
    j["base"] = base;
    j["A"] = mat3_to_json(spec.synth());
    return j.dump(indent);
}

BoundarySpec boundary_spec_from_json(const std::string& text) {
    const json j = json::parse(text);
    std::array<PolyOneForm, 3> base;
    if (j.contains("base")) {
        const json& b = j.at("base");
        if (b.size() != 3) throw std::invalid_argument("boundary spec: base must have 3 Lie components");
        for (int l = 0; l < 3; ++l) {
            if (b[l].size() != 4)
                throw std::invalid_argument("boundary spec: each base component must have 4 1-form coefficients");
            for (int c = 0; c < 4; ++c) base[l].comp[c] = poly_from_json(b[l][c]);
        }
    }
    const Mat3 a = j.contains("A") ? mat3_from_json(j.at("A")) : Mat3::Zero();
    return BoundarySpec(base, a);  // validates harmonicity
}

BoundarySpec load_boundary_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open boundary spec file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return boundary_spec_from_json(ss.str());
}

void save_boundary_spec(const BoundarySpec& spec, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write boundary spec file: " + path);
    out << boundary_spec_to_json(spec) << "\n";
}

Mat3 parse_matrix3(const std::string& text) {
    if (text.rfind("diag:", 0) == 0) {
        std::string rest = text.substr(5);
        for (char& ch : rest)
            if (ch == ',') ch = ' ';
        std::istringstream ss(rest);
        double a, b, c;
        if (!(ss >> a >> b >> c)) throw std::invalid_argument("parse_matrix3: expected diag:a,b,c");
        Mat3 m = Mat3::Zero();
        m(0, 0) = a;
        m(1, 1) = b;
        m(2, 2) = c;
        return m;
    }
    std::string rest = text;
    for (char& ch : rest)
        if (ch == ',') ch = ' ';
    std::istringstream ss(rest);
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (!(ss >> m(i, j))) throw std::invalid_argument("parse_matrix3: expected 9 reals");
    return m;
}

Vec4 parse_vec4(const std::string& text) {
    std::string rest = text;
    for (char& ch : rest)
        if (ch == ',') ch = ' ';
    std::istringstream ss(rest);
    Vec4 v;
    for (int i = 0; i < 4; ++i)
        if (!(ss >> v[i])) throw std::invalid_argument("parse_vec4: expected 4 reals");
    return v;
}

}  // namespace ymland
