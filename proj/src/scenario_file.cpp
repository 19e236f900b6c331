// Copyright 2026 The qmeasure Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qmeasure/scenario_file.hpp"

#include <fstream>
#include <regex>
#include <sstream>
#include <utility>

#include <json.hpp>

namespace qmeasure {

namespace {

using nlohmann::json;
using Index = Eigen::Index;

constexpr int schema_version = 1;

/// Where we are in the document, for diagnostics.
class Cursor {
  public:
    Cursor(const json &node, std::string source, std::string path)
        : node_(&node), source_(std::move(source)), path_(std::move(path)) {}

    [[nodiscard]] const json &node() const { return *node_; }
    [[nodiscard]] const std::string &path() const { return path_; }

    [[nodiscard]] Cursor child(const std::string &key) const {
        return {node_->at(key), source_, path_ + "/" + key};
    }
    [[nodiscard]] Cursor child(std::size_t index) const {
        return {node_->at(index), source_, path_ + "/" + std::to_string(index)};
    }
    [[nodiscard]] bool has(const std::string &key) const {
        return node_->is_object() && node_->contains(key);
    }
    [[nodiscard]] Cursor required(const std::string &key) const {
        if (!node_->is_object()) {
            fail("expected an object");
        }
        if (!node_->contains(key)) {
            fail("missing required key '" + key + "'");
        }
        return child(key);
    }

    [[noreturn]] void fail(const std::string &message) const {
        throw ScenarioFileError(source_ + ":" + (path_.empty() ? "/" : path_) +
                                ": " + message);
    }

    [[nodiscard]] double number() const {
        if (!node_->is_number()) {
            fail("expected a number");
        }
        return node_->get<double>();
    }
    [[nodiscard]] std::uint64_t unsigned_integer() const {
        if (!node_->is_number_unsigned()) {
            fail("expected a non-negative integer");
        }
        return node_->get<std::uint64_t>();
    }
    [[nodiscard]] std::string string() const {
        if (!node_->is_string()) {
            fail("expected a string");
        }
        return node_->get<std::string>();
    }

  private:
    const json *node_;
    std::string source_;
    std::string path_;
};

std::pair<std::size_t, std::size_t> line_and_column(std::string_view text,
                                                    std::size_t byte) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
        if (text[k] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

// ---------------------------------------------------------------------------
// Matrices

ComplexMatrix parse_matrix(const Cursor &at);

Complex parse_entry(const Cursor &at) {
    const json &n = at.node();
    if (n.is_number()) {
        return {n.get<double>(), 0.0};
    }
    if (n.is_array() && n.size() == 2 && n[0].is_number() && n[1].is_number()) {
        return {n[0].get<double>(), n[1].get<double>()};
    }
    at.fail("expected a [re, im] pair or a number");
}

ComplexMatrix parse_named(const Cursor &at) {
    const std::string name = at.string();
    if (name == "pauli_x") {
        return pauli_x().matrix();
    }
    if (name == "pauli_y") {
        return pauli_y().matrix();
    }
    if (name == "pauli_z") {
        return pauli_z().matrix();
    }
    static const std::regex sized(R"((identity|zero)\(\s*(\d+)\s*\))");
    std::smatch match;
    if (std::regex_match(name, match, sized)) {
        const auto n = static_cast<Index>(std::stoul(match[2].str()));
        if (n == 0) {
            at.fail("dimension must be positive");
        }
        if (match[1].str() == "identity") {
            return ComplexMatrix::Identity(n, n);
        }
        return ComplexMatrix::Zero(n, n);
    }
    at.fail("unknown matrix generator '" + name + "'");
}

ComplexMatrix parse_rows(const Cursor &at) {
    const json &n = at.node();
    if (n.empty()) {
        at.fail("matrix must have at least one row");
    }
    const std::size_t rows = n.size();
    std::size_t cols = 0;
    ComplexMatrix m;
    for (std::size_t r = 0; r < rows; ++r) {
        const Cursor row = at.child(r);
        if (!row.node().is_array() || row.node().empty()) {
            row.fail("expected a non-empty row array");
        }
        if (r == 0) {
            cols = row.node().size();
            m.resize(static_cast<Index>(rows), static_cast<Index>(cols));
        } else if (row.node().size() != cols) {
            row.fail("row length " + std::to_string(row.node().size()) +
                     " differs from " + std::to_string(cols));
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Index>(r), static_cast<Index>(c)) = parse_entry(row.child(c));
        }
    }
    return m;
}

ComplexMatrix parse_composite(const Cursor &at) {
    if (at.has("kron")) {
        const Cursor args = at.child("kron");
        if (!args.node().is_array() || args.node().size() != 2) {
            args.fail("kron takes exactly two matrices");
        }
        return tensor(parse_matrix(args.child(std::size_t{0})),
                      parse_matrix(args.child(std::size_t{1})));
    }
    if (at.has("sum")) {
        const Cursor args = at.child("sum");
        if (!args.node().is_array() || args.node().empty()) {
            args.fail("sum takes a non-empty list of matrices");
        }
        ComplexMatrix total = parse_matrix(args.child(std::size_t{0}));
        for (std::size_t k = 1; k < args.node().size(); ++k) {
            const ComplexMatrix term = parse_matrix(args.child(k));
            if (term.rows() != total.rows() || term.cols() != total.cols()) {
                args.child(k).fail("summand dimensions differ");
            }
            total += term;
        }
        return total;
    }
    if (at.has("scale")) {
        const Cursor args = at.child("scale");
        if (!args.node().is_array() || args.node().size() != 2) {
            args.fail("scale takes [factor, matrix]");
        }
        return args.child(std::size_t{0}).number() *
               parse_matrix(args.child(std::size_t{1}));
    }
    if (at.has("random")) {
        const Cursor spec = at.child("random");
        const std::uint64_t dim = spec.required("dim").unsigned_integer();
        if (dim == 0) {
            spec.child("dim").fail("dimension must be positive");
        }
        Rng rng(spec.required("seed").unsigned_integer());
        return random_hermitian(dim, rng).matrix();
    }
    at.fail("expected one of 'kron', 'sum', 'scale', 'random'");
}

ComplexMatrix parse_matrix(const Cursor &at) {
    const json &n = at.node();
    if (n.is_string()) {
        return parse_named(at);
    }
    if (n.is_array()) {
        return parse_rows(at);
    }
    if (n.is_object()) {
        return parse_composite(at);
    }
    at.fail("expected a matrix");
}

HermitianOperator parse_hermitian(const Cursor &at, std::size_t dim) {
    ComplexMatrix m = parse_matrix(at);
    if (m.rows() != static_cast<Index>(dim) || m.cols() != static_cast<Index>(dim)) {
        at.fail("expected a " + std::to_string(dim) + "x" + std::to_string(dim) +
                " matrix, got " + std::to_string(m.rows()) + "x" +
                std::to_string(m.cols()));
    }
    try {
        return HermitianOperator(std::move(m));
    } catch (const InputError &e) {
        at.fail(e.what());
    }
}

DensityOperator parse_density(const Cursor &at, std::size_t dim) {
    ComplexMatrix m = parse_matrix(at);
    if (m.rows() != static_cast<Index>(dim) || m.cols() != static_cast<Index>(dim)) {
        at.fail("expected a " + std::to_string(dim) + "x" + std::to_string(dim) +
                " matrix");
    }
    try {
        return DensityOperator(std::move(m));
    } catch (const InputError &e) {
        at.fail(e.what());
    }
}

json render_matrix(const ComplexMatrix &m) {
    json rows = json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Index c = 0; c < m.cols(); ++c) {
            row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Sections

std::pair<std::size_t, std::size_t> parse_dims(const Cursor &at) {
    const json &n = at.node();
    if (!n.is_array() || n.size() != 2) {
        at.fail("dims must be [dS, dM]");
    }
    const std::uint64_t dS = at.child(std::size_t{0}).unsigned_integer();
    const std::uint64_t dM = at.child(std::size_t{1}).unsigned_integer();
    if (dS == 0 || dM == 0) {
        at.fail("dimensions must be positive");
    }
    return {dS, dM};
}

ModelSpec parse_model(const Cursor &at) {
    if (at.has("generator")) {
        const Cursor g = at.child("generator");
        GeneratedModel spec;
        std::tie(spec.dS, spec.dM) = parse_dims(g.required("dims"));
        if (spec.dS < 2 || spec.dM < 2) {
            g.child("dims").fail("generated models need dimensions >= 2");
        }
        const Cursor family = g.required("family");
        try {
            spec.family.kind = family_from_string(family.string());
        } catch (const InputError &e) {
            family.fail(e.what());
        }
        spec.family.eta = spec.family.kind == Family::violating ? 1.0 : 0.0;
        if (spec.family.kind == Family::interpolated) {
            const Cursor eta = g.required("eta");
            spec.family.eta = eta.number();
            if (!(spec.family.eta >= 0.0 && spec.family.eta <= 1.0)) {
                eta.fail("eta must lie in [0, 1]");
            }
        }
        spec.seed = g.required("seed").unsigned_integer();
        return spec;
    }
    const auto [dS, dM] = parse_dims(at.required("dims"));
    HermitianOperator hS = parse_hermitian(at.required("h_s"), dS);
    HermitianOperator hM = parse_hermitian(at.required("h_m"), dM);
    HermitianOperator hC = parse_hermitian(at.required("h_c"), dS * dM);
    return BipartiteModel(dS, dM, std::move(hS), std::move(hM), std::move(hC));
}

Preparation parse_preparation(const Cursor &at, std::size_t dS, std::size_t dM) {
    if (at.has("rho_s") || at.has("mu_m")) {
        return MixedPreparation{parse_density(at.required("rho_s"), dS),
                                parse_density(at.required("mu_m"), dM)};
    }
    IndexPreparation p;
    const Cursor si = at.required("system_index");
    const Cursor pi = at.required("pointer_index");
    p.system_index = si.unsigned_integer();
    p.pointer_index = pi.unsigned_integer();
    if (p.system_index >= dS) {
        si.fail("system_index out of range for dS = " + std::to_string(dS));
    }
    if (p.pointer_index >= dM) {
        pi.fail("pointer_index out of range for dM = " + std::to_string(dM));
    }
    return p;
}

Schedule parse_schedule(const Cursor &at) {
    Schedule s;
    if (!at.node().is_object()) {
        at.fail("expected an object");
    }
    const auto positive = [&](const char *key, double &field) {
        if (at.has(key)) {
            const Cursor c = at.child(key);
            field = c.number();
            if (!(field > 0.0)) {
                c.fail("must be positive");
            }
        }
    };
    const auto count = [&](const char *key, std::size_t &field,
                           std::size_t minimum) {
        if (at.has(key)) {
            const Cursor c = at.child(key);
            field = c.unsigned_integer();
            if (field < minimum) {
                c.fail("must be at least " + std::to_string(minimum));
            }
        }
    };
    positive("tau", s.tau);
    positive("dtau", s.dtau);
    count("repeats", s.repeats, 2);
    count("trials", s.trials, 1);
    positive("t_max", s.t_max);
    count("constancy_points", s.constancy_points, 1);
    return s;
}

std::vector<std::vector<double>> parse_calibration(const Cursor &at,
                                                   std::size_t dS,
                                                   std::size_t dM) {
    if (!at.node().is_array() || at.node().size() != dS) {
        at.fail("calibration must have " + std::to_string(dS) + " rows");
    }
    std::vector<std::vector<double>> table(dS, std::vector<double>(dM));
    for (std::size_t i = 0; i < dS; ++i) {
        const Cursor row = at.child(i);
        if (!row.node().is_array() || row.node().size() != dM) {
            row.fail("calibration rows must have " + std::to_string(dM) +
                     " entries");
        }
        for (std::size_t l = 0; l < dM; ++l) {
            table[i][l] = row.child(l).number();
        }
    }
    return table;
}

Scenario parse_document(const Cursor &root) {
    if (!root.node().is_object()) {
        root.fail("top level must be an object");
    }
    const Cursor schema = root.required("schema");
    if (!schema.node().is_number_integer() ||
        schema.node().get<long long>() != schema_version) {
        schema.fail("unsupported schema (expected " +
                    std::to_string(schema_version) + ")");
    }

    Scenario s;
    s.name = root.required("name").string();
    const Cursor model_at = root.required("model");
    s.model = parse_model(model_at);

    std::size_t dS = 0;
    std::size_t dM = 0;
    if (const auto *g = std::get_if<GeneratedModel>(&s.model)) {
        dS = g->dS;
        dM = g->dM;
    } else {
        const auto &m = std::get<BipartiteModel>(s.model);
        dS = m.dS();
        dM = m.dM();
    }

    s.preparation = parse_preparation(root.required("preparation"), dS, dM);
    if (root.has("pointer")) {
        s.pointer = parse_hermitian(root.child("pointer"), dM);
    }
    if (root.has("calibration")) {
        s.calibration = parse_calibration(root.child("calibration"), dS, dM);
    }
    if (root.has("schedule")) {
        s.schedule = parse_schedule(root.child("schedule"));
    }
    if (root.has("seed")) {
        s.seed = root.child("seed").unsigned_integer();
    }
    return s;
}

} // namespace

Scenario parse_scenario(std::string_view text, const std::string &source) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error &e) {
        const auto [line, column] = line_and_column(text, e.byte == 0 ? 0 : e.byte - 1);
        std::string what = e.what();
        // Drop nlohmann's "[json.exception.parse_error.101] " prefix.
        if (const auto pos = what.find("] "); pos != std::string::npos) {
            what = what.substr(pos + 2);
        }
        throw ScenarioFileError(source + ":" + std::to_string(line) + ":" +
                                std::to_string(column) + ": " + what);
    }
    try {
        return parse_document(Cursor(doc, source, ""));
    } catch (const ScenarioFileError &) {
        throw;
    } catch (const InputError &e) {
        throw ScenarioFileError(source + ": " + e.what());
    }
}

Scenario load_scenario(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ScenarioFileError(path.string() + ": cannot open file");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str(), path.string());
}

std::string render_scenario(const Scenario &s) {
    json doc;
    doc["schema"] = schema_version;
    doc["name"] = s.name;

    json model;
    if (const auto *g = std::get_if<GeneratedModel>(&s.model)) {
        json gen;
        gen["dims"] = {g->dS, g->dM};
        gen["family"] = to_string(g->family.kind);
        if (g->family.kind == Family::interpolated) {
            gen["eta"] = g->family.eta;
        }
        gen["seed"] = g->seed;
        model["generator"] = std::move(gen);
    } else {
        const auto &m = std::get<BipartiteModel>(s.model);
        model["dims"] = {m.dS(), m.dM()};
        model["h_s"] = render_matrix(m.hS().matrix());
        model["h_m"] = render_matrix(m.hM().matrix());
        model["h_c"] = render_matrix(m.hC().matrix());
    }
    doc["model"] = std::move(model);

    if (const auto *idx = std::get_if<IndexPreparation>(&s.preparation)) {
        doc["preparation"] = {{"system_index", idx->system_index},
                              {"pointer_index", idx->pointer_index}};
    } else {
        const auto &mixed = std::get<MixedPreparation>(s.preparation);
        doc["preparation"] = {{"rho_s", render_matrix(mixed.rho_s.matrix())},
                              {"mu_m", render_matrix(mixed.mu_m.matrix())}};
    }
    if (s.pointer) {
        doc["pointer"] = render_matrix(s.pointer->matrix());
    }
    if (s.calibration) {
        doc["calibration"] = *s.calibration;
    }
    doc["schedule"] = {{"tau", s.schedule.tau},
                       {"dtau", s.schedule.dtau},
                       {"repeats", s.schedule.repeats},
                       {"trials", s.schedule.trials},
                       {"t_max", s.schedule.t_max},
                       {"constancy_points", s.schedule.constancy_points}};
    doc["seed"] = s.seed;
    return doc.dump(2) + "\n";
}

} // namespace qmeasure
