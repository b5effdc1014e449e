// Copyright 2026 The qsurrogate Authors
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

#include "qsurrogate/config.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"

namespace qsurrogate {

using Json = nlohmann::ordered_json;

ConfigError::ConfigError(std::string field, std::optional<std::size_t> line, const std::string &message)
    : std::runtime_error(message), field_(std::move(field)), line_(line) {}

std::string_view kind_name(ScenarioKind k) noexcept {
    switch (k) {
    case ScenarioKind::Unitary: return "unitary";
    case ScenarioKind::Qrf: return "qrf";
    case ScenarioKind::Joint: return "joint";
    }
    return "unknown";
}

const TimeGrid &ScenarioConfig::grid(const std::string &name) const {
    for (const auto &[n, g] : grids) {
        if (n == name) return g;
    }
    throw ConfigError("grids." + name, std::nullopt, "no grid named '" + name + "'");
}

namespace {

std::vector<std::string> split_path(const std::string &path) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : path) {
        if (c == '.') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

std::size_t line_of(const std::string &text, std::size_t pos) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < pos && i < text.size(); ++i) line += text[i] == '\n';
    return line;
}

class Parser {
  public:
    explicit Parser(const std::string &text) : text_(text) {}

    /// Best-effort line of a dotted key path: each key is searched for after
    /// the position of its parent.
    std::optional<std::size_t> locate(const std::string &path) const {
        std::size_t pos = 0;
        bool found = false;
        for (const auto &part : split_path(path)) {
            if (part.empty() || std::isdigit(static_cast<unsigned char>(part[0]))) continue;
            const std::string needle = "\"" + part + "\"";
            std::size_t at = pos;
            for (;;) {
                at = text_.find(needle, at);
                if (at == std::string::npos) return found ? std::optional(line_of(text_, pos)) : std::nullopt;
                std::size_t after = at + needle.size();
                while (after < text_.size() && std::isspace(static_cast<unsigned char>(text_[after]))) ++after;
                if (after < text_.size() && text_[after] == ':') break;
                at += needle.size();
            }
            pos = at;
            found = true;
        }
        return found ? std::optional(line_of(text_, pos)) : std::nullopt;
    }

    [[noreturn]] void fail(const std::string &field, const std::string &message) const {
        throw ConfigError(field, locate(field), field + ": " + message);
    }

    const Json &require(const Json &obj, const std::string &key, const std::string &path) const {
        if (!obj.contains(key)) fail(join(path, key), "required field is missing");
        return obj.at(key);
    }

    static std::string join(const std::string &path, const std::string &key) {
        return path.empty() ? key : path + "." + key;
    }

    void require_object(const Json &j, const std::string &path) const {
        if (!j.is_object()) fail(path, "expected an object");
    }

    void allow_only(const Json &obj, const std::set<std::string> &keys, const std::string &path,
                    const std::string &context) const {
        for (const auto &item : obj.items()) {
            if (!keys.count(item.key())) fail(join(path, item.key()), "field not allowed " + context);
        }
    }

    double number(const Json &j, const std::string &path) const {
        if (!j.is_number()) fail(path, "expected a number");
        const double v = j.get<double>();
        if (!std::isfinite(v)) fail(path, "number is not finite");
        return v;
    }

    double positive(const Json &j, const std::string &path) const {
        const double v = number(j, path);
        if (!(v > 0.0)) fail(path, "expected a positive number");
        return v;
    }

    std::uint64_t unsigned_int(const Json &j, const std::string &path) const {
        if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
            fail(path, "expected a non-negative integer");
        }
        return j.get<std::uint64_t>();
    }

    Complex complex(const Json &j, const std::string &path) const {
        if (j.is_number()) return {number(j, path), 0.0};
        if (j.is_array() && j.size() == 2) return {number(j[0], path), number(j[1], path)};
        fail(path, "expected a number or a [re, im] pair");
    }

    Matrix matrix(const Json &j, const std::string &path) const {
        if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of rows");
        const std::size_t rows = j.size();
        std::size_t cols = 0;
        for (std::size_t r = 0; r < rows; ++r) {
            if (!j[r].is_array() || j[r].empty()) fail(path, "row " + std::to_string(r) + " is not a non-empty array");
            if (r == 0) cols = j[r].size();
            if (j[r].size() != cols) fail(path, "rows have different lengths");
        }
        Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < cols; ++c) {
                m(static_cast<Index>(r), static_cast<Index>(c)) = complex(j[r][c], path);
            }
        }
        return m;
    }

    template <class Fn> auto guarded(const std::string &path, Fn &&fn) const -> decltype(fn()) {
        try {
            return fn();
        } catch (const Error &e) {
            if (e.code() == ErrorCode::DimensionMismatch || e.code() == ErrorCode::DimensionCap ||
                e.code() == ErrorCode::TableTooLarge) {
                throw Error(e.code(), path + ": " + e.what());
            }
            fail(path, e.what());
        }
    }

    HermitianMatrix hermitian(const Json &obj, const std::string &key, const std::string &path,
                              const ConfigTolerances &tol) const {
        const std::string field = join(path, key);
        Matrix m = matrix(require(obj, key, path), field);
        return guarded(field, [&] { return HermitianMatrix(std::move(m), tol.hermiticity); });
    }

    DensityMatrix density(const Json &obj, const std::string &key, const std::string &path,
                          const ConfigTolerances &tol) const {
        const std::string field = join(path, key);
        Matrix m = matrix(require(obj, key, path), field);
        return guarded(field, [&] { return DensityMatrix(std::move(m), tol.density, tol.hermiticity); });
    }

    SpectralDecomposition observable(const Json &obj, const std::string &key, const std::string &path,
                                     const ConfigTolerances &tol) const {
        const HermitianMatrix f = hermitian(obj, key, path, tol);
        return guarded(join(path, key), [&] { return spectral_decompose(f, tol.cluster); });
    }

    std::vector<double> number_list(const Json &j, const std::string &path) const {
        if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of numbers");
        std::vector<double> out;
        for (const auto &x : j) out.push_back(number(x, path));
        return out;
    }

    TimeGrid grid(const Json &j, const std::string &path) const {
        std::vector<double> times = number_list(j, path);
        return guarded(path, [&] { return TimeGrid(std::move(times)); });
    }

  private:
    const std::string &text_;
};

} // namespace

ScenarioConfig parse_config(const std::string &text) {
    Json root;
    try {
        root = Json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        const std::size_t line = line_of(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ConfigError("", line, "line " + std::to_string(line) + ": " + e.what());
    }
    const Parser p(text);
    if (!root.is_object()) throw ConfigError("", 1, "configuration must be a JSON object");

    const Json &schema = p.require(root, "schema", "");
    if (!schema.is_string() || schema.get<std::string>() != kConfigSchema) {
        p.fail("schema", "expected \"" + std::string(kConfigSchema) + "\"");
    }
    ScenarioConfig cfg;
    const Json &kind = p.require(root, "kind", "");
    const std::string kind_str = kind.is_string() ? kind.get<std::string>() : "";
    std::set<std::string> allowed{"schema", "kind", "description", "grids", "n_max", "tolerances", "sampling", "caps"};
    if (kind_str == "unitary") {
        cfg.kind = ScenarioKind::Unitary;
        allowed.insert("system");
    } else if (kind_str == "qrf") {
        cfg.kind = ScenarioKind::Qrf;
        allowed.insert("qrf");
    } else if (kind_str == "joint") {
        cfg.kind = ScenarioKind::Joint;
        allowed.insert({"system", "observer", "simulate"});
    } else {
        p.fail("kind", "expected one of \"unitary\", \"qrf\", \"joint\"");
    }
    p.allow_only(root, allowed, "", "for kind \"" + kind_str + "\"");

    if (root.contains("tolerances")) {
        const Json &t = root["tolerances"];
        p.require_object(t, "tolerances");
        p.allow_only(t, {"epsilon", "hermiticity", "density", "cluster"}, "tolerances", "here");
        if (t.contains("epsilon")) cfg.tolerances.epsilon = p.positive(t["epsilon"], "tolerances.epsilon");
        if (t.contains("hermiticity")) cfg.tolerances.hermiticity = p.positive(t["hermiticity"], "tolerances.hermiticity");
        if (t.contains("density")) cfg.tolerances.density = p.positive(t["density"], "tolerances.density");
        if (t.contains("cluster")) cfg.tolerances.cluster = p.positive(t["cluster"], "tolerances.cluster");
    }

    if (root.contains("caps")) {
        const Json &c = root["caps"];
        p.require_object(c, "caps");
        p.allow_only(c, {"max_table_entries", "max_joint_dim", "report_table_entries"}, "caps", "here");
        if (c.contains("max_table_entries"))
            cfg.caps.max_table_entries = p.unsigned_int(c["max_table_entries"], "caps.max_table_entries");
        if (c.contains("max_joint_dim"))
            cfg.caps.max_joint_dim = static_cast<Index>(p.unsigned_int(c["max_joint_dim"], "caps.max_joint_dim"));
        if (c.contains("report_table_entries"))
            cfg.caps.report_table_entries = p.unsigned_int(c["report_table_entries"], "caps.report_table_entries");
    }

    const Json &grids = p.require(root, "grids", "");
    p.require_object(grids, "grids");
    if (grids.empty()) p.fail("grids", "at least one grid is required");
    for (const auto &item : grids.items()) {
        cfg.grids.emplace_back(item.key(), p.grid(item.value(), "grids." + item.key()));
    }

    if (root.contains("n_max")) {
        const std::uint64_t n = p.unsigned_int(root["n_max"], "n_max");
        if (n == 0) p.fail("n_max", "must be at least 1");
        cfg.n_max = n;
    }

    const ConfigTolerances &tol = cfg.tolerances;
    if (cfg.kind != ScenarioKind::Qrf) {
        const Json &s = p.require(root, "system", "");
        p.require_object(s, "system");
        p.allow_only(s, {"H", "F", "rho"}, "system", "here");
        HermitianMatrix h = p.hermitian(s, "H", "system", tol);
        SpectralDecomposition f = p.observable(s, "F", "system", tol);
        DensityMatrix rho = p.density(s, "rho", "system", tol);
        cfg.system = p.guarded("system", [&] { return QuantumSystem(std::move(h), std::move(f), std::move(rho)); });
        cfg.process = std::make_shared<const UnitaryProcess>(*cfg.system);
    } else {
        const Json &q = p.require(root, "qrf", "");
        p.require_object(q, "qrf");
        p.allow_only(q, {"H_a", "G_a", "rates", "mu", "generator", "F", "rho", "sample_times"}, "qrf", "here");
        SpectralDecomposition f = p.observable(q, "F", "qrf", tol);
        DensityMatrix rho = p.density(q, "rho", "qrf", tol);
        std::optional<GKLSGenerator> gen;
        if (q.contains("generator")) {
            for (const char *k : {"H_a", "G_a", "rates", "mu"}) {
                if (q.contains(k)) p.fail(std::string("qrf.") + k, "not allowed together with qrf.generator");
            }
            Matrix l = p.matrix(q["generator"], "qrf.generator");
            gen = p.guarded("qrf.generator", [&] { return GKLSGenerator::from_matrix(f.dim(), std::move(l)); });
            cfg.qrf.raw_generator = true;
        } else {
            HermitianMatrix h_a = p.hermitian(q, "H_a", "qrf", tol);
            HermitianMatrix g_a = p.hermitian(q, "G_a", "qrf", tol);
            const Json &rates = p.require(q, "rates", "qrf");
            if (!rates.is_array()) p.fail("qrf.rates", "expected an array of {omega, gamma} objects");
            std::vector<RateTerm> terms;
            for (std::size_t i = 0; i < rates.size(); ++i) {
                const std::string path = "qrf.rates." + std::to_string(i);
                const Json &r = rates[i];
                p.require_object(r, "qrf.rates");
                p.allow_only(r, {"omega", "gamma"}, "qrf.rates", "here");
                terms.push_back({p.number(p.require(r, "omega", "qrf.rates"), "qrf.rates.omega"),
                                 p.complex(p.require(r, "gamma", "qrf.rates"), "qrf.rates.gamma")});
            }
            const double mu = q.contains("mu") ? p.number(q["mu"], "qrf.mu") : 1.0;
            gen = p.guarded("qrf.rates", [&] { return build_gkls(h_a, g_a, terms, mu, tol.cluster); });
        }
        if (q.contains("sample_times")) {
            cfg.qrf.sample_times = p.number_list(q["sample_times"], "qrf.sample_times");
            for (double t : cfg.qrf.sample_times) {
                if (!(t > 0.0)) p.fail("qrf.sample_times", "sample times must be positive");
            }
        }
        cfg.qrf.model = p.guarded("qrf", [&] {
            return std::make_shared<const QRFModel>(std::move(*gen), std::move(f), std::move(rho));
        });
        cfg.process = cfg.qrf.model;
    }

    if (cfg.kind == ScenarioKind::Joint) {
        const Json &o = p.require(root, "observer", "");
        p.require_object(o, "observer");
        p.allow_only(o, {"H_o", "G_o", "rho_o", "lambda"}, "observer", "here");
        HermitianMatrix h_o = p.hermitian(o, "H_o", "observer", tol);
        HermitianMatrix g_o = p.hermitian(o, "G_o", "observer", tol);
        DensityMatrix rho_o = p.density(o, "rho_o", "observer", tol);
        const double lambda = p.number(p.require(o, "lambda", "observer"), "observer.lambda");
        cfg.observer = p.guarded("observer", [&] {
            return ObserverSystem(std::move(h_o), std::move(g_o), std::move(rho_o), lambda);
        });
        const Index joint = cfg.observer->dim() * cfg.system->dim();
        if (joint > cfg.caps.max_joint_dim) {
            throw Error(ErrorCode::DimensionCap, "observer: joint dimension " + std::to_string(joint) +
                                                     " exceeds caps.max_joint_dim = " +
                                                     std::to_string(cfg.caps.max_joint_dim));
        }
    }

    if (root.contains("sampling")) {
        const Json &s = root["sampling"];
        p.require_object(s, "sampling");
        p.allow_only(s, {"N", "seed", "grid"}, "sampling", "here");
        SamplingSpec spec;
        spec.count = p.unsigned_int(p.require(s, "N", "sampling"), "sampling.N");
        if (spec.count == 0) p.fail("sampling.N", "must be at least 1");
        if (s.contains("seed")) spec.seed = p.unsigned_int(s["seed"], "sampling.seed");
        const Json &g = p.require(s, "grid", "sampling");
        if (!g.is_string()) p.fail("sampling.grid", "expected the name of a grid");
        spec.grid = g.get<std::string>();
        bool known = false;
        for (const auto &[name, grid] : cfg.grids) known = known || name == spec.grid;
        if (!known) p.fail("sampling.grid", "no grid named '" + spec.grid + "'");
        cfg.sampling = spec;
    }

    if (cfg.kind == ScenarioKind::Joint) {
        if (!cfg.sampling) p.fail("sampling", "required for kind \"joint\"");
        const double span = cfg.grid(cfg.sampling->grid).back();
        const Json &s = p.require(root, "simulate", "");
        p.require_object(s, "simulate");
        p.allow_only(s, {"times", "X_o", "observer_grid"}, "simulate", "here");
        SimulateSpec spec;
        spec.times = p.number_list(p.require(s, "times", "simulate"), "simulate.times");
        for (double t : spec.times) {
            if (!(t >= 0.0) || t > span) p.fail("simulate.times", "probe times must lie in [0, end of sampling grid]");
        }
        if (s.contains("X_o") != s.contains("observer_grid")) {
            p.fail(s.contains("X_o") ? "simulate.observer_grid" : "simulate.X_o",
                   "X_o and observer_grid must be given together");
        }
        if (s.contains("X_o")) {
            spec.x_o = p.observable(s, "X_o", "simulate", tol);
            if (spec.x_o->dim() != cfg.observer->dim()) {
                throw Error(ErrorCode::DimensionMismatch, "simulate.X_o: does not act on the observer space");
            }
            spec.observer_grid = p.grid(s["observer_grid"], "simulate.observer_grid");
            if (spec.observer_grid->back() > span) {
                p.fail("simulate.observer_grid", "must end no later than the sampling grid");
            }
        }
        cfg.simulate = std::move(spec);
    }
    return cfg;
}

} // namespace qsurrogate
