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

#include "qsurrogate/report.hpp"

#include <algorithm>
#include <cstdio>

#include <openssl/evp.h>

namespace qsurrogate {

std::string sha256_hex(const std::string &bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorCode::InvalidArgument, "SHA-256 digest failed");
    }
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

ReportJson complex_json(Complex z) { return ReportJson::array({z.real(), z.imag()}); }

ReportJson to_json(const Matrix &m) {
    ReportJson rows = ReportJson::array();
    for (Index i = 0; i < m.rows(); ++i) {
        ReportJson row = ReportJson::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

ReportJson to_json(const RealMatrix &m) {
    ReportJson rows = ReportJson::array();
    for (Index i = 0; i < m.rows(); ++i) {
        ReportJson row = ReportJson::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

ReportJson observable_json(const SpectralDecomposition &sd) {
    ReportJson mult = ReportJson::array();
    for (const auto &o : sd.outcomes()) mult.push_back(o.multiplicity);
    return {{"values", sd.values()}, {"multiplicities", mult}, {"clustered", sd.clustered()}};
}

ReportJson to_json(const BornTable &t) {
    std::vector<double> probs = t.probabilities();
    for (auto &p : probs) p = std::max(p, 0.0);
    return {{"times", t.grid().times()}, {"outcomes", t.outcome_values()}, {"probabilities", probs}};
}

ReportJson to_json(const BiProbTable &t, std::size_t max_entries) {
    const auto &amps = t.amplitudes();
    const std::size_t shown = std::min(max_entries, amps.size());
    ReportJson entries = ReportJson::array();
    for (std::size_t i = 0; i < shown; ++i) entries.push_back(complex_json(amps[i]));
    return {{"times", t.grid().times()},
            {"outcomes", t.outcome_values()},
            {"total_entries", amps.size()},
            {"truncated", shown < amps.size()},
            {"amplitudes", entries}};
}

namespace {

ReportJson sequence_json(const OutcomeSequence &seq, const std::vector<double> &values) {
    ReportJson out = ReportJson::array();
    for (auto i : seq) out.push_back(values.at(i));
    return out;
}

} // namespace

ReportJson to_json(const ConditionRecord &r, const std::vector<double> &values) {
    ReportJson j{{"condition", condition_name(r.condition)},
                 {"max_abs_violation", r.max_abs_violation},
                 {"threshold", r.threshold},
                 {"passed", r.passed},
                 {"positions", r.positions}};
    if (r.witness) {
        ReportJson w{{"position", nullptr}, {"plus", sequence_json(r.witness->plus, values)}};
        if (r.witness->position) w["position"] = *r.witness->position;
        if (!r.witness->minus.empty()) w["minus"] = sequence_json(r.witness->minus, values);
        j["witness"] = std::move(w);
    } else {
        j["witness"] = nullptr;
    }
    return j;
}

ReportJson to_json(const ConsistencyReport &r, const std::vector<double> &values) {
    ReportJson recs = ReportJson::array();
    for (const auto &rec : r.records) recs.push_back(to_json(rec, values));
    return recs;
}

namespace {

ReportJson pairs_json(const std::vector<std::pair<double, double>> &pairs) {
    ReportJson out = ReportJson::array();
    for (const auto &[t, tp] : pairs) out.push_back(ReportJson::array({t, tp}));
    return out;
}

} // namespace

ReportJson to_json(const NcgdReport &r) {
    ReportJson j{{"max_abs_violation", r.max_abs_violation},
                 {"threshold", r.threshold},
                 {"passed", r.passed},
                 {"witness", nullptr},
                 {"pairs", pairs_json(r.pairs)}};
    if (r.witness) j["witness"] = ReportJson::array({r.witness->first, r.witness->second});
    return j;
}

ReportJson to_json(const BlockStructure &b) {
    return {{"lower_triangular", b.lower_triangular},
            {"upper_triangular", b.upper_triangular},
            {"lower_violation", b.lower_violation},
            {"upper_violation", b.upper_violation},
            {"non_activating_residual", b.non_activating_residual},
            {"non_generating_residual", b.non_generating_residual},
            {"sample_times", b.sample_times},
            {"labels", b.labels}};
}

ReportJson to_json(const EquivalenceReport &r) {
    return {{"applicable", true},
            {"ncgd", to_json(r.ncgd)},
            {"cm_max_abs_violation", r.cm_max_abs_violation},
            {"cm_passed", r.cm_passed},
            {"cm_orders", r.cm_orders},
            {"agree", r.agree}};
}

ReportJson to_json(const ConfigTolerances &t) {
    ReportJson j{{"epsilon", t.epsilon}, {"hermiticity", t.hermiticity}, {"density", t.density}, {"cluster", nullptr}};
    if (t.cluster) j["cluster"] = *t.cluster;
    return j;
}

std::string dump(const ReportJson &j) { return j.dump(2) + "\n"; }

} // namespace qsurrogate
