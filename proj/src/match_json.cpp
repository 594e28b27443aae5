#include "edgematch/match_json.hpp"

#include "edgematch/errors.hpp"

#include <set>
#include <string>

namespace edgematch {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json pair_json(const IndexPair& p) { return ordered_json::array({p.first, p.second}); }

IndexPair pair_from(const json& j) {
    if (!j.is_array() || j.size() != 2) throw Error(Errc::InvalidArgument, "expected a two-element index array");
    return {j[0].get<std::size_t>(), j[1].get<std::size_t>()};
}

void reject_unknown(const json& doc, const std::set<std::string>& known, const char* section) {
    if (!doc.is_object()) throw Error(Errc::InvalidArgument, std::string(section) + " config must be an object");
    for (const auto& [key, value] : doc.items()) {
        if (!known.contains(key)) {
            throw Error(Errc::InvalidArgument, std::string("unknown ") + section + " config key '" + key + "'");
        }
    }
}

template <typename T>
void take(const json& doc, const char* key, T& field) {
    if (doc.contains(key)) field = doc.at(key).get<T>();
}

} // namespace

ordered_json to_json(const MatchResult& r) {
    ordered_json doc;
    doc["version"] = 1;
    doc["decided"] = r.decided;
    doc["score"] = r.score;
    if (r.transform) {
        doc["transform"] = {{"s", r.transform->s}, {"tx", r.transform->tx}, {"ty", r.transform->ty}};
    } else {
        doc["transform"] = nullptr;
    }
    ordered_json pairs = ordered_json::array();
    for (const auto& p : r.matched_pairs) pairs.push_back(pair_json(p));
    doc["matched_pairs"] = std::move(pairs);
    doc["counts"] = {{"matched", r.matched}, {"a", r.a_count}, {"n_visible", r.n_visible}};
    doc["branches_tried"] = r.branches_tried;
    doc["confidence"] = r.confidence;
    doc["basis"] = {{"a", r.basis_a ? pair_json(*r.basis_a) : ordered_json(nullptr)},
                    {"n", r.basis_n ? pair_json(*r.basis_n) : ordered_json(nullptr)}};
    return doc;
}

MatchResult match_result_from_json(const json& doc) {
    try {
        if (doc.at("version").get<int>() != 1) throw Error(Errc::InvalidArgument, "unsupported match result version");
        MatchResult r;
        r.decided = doc.at("decided").get<bool>();
        r.score = doc.at("score").get<double>();
        if (const auto& t = doc.at("transform"); !t.is_null()) {
            r.transform = Transform{t.at("s").get<double>(), t.at("tx").get<double>(), t.at("ty").get<double>()};
        }
        for (const auto& p : doc.at("matched_pairs")) r.matched_pairs.push_back(pair_from(p));
        const auto& counts = doc.at("counts");
        r.matched = counts.at("matched").get<std::size_t>();
        r.a_count = counts.at("a").get<std::size_t>();
        r.n_visible = counts.at("n_visible").get<std::size_t>();
        r.branches_tried = doc.at("branches_tried").get<std::size_t>();
        r.confidence = doc.at("confidence").get<double>();
        if (doc.contains("basis")) {
            const auto& b = doc.at("basis");
            if (b.contains("a") && !b.at("a").is_null()) r.basis_a = pair_from(b.at("a"));
            if (b.contains("n") && !b.at("n").is_null()) r.basis_n = pair_from(b.at("n"));
        }
        return r;
    } catch (const json::exception& e) {
        throw Error(Errc::InvalidArgument, std::string("malformed match result: ") + e.what());
    }
}

ordered_json to_json(const HypothesisConfig& cfg) {
    ordered_json doc;
    doc["eps_theta"] = cfg.eps_theta;
    doc["eps_phi"] = cfg.eps_phi;
    doc["min_sep_angle"] = cfg.min_sep_angle;
    doc["min_dist"] = cfg.min_dist ? ordered_json(*cfg.min_dist) : ordered_json(nullptr);
    doc["s_min"] = cfg.s_min;
    doc["s_max"] = cfg.s_max;
    doc["max_basis_A"] = cfg.max_basis_A;
    doc["max_pairs_N"] = cfg.max_pairs_N;
    return doc;
}

ordered_json to_json(const VerifyConfig& cfg) {
    ordered_json doc;
    doc["eps_pos"] = cfg.eps_pos;
    doc["eps_theta"] = cfg.eps_theta;
    doc["probe_count"] = cfg.probe_count;
    doc["miss_factor"] = cfg.miss_factor;
    doc["prune_threshold"] = cfg.prune_threshold;
    doc["accept_score"] = cfg.accept_score;
    doc["max_branches"] = cfg.max_branches;
    doc["seed"] = cfg.seed;
    doc["refine"] = cfg.refine;
    return doc;
}

void merge_json(HypothesisConfig& cfg, const json& doc) {
    reject_unknown(doc,
                   {"eps_theta", "eps_phi", "min_sep_angle", "min_dist", "s_min", "s_max", "max_basis_A",
                    "max_pairs_N"},
                   "hypothesis");
    try {
        take(doc, "eps_theta", cfg.eps_theta);
        take(doc, "eps_phi", cfg.eps_phi);
        take(doc, "min_sep_angle", cfg.min_sep_angle);
        if (doc.contains("min_dist")) {
            const auto& v = doc.at("min_dist");
            cfg.min_dist = v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
        }
        take(doc, "s_min", cfg.s_min);
        take(doc, "s_max", cfg.s_max);
        take(doc, "max_basis_A", cfg.max_basis_A);
        take(doc, "max_pairs_N", cfg.max_pairs_N);
    } catch (const json::exception& e) {
        throw Error(Errc::InvalidArgument, std::string("bad hypothesis config: ") + e.what());
    }
}

void merge_json(VerifyConfig& cfg, const json& doc) {
    reject_unknown(doc,
                   {"eps_pos", "eps_theta", "probe_count", "miss_factor", "prune_threshold", "accept_score",
                    "max_branches", "seed", "refine"},
                   "verify");
    try {
        take(doc, "eps_pos", cfg.eps_pos);
        take(doc, "eps_theta", cfg.eps_theta);
        take(doc, "probe_count", cfg.probe_count);
        take(doc, "miss_factor", cfg.miss_factor);
        take(doc, "prune_threshold", cfg.prune_threshold);
        take(doc, "accept_score", cfg.accept_score);
        take(doc, "max_branches", cfg.max_branches);
        take(doc, "seed", cfg.seed);
        take(doc, "refine", cfg.refine);
    } catch (const json::exception& e) {
        throw Error(Errc::InvalidArgument, std::string("bad verify config: ") + e.what());
    }
}

} // namespace edgematch
