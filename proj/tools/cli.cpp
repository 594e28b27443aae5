#include "cli.hpp"

#include "svg_overlay.hpp"

#include "edgematch/errors.hpp"
#include "edgematch/gallery.hpp"
#include "edgematch/image_io.hpp"
#include "edgematch/match_json.hpp"
#include "edgematch/probability.hpp"
#include "edgematch/random.hpp"
#include "edgematch/spectral_edges.hpp"
#include "edgematch/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <optional>
#include <ostream>

namespace edgematch {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

struct EffectiveConfig {
    EdgeExtractionConfig extract;
    HypothesisConfig hypothesis;
    VerifyConfig verify;
};

ordered_json to_json(const EdgeExtractionConfig& cfg) {
    ordered_json doc;
    doc["sigma"] = cfg.sigma;
    doc["mag_threshold_rel"] = cfg.mag_threshold_rel;
    doc["curvature_max"] = cfg.curvature_max;
    doc["border_margin"] = cfg.effective_border_margin();
    return doc;
}

void merge_json(EdgeExtractionConfig& cfg, const json& doc) {
    if (!doc.is_object()) throw Error(Errc::InvalidArgument, "extract config must be an object");
    for (const auto& [key, value] : doc.items()) {
        if (key == "sigma") {
            cfg.sigma = value.get<double>();
        } else if (key == "mag_threshold_rel") {
            cfg.mag_threshold_rel = value.get<double>();
        } else if (key == "curvature_max") {
            cfg.curvature_max = value.get<double>();
        } else if (key == "border_margin") {
            cfg.border_margin = value.is_null() ? std::nullopt : std::optional<int>(value.get<int>());
        } else {
            throw Error(Errc::InvalidArgument, "unknown extract config key '" + key + "'");
        }
    }
}

EffectiveConfig load_config(const std::string& path) {
    EffectiveConfig cfg;
    if (path.empty()) return cfg;
    json doc;
    try {
        doc = json::parse(read_file_text(path));
    } catch (const json::exception& e) {
        throw Error(Errc::InvalidArgument, "config file is not valid JSON: " + std::string(e.what()));
    }
    if (!doc.is_object()) throw Error(Errc::InvalidArgument, "config file must hold a JSON object");
    try {
        for (const auto& [key, value] : doc.items()) {
            if (key == "extract") {
                merge_json(cfg.extract, value);
            } else if (key == "hypothesis") {
                merge_json(cfg.hypothesis, value);
            } else if (key == "verify") {
                merge_json(cfg.verify, value);
            } else {
                throw Error(Errc::InvalidArgument, "unknown config section '" + key + "'");
            }
        }
    } catch (const json::exception& e) {
        throw Error(Errc::InvalidArgument, "bad config value: " + std::string(e.what()));
    }
    return cfg;
}

std::string shortest(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return {buf.data(), res.ptr};
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty()) {
        out << text;
    } else {
        write_file_text(path, text);
    }
}

struct Options {
    std::string config_path;
    bool verbose = false;

    // extract
    std::string image_path;
    double sigma = 0, threshold = 0, curvature_max = 0;
    int border_margin = 0;

    // match / overlay / gallery search
    std::string ref_path, probe_path, result_path;

    // synth
    std::size_t n = 300;
    int width = 256, height = 256, probe_width = 0, probe_height = 0;
    double scale = 1.0, tx = 0.0, ty = 0.0;
    double dropout = 0.0, jitter_pos = 0.0, jitter_theta = 0.0, clutter = 0.0;
    std::string out_probe;

    // mc
    std::vector<double> p_values{0.25};
    std::vector<std::uint64_t> m_values{20};
    std::uint64_t trials = 1'000'000;
    int edges = 2;
    unsigned threads = 0;

    // gallery
    std::string root, id, set_path, source;

    std::uint64_t seed = 1;
    std::string out_path;
};

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"edgematch: oriented-edge matching under shift and isotropic scale", "edgematch"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand
    Options o;
    app.add_option("--config", o.config_path, "JSON config file (sections: extract, hypothesis, verify)")
        ->check(CLI::ExistingFile);
    app.add_flag("--verbose", o.verbose, "Print the effective configuration to stderr");

    auto* extract = app.add_subcommand("extract", "Extract oriented edges from a PGM image");
    extract->add_option("--in,image", o.image_path, "Input PGM")->required();
    extract->add_option("--out", o.out_path, "Output EDGESET file (default: stdout)");
    auto* opt_sigma = extract->add_option("--sigma", o.sigma, "Gaussian smoothing scale (px)");
    auto* opt_threshold = extract->add_option("--threshold", o.threshold, "Relative magnitude threshold");
    auto* opt_curv = extract->add_option("--curvature-max", o.curvature_max, "Max |curvature| for reliable edges");
    auto* opt_margin = extract->add_option("--border-margin", o.border_margin, "Border exclusion (px)");

    auto* matchc = app.add_subcommand("match", "Match a probe edge set against a reference");
    matchc->add_option("--ref", o.ref_path, "Reference EDGESET")->required();
    matchc->add_option("--probe", o.probe_path, "Probe EDGESET")->required();
    matchc->add_option("--out", o.out_path, "Output JSON (default: stdout)");
    auto* opt_match_seed = matchc->add_option("--seed", o.seed, "Seed recorded in the verify config");

    auto* overlay = app.add_subcommand("overlay", "Draw a match as SVG");
    overlay->add_option("--ref", o.ref_path, "Reference EDGESET")->required();
    overlay->add_option("--probe", o.probe_path, "Probe EDGESET")->required();
    overlay->add_option("--result", o.result_path, "Match result JSON")->required();
    overlay->add_option("--out", o.out_path, "Output SVG (default: stdout)");

    auto* synth = app.add_subcommand("synth", "Generate a random reference set and a corrupted transformed probe");
    synth->add_option("--n", o.n, "Reference edge count");
    synth->add_option("--width", o.width, "Reference frame width");
    synth->add_option("--height", o.height, "Reference frame height");
    synth->add_option("--probe-width", o.probe_width, "Probe frame width (default: reference width)");
    synth->add_option("--probe-height", o.probe_height, "Probe frame height (default: reference height)");
    synth->add_option("--scale", o.scale, "Scale s of the probe-to-reference transform");
    synth->add_option("--tx", o.tx, "Shift x of the probe-to-reference transform");
    synth->add_option("--ty", o.ty, "Shift y of the probe-to-reference transform");
    synth->add_option("--dropout", o.dropout, "Per-edge dropout probability");
    synth->add_option("--jitter-pos", o.jitter_pos, "Position jitter std-dev (px)");
    synth->add_option("--jitter-theta", o.jitter_theta, "Orientation jitter std-dev (rad)");
    synth->add_option("--clutter", o.clutter, "Clutter edges per surviving edge");
    synth->add_option("--seed", o.seed, "Seed");
    synth->add_option("--out", o.out_path, "Reference EDGESET output")->required();
    synth->add_option("--out-probe", o.out_probe, "Probe EDGESET output");

    auto* mc = app.add_subcommand("mc", "Closed-form vs Monte Carlo basis-miss probability sweep (CSV)");
    mc->add_option("--p", o.p_values, "Dropout probabilities (comma separated)")->delimiter(',');
    mc->add_option("--m", o.m_values, "Candidate couple counts (comma separated)")->delimiter(',');
    mc->add_option("--trials", o.trials, "Trials per (p, m)");
    mc->add_option("--seed", o.seed, "Seed");
    mc->add_option("--edges", o.edges, "Edges per couple (2 or 3)")->check(CLI::IsMember({2, 3}));
    mc->add_option("--threads", o.threads, "Worker threads (0 = hardware)");
    mc->add_option("--out", o.out_path, "CSV output (default: stdout)");

    auto* gallery = app.add_subcommand("gallery", "Reference database");
    gallery->require_subcommand(1);
    auto* enroll = gallery->add_subcommand("enroll", "Add an edge set");
    enroll->add_option("--root", o.root, "Gallery directory")->required();
    enroll->add_option("--id", o.id, "Entry id")->required();
    enroll->add_option("--set", o.set_path, "EDGESET file")->required();
    enroll->add_option("--source", o.source, "Source image name");
    auto* search = gallery->add_subcommand("search", "Rank gallery entries against a probe");
    search->add_option("--root", o.root, "Gallery directory")->required();
    search->add_option("--probe", o.probe_path, "Probe EDGESET")->required();
    search->add_option("--threads", o.threads, "Worker threads (0 = hardware)");
    search->add_option("--seed", o.seed, "Seed recorded in the verify config");
    search->add_option("--out", o.out_path, "Output JSON (default: stdout)");
    auto* opt_search_seed = search->get_option("--seed");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        if (!reversed.empty()) reversed.pop_back(); // program name
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }

    try {
        EffectiveConfig cfg = load_config(o.config_path);
        if (*opt_sigma) cfg.extract.sigma = o.sigma;
        if (*opt_threshold) cfg.extract.mag_threshold_rel = o.threshold;
        if (*opt_curv) cfg.extract.curvature_max = o.curvature_max;
        if (*opt_margin) cfg.extract.border_margin = o.border_margin;
        if (*opt_match_seed || *opt_search_seed) cfg.verify.seed = o.seed;

        if (o.verbose) {
            ordered_json eff;
            eff["extract"] = to_json(cfg.extract);
            eff["hypothesis"] = to_json(cfg.hypothesis);
            eff["verify"] = to_json(cfg.verify);
            err << eff.dump(2) << "\n";
        }

        if (*extract) {
            const GrayImage img = read_pgm_file(o.image_path);
            emit(o.out_path, serialize(extract_edges(img, cfg.extract)), out);
            return kExitOk;
        }

        if (*matchc) {
            const EdgeSet a = read_edgeset_file(o.ref_path);
            const EdgeSet n = read_edgeset_file(o.probe_path);
            const MatchResult r = match(a, n, cfg.hypothesis, cfg.verify);
            emit(o.out_path, to_json(r).dump(2) + "\n", out);
            return r.decided ? kExitOk : kExitReject;
        }

        if (*overlay) {
            const EdgeSet a = read_edgeset_file(o.ref_path);
            const EdgeSet n = read_edgeset_file(o.probe_path);
            json doc;
            try {
                doc = json::parse(read_file_text(o.result_path));
            } catch (const json::exception& e) {
                throw Error(Errc::InvalidArgument, "match result is not valid JSON: " + std::string(e.what()));
            }
            emit(o.out_path, render_overlay(a, n, match_result_from_json(doc)), out);
            return kExitOk;
        }

        if (*synth) {
            const EdgeSet a = random_edge_set(o.n, o.width, o.height, o.seed);
            write_edgeset_file(o.out_path, a);
            if (!o.out_probe.empty()) {
                const CorruptionSpec spec{o.dropout, o.jitter_pos, o.jitter_theta, o.clutter, mix_seed(o.seed, 1)};
                const Transform t{o.scale, o.tx, o.ty};
                const EdgeSet n = corrupt_and_transform(a, t, spec, o.probe_width > 0 ? o.probe_width : o.width,
                                                        o.probe_height > 0 ? o.probe_height : o.height);
                write_edgeset_file(o.out_probe, n);
            }
            return kExitOk;
        }

        if (*mc) {
            std::string csv = "p,m,closed_form,mc_estimate,stderr\n";
            MonteCarloOptions opts;
            opts.trials = o.trials;
            opts.seed = o.seed;
            opts.edges_per_couple = o.edges;
            opts.threads = o.threads;
            std::uint64_t stream = 0;
            for (double p : o.p_values) {
                for (std::uint64_t m : o.m_values) {
                    const ProbabilityParams params{p, m};
                    const double closed =
                        o.edges == 2 ? miss_probability(params) : miss_probability_three_edge(params);
                    MonteCarloOptions row_opts = opts;
                    row_opts.seed = mix_seed(o.seed, stream++);
                    const auto est = monte_carlo_miss(params, row_opts);
                    csv += shortest(p) + ',' + std::to_string(m) + ',' + shortest(closed) + ',' +
                           shortest(est.estimate) + ',' + shortest(est.standard_error) + '\n';
                }
            }
            emit(o.out_path, csv, out);
            return kExitOk;
        }

        if (*enroll) {
            Gallery g = Gallery::open(o.root);
            g.enroll(o.id, read_edgeset_file(o.set_path), o.source.empty() ? o.set_path : o.source);
            return kExitOk;
        }

        if (*search) {
            const Gallery g = Gallery::open(o.root);
            const EdgeSet probe = read_edgeset_file(o.probe_path);
            ordered_json doc;
            doc["version"] = 1;
            ordered_json ranked = ordered_json::array();
            for (const auto& hit : g.search(probe, cfg.hypothesis, cfg.verify, o.threads)) {
                ranked.push_back({{"id", hit.id}, {"result", to_json(hit.result)}});
            }
            doc["results"] = std::move(ranked);
            emit(o.out_path, doc.dump(2) + "\n", out);
            return kExitOk;
        }
    } catch (const Error& e) {
        err << "error [" << errc_name(e.code()) << "]: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

} // namespace edgematch
