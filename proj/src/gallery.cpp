#include "edgematch/gallery.hpp"

#include "edgematch/errors.hpp"
#include "edgematch/image_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <thread>

namespace edgematch {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kManifest = "manifest.json";

bool valid_id(const std::string& id) {
    if (id.empty() || id.size() > 64 || id.front() == '.') return false;
    return std::all_of(id.begin(), id.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' || c == '_' ||
               c == '-';
    });
}

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void atomic_write(const fs::path& target, const std::string& text) {
    fs::path tmp = target;
    tmp += ".tmp";
    write_file_text(tmp, text);
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(Errc::Io, "cannot replace " + target.string());
    }
}

} // namespace

Gallery Gallery::open(const fs::path& root) {
    Gallery g(root);
    const fs::path manifest = root / kManifest;
    if (!fs::exists(manifest)) return g;

    json doc;
    try {
        doc = json::parse(read_file_text(manifest));
    } catch (const json::exception& e) {
        throw Error(Errc::GalleryCorrupt, std::string("manifest is not valid JSON: ") + e.what());
    }
    if (!doc.is_array()) throw Error(Errc::GalleryCorrupt, "manifest must be a JSON array");
    for (const auto& item : doc) {
        GalleryEntry e;
        try {
            e.id = item.at("id").get<std::string>();
            e.file = item.at("file").get<std::string>();
            e.source = item.at("source").get<std::string>();
            e.edge_count = item.at("edge_count").get<std::size_t>();
            e.enrolled_at = item.at("enrolled_at").get<std::string>();
        } catch (const json::exception& ex) {
            throw Error(Errc::GalleryCorrupt, std::string("bad manifest entry: ") + ex.what());
        }
        if (g.contains(e.id)) throw Error(Errc::GalleryCorrupt, "duplicate id in manifest: " + e.id);
        g.entries_.push_back(std::move(e));
    }
    for (const auto& e : g.entries_) {
        try {
            const EdgeSet set = read_edgeset_file((root / e.file).string());
            if (set.size() != e.edge_count) throw Error(Errc::GalleryCorrupt, "edge count mismatch for " + e.id);
        } catch (const Error& ex) {
            if (ex.code() == Errc::GalleryCorrupt) throw;
            throw Error(Errc::GalleryCorrupt, "entry " + e.id + ": " + ex.what());
        }
    }
    return g;
}

bool Gallery::contains(const std::string& id) const {
    return std::any_of(entries_.begin(), entries_.end(), [&](const GalleryEntry& e) { return e.id == id; });
}

void Gallery::write_manifest(const std::vector<GalleryEntry>& entries) const {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& e : entries) {
        doc.push_back({{"id", e.id},
                       {"file", e.file},
                       {"source", e.source},
                       {"edge_count", e.edge_count},
                       {"enrolled_at", e.enrolled_at}});
    }
    atomic_write(root_ / kManifest, doc.dump(2) + "\n");
}

void Gallery::enroll(const std::string& id, const EdgeSet& set, const std::string& source,
                     const std::string& enrolled_at) {
    if (!valid_id(id)) throw Error(Errc::GalleryInvalidId, "invalid gallery id '" + id + "'");
    if (contains(id)) throw Error(Errc::GalleryDuplicateId, "gallery already holds id '" + id + "'");
    set.validate();

    std::error_code ec;
    fs::create_directories(root_ / "models", ec);
    if (ec) throw Error(Errc::Io, "cannot create " + (root_ / "models").string());

    GalleryEntry entry{id, "models/" + id + ".edgeset", source, set.size(),
                       enrolled_at.empty() ? utc_now() : enrolled_at};
    atomic_write(root_ / entry.file, serialize(set));

    auto updated = entries_;
    updated.push_back(entry);
    try {
        write_manifest(updated);
    } catch (...) {
        fs::remove(root_ / entry.file, ec);
        throw;
    }
    entries_ = std::move(updated);
}

EdgeSet Gallery::load(const std::string& id) const {
    const auto it = std::find_if(entries_.begin(), entries_.end(), [&](const GalleryEntry& e) { return e.id == id; });
    if (it == entries_.end()) throw Error(Errc::InvalidArgument, "no gallery entry '" + id + "'");
    return read_edgeset_file((root_ / it->file).string());
}

std::vector<GalleryHit> Gallery::search(const EdgeSet& probe, const HypothesisConfig& hyp_cfg,
                                        const VerifyConfig& ver_cfg, unsigned threads) const {
    if (entries_.empty()) throw Error(Errc::GalleryEmpty, "cannot search an empty gallery");
    // Validate up front: nothing may throw inside the worker threads.
    hyp_cfg.validate();
    ver_cfg.validate();

    std::vector<EdgeSet> models;
    models.reserve(entries_.size());
    for (const auto& e : entries_) models.push_back(load(e.id));

    std::vector<GalleryHit> hits(entries_.size());
    const auto run = [&](std::size_t k) { hits[k] = {entries_[k].id, match(models[k], probe, hyp_cfg, ver_cfg)}; };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, entries_.size()));
    if (threads <= 1) {
        for (std::size_t k = 0; k < entries_.size(); ++k) run(k);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t k = next++; k < entries_.size(); k = next++) run(k);
            });
        }
    }

    std::sort(hits.begin(), hits.end(), [](const GalleryHit& l, const GalleryHit& r) {
        if (l.result.score != r.result.score) return l.result.score > r.result.score;
        return l.id < r.id;
    });
    return hits;
}

} // namespace edgematch
