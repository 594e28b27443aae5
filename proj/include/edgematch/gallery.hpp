#pragma once

#include "edgematch/edge_model.hpp"
#include "edgematch/hypothesis.hpp"
#include "edgematch/verification.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace edgematch {

struct GalleryEntry {
    std::string id;
    std::string file; ///< relative to the gallery root, "models/<id>.edgeset"
    std::string source;
    std::size_t edge_count = 0;
    std::string enrolled_at; ///< ISO-8601 UTC

    friend bool operator==(const GalleryEntry&, const GalleryEntry&) = default;
};

struct GalleryHit {
    std::string id;
    MatchResult result;
};

/// On-disk collection of reference edge models:
///   <root>/manifest.json        JSON array of entries
///   <root>/models/<id>.edgeset  EDGESET v1
/// Single writer, many readers; every write goes through a temp file and a rename.
class Gallery {
public:
    /// Opens `root`, creating an empty gallery if it has no manifest yet.
    /// Every manifest entry must point at a parseable edge set.
    static Gallery open(const std::filesystem::path& root);

    const std::filesystem::path& root() const { return root_; }
    const std::vector<GalleryEntry>& entries() const { return entries_; }
    bool contains(const std::string& id) const;

    /// Ids are 1-64 chars of [A-Za-z0-9._-], not starting with '.'.
    /// `enrolled_at` empty means now.
    void enroll(const std::string& id, const EdgeSet& set, const std::string& source = {},
                const std::string& enrolled_at = {});

    EdgeSet load(const std::string& id) const;

    /// Matches every entry (as reference) against the probe. Sorted by score
    /// descending, ties by id. Identical output for any thread count.
    std::vector<GalleryHit> search(const EdgeSet& probe, const HypothesisConfig& hyp_cfg = {},
                                   const VerifyConfig& ver_cfg = {}, unsigned threads = 0) const;

private:
    explicit Gallery(std::filesystem::path root) : root_(std::move(root)) {}
    void write_manifest(const std::vector<GalleryEntry>& entries) const;

    std::filesystem::path root_;
    std::vector<GalleryEntry> entries_;
};

} // namespace edgematch
