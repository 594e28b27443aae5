#pragma once

#include "edgematch/errors.hpp"

#include <gtest/gtest.h>

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace edgematch::testing {

inline std::vector<std::uint8_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

/// Expects `fn` to throw edgematch::Error with the given code.
template <typename Fn>
void expect_errc(Fn&& fn, Errc code) {
    try {
        fn();
        ADD_FAILURE() << "expected Error(" << errc_name(code) << ")";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), code) << "got " << errc_name(e.code()) << ": " << e.what();
    }
}

/// Fresh scratch directory removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::mt19937_64 gen{std::random_device{}()};
        path_ = std::filesystem::temp_directory_path() / ("edgematch-test-" + std::to_string(gen()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

} // namespace edgematch::testing
