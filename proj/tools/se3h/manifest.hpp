#pragma once

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "se3h/fields/shv_io.hpp"

namespace se3h::cli {

inline constexpr const char* kVersion = "se3h 0.1.0";

inline std::string sha256_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path + " for hashing");
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    std::vector<char> buf(1 << 16);
    while (is) {
        is.read(buf.data(), std::streamsize(buf.size()));
        if (is.gcount() > 0) EVP_DigestUpdate(ctx, buf.data(), std::size_t(is.gcount()));
    }
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned len = 0;
    EVP_DigestFinal_ex(ctx, md, &len);
    EVP_MD_CTX_free(ctx);
    std::string hex;
    char b[3];
    for (unsigned i = 0; i < len; ++i) {
        std::snprintf(b, sizeof b, "%02x", md[i]);
        hex += b;
    }
    return hex;
}

// One per CLI run, written last as <out>/manifest.json.
class RunManifest {
public:
    RunManifest(std::string command, nlohmann::ordered_json config, std::uint64_t seed)
        : command_(std::move(command)), config_(std::move(config)), seed_(seed),
          start_(std::chrono::steady_clock::now()), started_at_(std::time(nullptr)) {}

    void input(const std::string& path) { inputs_.push_back(path); }
    void output(const std::string& path) { outputs_.push_back(path); }

    void write(const std::string& out_dir) const {
        nlohmann::ordered_json j;
        j["command"] = command_;
        j["config"] = config_;
        j["seed"] = seed_;
        j["rng"] = "mt19937_64";
        j["version"] = kVersion;
        char ts[32];
        std::strftime(ts, sizeof ts, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&started_at_));
        j["started_utc"] = ts;
        j["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        auto digests = [](const std::vector<std::string>& files) {
            nlohmann::ordered_json a = nlohmann::ordered_json::array();
            for (const auto& f : files)
                a.push_back({{"path", std::filesystem::path(f).filename().string()}, {"sha256", sha256_file(f)}});
            return a;
        };
        j["inputs"] = digests(inputs_);
        j["outputs"] = digests(outputs_);
        const std::string path = (std::filesystem::path(out_dir) / "manifest.json").string();
        std::ofstream os(path);
        if (!os) throw IoError("cannot write " + path);
        os << j.dump(2) << "\n";
    }

private:
    std::string command_;
    nlohmann::ordered_json config_;
    std::uint64_t seed_;
    std::chrono::steady_clock::time_point start_;
    std::time_t started_at_;
    std::vector<std::string> inputs_, outputs_;
};

}  // namespace se3h::cli
