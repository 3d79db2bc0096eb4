#include "commentbench/report.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <memory>

#include <openssl/evp.h>

#include "commentbench/error.hpp"

#ifndef COMMENTBENCH_VERSION
#define COMMENTBENCH_VERSION "0.0.0"
#endif

namespace commentbench {

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 init failed");
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), digest, &len);
    std::string hex;
    char two[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(two, sizeof two, "%02x", digest[i]);
        hex += two;
    }
    return hex;
}

void add_input(RunManifest& manifest, const std::filesystem::path& path) {
    if (std::filesystem::is_directory(path)) {
        manifest.inputs.push_back({path.string(), ""});
        return;
    }
    manifest.inputs.push_back({path.string(), sha256_file(path)});
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string tool_version() { return COMMENTBENCH_VERSION; }

nlohmann::json RunManifest::to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["flags"] = flags;
    j["seeds"] = seeds;
    j["inputs"] = nlohmann::json::array();
    for (const auto& in : inputs) {
        nlohmann::json e{{"path", in.path}};
        if (in.sha256.empty())
            e["sha256"] = nullptr;
        else
            e["sha256"] = in.sha256;
        j["inputs"].push_back(std::move(e));
    }
    j["outputs"] = outputs;
    j["version"] = tool_version.empty() ? commentbench::tool_version() : tool_version;
    j["timestamp"] = timestamp.empty() ? utc_timestamp() : timestamp;
    return j;
}

} // namespace commentbench
