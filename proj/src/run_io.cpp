#include "nlsh/run_io.hpp"

#include "nlsh/error.hpp"
#include "nlsh/snapshot.hpp"

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <openssl/evp.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <sstream>

namespace nlsh {
namespace fs = std::filesystem;

std::string git_blob_sha1(std::string_view bytes) {
    const std::string header = "blob " + std::to_string(bytes.size()) + '\0';
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha1(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), header.data(), header.size()) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
        throw Error("git_blob_sha1: digest failed");
    }
    std::string hex;
    for (unsigned int k = 0; k < len; ++k) hex += fmt::format("{:02x}", digest[k]);
    return hex;
}

fs::path default_output_root() {
    const char* env = std::getenv("SH2D_OUT");
    return (env && *env) ? fs::path(env) : fs::path("runs");
}

RunDirectory::RunDirectory(fs::path path, std::string command, std::string config_text)
    : path_(std::move(path)), command_(std::move(command)), config_text_(std::move(config_text)) {}

RunDirectory RunDirectory::create(const fs::path& root, std::string_view command, std::string_view config_text) {
    fs::create_directories(root);
    const std::tm now = fmt::gmtime(std::chrono::system_clock::to_time_t(std::chrono::system_clock::now()));
    const std::string stem = fmt::format("{:%Y%m%dT%H%M%SZ}-{}-{}", now, command,
                                         git_blob_sha1(config_text).substr(0, 8));
    for (int k = 0; k < 10000; ++k) {
        const fs::path candidate = root / (k == 0 ? stem : stem + "-" + std::to_string(k));
        // create_directory returns false when the entry already exists.
        if (fs::create_directory(candidate)) {
            RunDirectory dir(candidate, std::string(command), std::string(config_text));
            if (!config_text.empty()) dir.write("config.ini", config_text);
            return dir;
        }
    }
    throw Error("RunDirectory: could not allocate a directory under " + root.string());
}

void RunDirectory::add_input(const std::string& name, std::string_view bytes) {
    inputs_[name] = git_blob_sha1(bytes);
}

void RunDirectory::write(const std::string& name, std::string_view bytes) {
    const fs::path file = path_ / name;
    if (file.has_parent_path()) fs::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("RunDirectory: cannot write " + file.string());
    outputs_[name] = git_blob_sha1(bytes);
}

void RunDirectory::write_snapshot(const std::string& name, const Field& field, double time) {
    std::ostringstream buf(std::ios::binary);
    nlsh::write_snapshot(buf, field, time);
    write(name, buf.str());
}

std::string RunDirectory::outputs_hash() const {
    std::string lines;
    for (const auto& [name, sha] : outputs_) lines += name + " " + sha + "\n";
    return git_blob_sha1(lines);
}

nlohmann::json RunDirectory::finalize(const nlohmann::json& extra) {
    nlohmann::json m;
    m["command"] = command_;
    m["created_utc"] = fmt::format(
        "{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::chrono::system_clock::to_time_t(std::chrono::system_clock::now())));
    m["config"] = config_text_;
    m["config_sha1"] = git_blob_sha1(config_text_);
    m["inputs"] = inputs_;
    m["outputs"] = outputs_;
    m["outputs_hash"] = outputs_hash();
    if (!extra.is_null()) m["summary"] = extra;
    std::ofstream out(path_ / "manifest.json");
    out << m.dump(2) << '\n';
    if (!out) throw Error("RunDirectory: cannot write manifest");
    return m;
}

}  // namespace nlsh
