#pragma once

#include "nlsh/field.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace nlsh {

/// SHA-1 of "blob <size>\0<bytes>", the hash git assigns to file contents.
std::string git_blob_sha1(std::string_view bytes);

/// $SH2D_OUT if set and non-empty, else ./runs.
std::filesystem::path default_output_root();

/// An output directory <root>/<UTC timestamp>-<command>-<config hash prefix>.
/// Creation is atomic; a numeric suffix is appended when the name is taken, so
/// concurrent runs never share a directory.
///
/// Every file written through the object is hashed. finalize() writes
/// manifest.json listing input and output hashes plus outputs_hash, the hash of
/// the sorted "name sha" lines. outputs_hash covers numeric outputs only (no
/// timestamps), so identical configs give identical values on one platform.
class RunDirectory {
public:
    static RunDirectory create(const std::filesystem::path& root, std::string_view command,
                               std::string_view config_text);

    const std::filesystem::path& path() const noexcept { return path_; }

    void add_input(const std::string& name, std::string_view bytes);
    void write(const std::string& name, std::string_view bytes);
    void write_snapshot(const std::string& name, const Field& field, double time);

    std::string outputs_hash() const;
    nlohmann::json finalize(const nlohmann::json& extra = {});

private:
    RunDirectory(std::filesystem::path path, std::string command, std::string config_text);

    std::filesystem::path path_;
    std::string command_;
    std::string config_text_;
    std::map<std::string, std::string> inputs_;
    std::map<std::string, std::string> outputs_;
};

}  // namespace nlsh
