#pragma once

// Append-only newline-delimited JSON log of session events. One record per
// line: {"type":"session",...} when a session is created and
// {"type":"turn",...} for every handled utterance.

#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

namespace dona {

class SessionLog {
public:
    explicit SessionLog(std::filesystem::path path);

    // Appends one record and flushes. Thread-safe.
    void append(const nlohmann::ordered_json& record);

    const std::filesystem::path& path() const noexcept { return path_; }

    // Every complete record in order. A torn final line (crash mid-write) is
    // skipped; a malformed line elsewhere throws ParseError.
    static std::vector<nlohmann::ordered_json> read(const std::filesystem::path& path);

private:
    std::filesystem::path path_;
    std::mutex mutex_;
    std::ofstream out_;
};

}  // namespace dona
