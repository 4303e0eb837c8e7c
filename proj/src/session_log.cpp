#include "dona/session_log.hpp"

#include "dona/error.hpp"

namespace dona {

SessionLog::SessionLog(std::filesystem::path path) : path_(std::move(path)) {
    if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
    // Drop a torn tail left by a crash mid-append so new records start on a
    // fresh line.
    if (std::filesystem::exists(path_)) {
        std::string content;
        {
            std::ifstream in(path_, std::ios::binary);
            content.assign(std::istreambuf_iterator<char>(in), {});
        }
        if (!content.empty() && content.back() != '\n') {
            auto keep = content.find_last_of('\n');
            std::filesystem::resize_file(path_, keep == std::string::npos ? 0 : keep + 1);
        }
    }
    out_.open(path_, std::ios::binary | std::ios::app);
    if (!out_) throw Error("IoError", "cannot open session log '" + path_.string() + "'");
}

void SessionLog::append(const nlohmann::ordered_json& record) {
    auto line = record.dump() + "\n";
    std::lock_guard lock(mutex_);
    out_.write(line.data(), static_cast<std::streamsize>(line.size()));
    out_.flush();
    if (!out_) throw Error("IoError", "write to session log '" + path_.string() + "' failed");
}

std::vector<nlohmann::ordered_json> SessionLog::read(const std::filesystem::path& path) {
    std::vector<nlohmann::ordered_json> records;
    std::ifstream in(path, std::ios::binary);
    if (!in) return records;

    std::vector<std::string> lines;
    std::string line;
    bool last_terminated = true;
    while (std::getline(in, line)) {
        last_terminated = !in.eof();
        lines.push_back(std::move(line));
    }
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        try {
            records.push_back(nlohmann::ordered_json::parse(lines[i]));
        } catch (const nlohmann::json::parse_error& e) {
            if (i + 1 == lines.size() && !last_terminated) break;
            throw ParseError(path.string() + ": line " + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return records;
}

}  // namespace dona
