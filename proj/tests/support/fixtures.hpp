#pragma once

#include <unistd.h>

#include <filesystem>
#include <string>
#include <vector>

#include "dona/builtin_data.hpp"
#include "dona/catalog.hpp"

namespace dona::testing {

inline const CourseCatalog& sample_catalog() {
    static const CourseCatalog catalog = parse_catalog(builtin::sample_catalog_json());
    return catalog;
}

inline std::filesystem::path data_dir() { return DONA_TEST_DATA_DIR; }

// Student side of the registration example, preceded by the wake phrase.
inline const std::vector<std::string>& golden_script() {
    static const std::vector<std::string> script = {
        "hey dona",
        "I want to register for a course.",
        "Masters in Computer Science.",
        "Register me for HCI (CSIT-535)",
        "Yes.",
    };
    return script;
}

// The eight speaker lines of the reference exchange, in order. Agent lines
// are the text the agent must open its turn with.
struct ExpectedLine {
    bool agent;
    std::string prefix;
};

inline const std::vector<ExpectedLine>& golden_lines() {
    static const std::vector<ExpectedLine> lines = {
        {true, "How can I help you?"},
        {false, "I want to register for a course."},
        {true, "What is your degree and major?"},
        {false, "Masters in Computer Science."},
        {true, "These courses are available"},
        {false, "Register me for HCI (CSIT-535)"},
        {true, "Did you complete prerequisites?"},
        {false, "Yes."},
    };
    return lines;
}

// Fresh temporary directory removed on destruction.
class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("dona-test-" + std::to_string(::getpid()) + "-" + std::to_string(++counter));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace dona::testing
