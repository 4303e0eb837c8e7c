#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "fixtures.hpp"

namespace dona {
namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args, const std::string& input = "") {
    std::istringstream in(input);
    std::ostringstream out, err;
    int code = cli::run(args, in, out, err);
    return {code, out.str(), err.str()};
}

std::string sample_path() { return (testing::data_dir() / "sample_catalog.json").string(); }

std::string script_text() {
    std::string text;
    for (const auto& line : testing::golden_script()) text += line + "\n";
    return text;
}

TEST(Cli, ReplPlaysGoldenScript) {
    auto r = run({"repl", "--catalog", sample_path()}, script_text());
    EXPECT_EQ(r.code, cli::kOk) << r.err;
    const std::string expected =
        "Dona: How can I help you?\n"
        "Dona: What is your degree and major?\n"
        "Dona: These courses are available for Master of Science in Computer Science.\n"
        "  CODE      TITLE                           CREDITS\n"
        "  CSIT-501  Computer Science Foundations    3\n"
        "  CSIT-505  Data Structures and Algorithms  3\n"
        "  CSIT-515  Software Engineering            3\n"
        "  CSIT-535  HCI                             3\n"
        "  CSIT-545  Computer Architecture           3\n"
        "  CSIT-553  Data Mining                     3\n"
        "  CSIT-555  Database Systems                3\n"
        "Dona: Did you complete prerequisites?\n"
        "  PREREQUISITE  TITLE                         DONE\n"
        "  CSIT-501      Computer Science Foundations  no\n"
        "Dona: You are registered for CSIT-535 (HCI) in 2026-SPRING. Would you like to add more courses?\n";
    EXPECT_EQ(r.out, expected);
}

TEST(Cli, ReplEmptyInput) {
    auto r = run({"repl", "--catalog", sample_path()});
    EXPECT_EQ(r.code, cli::kOk);
    EXPECT_TRUE(r.out.empty());
}

TEST(Cli, ReplWireMode) {
    auto r = run({"repl", "--wire", "--catalog", sample_path()},
                 "{\"type\":\"utterance\",\"text\":\"hey dona\",\"confidence\":0.9}\n"
                 "{\"type\":\"bogus\"}\n"
                 "{\"type\":\"utterance\",\"text\":\"mumble\",\"confidence\":0.1}\n");
    EXPECT_EQ(r.code, cli::kOk);
    std::istringstream lines(r.out);
    std::string line;
    std::vector<std::string> got;
    while (std::getline(lines, line)) got.push_back(line);
    ASSERT_EQ(got.size(), 3u) << r.out;
    EXPECT_EQ(got[0], R"({"type":"say","text":"How can I help you?"})");
    EXPECT_NE(got[1].find(R"("type":"error")"), std::string::npos);
    EXPECT_EQ(got[2], R"({"type":"say","text":"I didn't catch that, could you repeat?"})");
}

TEST(Cli, ReplWritesSessionLog) {
    testing::TempDir dir;
    auto r = run({"repl", "--catalog", sample_path(), "--data-dir", dir.path().string()}, "hey dona\n");
    EXPECT_EQ(r.code, cli::kOk);
    std::ifstream log(dir.path() / "repl.ndjson");
    std::string a, b;
    ASSERT_TRUE(std::getline(log, a));
    ASSERT_TRUE(std::getline(log, b));
    EXPECT_NE(a.find(R"("type":"session")"), std::string::npos);
    EXPECT_NE(b.find(R"("type":"turn")"), std::string::npos);
}

TEST(Cli, MissingCatalog) {
    auto r = run({"repl", "--catalog", "/nonexistent.json"});
    EXPECT_EQ(r.code, cli::kInputError);
    EXPECT_NE(r.err.find("cannot open"), std::string::npos) << r.err;
}

TEST(Cli, Validate) {
    auto ok = run({"validate", "--catalog", sample_path()});
    EXPECT_EQ(ok.code, cli::kOk);
    EXPECT_EQ(ok.out, "OK\n");

    testing::TempDir dir;
    auto path = dir.path() / "cyclic.json";
    std::ofstream(path) << R"({"programs":[{"id":"P","name":"P","required_credits":3}],"courses":[
        {"code":"AA-100","title":"a","credits":3,"program_ids":["P"],"prerequisites":["AA-200"]},
        {"code":"AA-200","title":"b","credits":3,"program_ids":["P"],"prerequisites":["AA-100"]}],"terms":[]})";
    auto bad = run({"validate", "--catalog", path.string()});
    EXPECT_EQ(bad.code, cli::kFindings);
    EXPECT_EQ(bad.out, "Cycle[AA-100,AA-200,AA-100]\n");

    EXPECT_EQ(run({"validate", "--catalog", "/nonexistent.json"}).code, cli::kInputError);
}

TEST(Cli, Plan) {
    auto two = run({"plan", "--catalog", sample_path(), "--target", "CSIT-535", "--cap", "6"});
    EXPECT_EQ(two.code, cli::kOk) << two.err;
    EXPECT_EQ(two.out,
              "  TERM         COURSES   CREDITS\n"
              "  2026-SPRING  CSIT-501  3\n"
              "  2026-FALL    CSIT-535  3\n"
              "total terms: 2\n");

    auto one = run({"plan", "--catalog", sample_path(), "--target", "CSIT-535", "--completed", "CSIT-501"});
    EXPECT_EQ(one.code, cli::kOk);
    EXPECT_NE(one.out.find("total terms: 1"), std::string::npos);

    auto never = run({"plan", "--catalog", sample_path(), "--target", "DATA-599", "--horizon", "2026-SPRING"});
    EXPECT_EQ(never.code, cli::kInfeasible);

    EXPECT_EQ(run({"plan", "--catalog", sample_path(), "--target", "bogus"}).code, cli::kInputError);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run({}).code, cli::kInputError);
    EXPECT_EQ(run({"frobnicate"}).code, cli::kInputError);
    EXPECT_EQ(run({"repl", "--catalog", sample_path(), "--threshold", "7"}).code, cli::kInputError);
    EXPECT_EQ(run({"--help"}).code, cli::kOk);
}

}  // namespace
}  // namespace dona
