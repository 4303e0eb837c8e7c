#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "dona/catalog.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace dona {
namespace {

using testing::sample_catalog;

Course course(const std::string& code, std::initializer_list<const char*> prereqs = {}) {
    Course c{CourseCode::from_string(code), code + " title", 3, {"P"}, {}};
    for (const char* p : prereqs) c.prerequisites.insert(CourseCode::from_string(p));
    return c;
}

CourseCatalog with_courses(std::vector<Course> courses) {
    CourseCatalog cat;
    cat.programs.push_back({"P", "Program", 30});
    cat.courses = std::move(courses);
    return cat;
}

TEST(CourseCode, AcceptsSeparatorVariants) {
    for (const char* text : {"CSIT-535", "csit-535", "CSIT 535", "csit535", "Csit-535"}) {
        auto code = CourseCode::parse(text);
        ASSERT_TRUE(code) << text;
        EXPECT_EQ(code->str(), "CSIT-535");
    }
}

TEST(CourseCode, RejectsOutsideGrammar) {
    for (const char* text : {"", "C-535", "ABCDEF-535", "CSIT-53", "CSIT-53555", "CSIT--535", "CSIT-5a5", "535"}) {
        EXPECT_FALSE(CourseCode::parse(text)) << text;
    }
    EXPECT_THROW(CourseCode::from_string("nope"), ParseError);
}

TEST(CourseCode, GrammarBoundaries) {
    EXPECT_TRUE(CourseCode::parse("AB-100"));
    EXPECT_TRUE(CourseCode::parse("ABCDE-1000"));
}

TEST(TermId, OrdersByYearThenSeason) {
    auto spring = TermId::from_string("2026-SPRING");
    auto summer = TermId::from_string("2026-summer");
    auto fall = TermId::from_string("2026-FALL");
    auto next = TermId::from_string("2027-SPRING");
    EXPECT_LT(spring, summer);
    EXPECT_LT(summer, fall);
    EXPECT_LT(fall, next);
    EXPECT_EQ(summer.str(), "2026-SUMMER");
    EXPECT_FALSE(TermId::parse("2026-WINTER"));
    EXPECT_FALSE(TermId::parse("26-FALL"));
}

TEST(Catalog, SampleContainsRegistrationExampleCourse) {
    const auto* hci = sample_catalog().find_course(CourseCode::from_string("CSIT-535"));
    ASSERT_NE(hci, nullptr);
    EXPECT_EQ(hci->title, "HCI");
    EXPECT_EQ(hci->prerequisites, CodeSet{CourseCode::from_string("CSIT-501")});
}

TEST(Catalog, EmptyDocumentIsEmptyCatalog) {
    auto cat = parse_catalog(R"({"programs":[],"courses":[],"terms":[]})");
    EXPECT_TRUE(cat.programs.empty());
    EXPECT_TRUE(cat.courses.empty());
    EXPECT_TRUE(cat.terms.empty());
}

TEST(Catalog, UnknownPrerequisiteIsUnresolvedReference) {
    const char* doc = R"({"programs":[{"id":"MS-CS","name":"CS","required_credits":30}],
        "courses":[{"code":"CSIT-535","title":"HCI","credits":3,"program_ids":["MS-CS"],"prerequisites":["CSIT-999"]}],
        "terms":[]})";
    try {
        parse_catalog(doc);
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_TRUE(e.report().has(FindingKind::UnresolvedReference));
    }
}

TEST(Catalog, ParseErrorsCarryLocus) {
    const char* missing_credits = R"({"programs":[],"courses":[{"code":"CSIT-535","title":"HCI","program_ids":[],"prerequisites":[]}],"terms":[]})";
    try {
        parse_catalog(missing_credits);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("courses[0]"), std::string::npos) << e.what();
    }
    EXPECT_THROW(parse_catalog("{\n\"programs\": [,]}"), ParseError);
    EXPECT_THROW(parse_catalog(R"({"programs":[],"courses":[],"terms":[],"extra":1})"), ParseError);
    EXPECT_THROW(parse_catalog(R"({"programs":[],"courses":[{"code":"bad","title":"x","credits":3,"program_ids":[],"prerequisites":[]}],"terms":[]})"),
                 ParseError);
}

TEST(Catalog, MissingFileIsParseError) {
    EXPECT_THROW(load_catalog("/nonexistent/catalog.json"), ParseError);
}

TEST(Catalog, SaveLoadRoundTrip) {
    auto text = save_catalog(sample_catalog());
    auto again = parse_catalog(text);
    EXPECT_EQ(save_catalog(again), text);
    ASSERT_EQ(again.courses.size(), sample_catalog().courses.size());
    for (std::size_t i = 0; i < again.courses.size(); ++i) {
        EXPECT_EQ(again.courses[i].code, sample_catalog().courses[i].code);
        EXPECT_EQ(again.courses[i].prerequisites, sample_catalog().courses[i].prerequisites);
        EXPECT_EQ(again.courses[i].program_ids, sample_catalog().courses[i].program_ids);
    }

    testing::TempDir dir;
    save_catalog(sample_catalog(), dir.path() / "c.json");
    EXPECT_EQ(save_catalog(load_catalog(dir.path() / "c.json")), text);
}

TEST(Validate, ChainHasNoFindings) {
    auto cat = with_courses({course("AA-100", {"AA-200"}), course("AA-200", {"AA-300"}), course("AA-300")});
    EXPECT_TRUE(validate_catalog(cat).ok());
}

TEST(Validate, TwoCycleReportedAsPath) {
    auto cat = with_courses({course("AA-100", {"AA-200"}), course("AA-200", {"AA-100"})});
    auto report = validate_catalog(cat);
    ASSERT_EQ(report.findings.size(), 1u);
    EXPECT_EQ(report.findings[0].describe(), "Cycle[AA-100,AA-200,AA-100]");
}

TEST(Validate, DuplicateCode) {
    auto cat = with_courses({course("CSIT-535"), course("CSIT-535")});
    auto report = validate_catalog(cat);
    ASSERT_EQ(report.findings.size(), 1u);
    EXPECT_EQ(report.findings[0].kind, FindingKind::DuplicateCode);
    EXPECT_EQ(report.findings[0].subject, "CSIT-535");
}

TEST(Validate, CollectsEveryFinding) {
    auto cat = with_courses({course("AA-100", {"AA-100"}), course("AA-200", {"ZZ-999"})});
    cat.courses[1].credits = 0;
    cat.programs.push_back({"P", "dup", 30});
    cat.terms.push_back({TermId(2026, Season::Fall), {CourseCode::from_string("ZZ-998")}});
    cat.terms.push_back({TermId(2026, Season::Fall), {}});
    auto report = validate_catalog(cat);
    for (auto kind : {FindingKind::SelfPrerequisite, FindingKind::UnresolvedReference, FindingKind::InvalidCredits,
                      FindingKind::DuplicateProgram, FindingKind::DuplicateTerm}) {
        EXPECT_TRUE(report.has(kind)) << to_string(kind);
    }
}

TEST(Validate, CyclePathsFollowEdges) {
    std::mt19937 rng(7);
    for (int i = 0; i < 100; ++i) {
        auto g = testing::random_graph(rng, 8, 0.3, false);
        auto cat = testing::catalog_from_graph(g);
        for (const auto& f : validate_catalog(cat).findings) {
            ASSERT_EQ(f.kind, FindingKind::Cycle);
            ASSERT_GE(f.cycle.size(), 3u);
            EXPECT_EQ(f.cycle.front(), f.cycle.back());
            for (std::size_t k = 0; k + 1 < f.cycle.size(); ++k) {
                EXPECT_TRUE(cat.find_course(f.cycle[k])->prerequisites.count(f.cycle[k + 1]));
            }
        }
    }
}

TEST(Validate, CycleDetectionMatchesBruteForce) {
    std::mt19937 rng(11);
    for (int i = 0; i < 300; ++i) {
        auto g = testing::random_graph(rng, 10, 0.15, i % 3 == 0);
        bool expected = testing::has_cycle_bruteforce(g);
        EXPECT_EQ(validate_catalog(testing::catalog_from_graph(g)).has(FindingKind::Cycle), expected) << "graph " << i;
    }
}

TEST(Program, CoursesSortedByCode) {
    auto cat = with_courses({course("CSIT-535"), course("CSIT-501")});
    cat.programs[0].id = "MS-CS";
    for (auto& c : cat.courses) c.program_ids = {"MS-CS"};
    auto list = courses_for_program(cat, "MS-CS");
    ASSERT_EQ(list.size(), 2u);
    EXPECT_EQ(list[0].code.str(), "CSIT-501");
    EXPECT_EQ(list[1].code.str(), "CSIT-535");
}

TEST(Program, EmptyAndUnknown) {
    auto cat = with_courses({});
    EXPECT_TRUE(courses_for_program(cat, "P").empty());
    EXPECT_THROW(courses_for_program(cat, "PHD-XX"), UnknownProgram);
}

TEST(Lookup, CaseInsensitiveCode) {
    auto hit = lookup_course(sample_catalog(), "csit-535");
    ASSERT_TRUE(hit);
    EXPECT_EQ(hit->code.str(), "CSIT-535");
    EXPECT_TRUE(lookup_course(sample_catalog(), "CSIT-501"));
    EXPECT_FALSE(lookup_course(CourseCatalog{}, "CSIT-535"));
    EXPECT_FALSE(lookup_course(sample_catalog(), "garbage"));
}

}  // namespace
}  // namespace dona
