#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "dona/nlu.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace dona {
namespace {

std::vector<std::string> texts(const std::vector<Token>& tokens) {
    std::vector<std::string> out;
    for (const auto& t : tokens) out.push_back(t.text);
    return out;
}

Intent parse(std::string_view text, bool confirming = false) {
    return parse_intent(tokenize(text), ParseContext{confirming});
}

TEST(Tokenize, RegistrationUtterance) {
    auto tokens = tokenize("Register me for HCI (CSIT-535)");
    EXPECT_EQ(texts(tokens), (std::vector<std::string>{"register", "me", "for", "hci", "CSIT-535"}));
    EXPECT_EQ(tokens.back().kind, TokenKind::CourseCode);
}

TEST(Tokenize, EmptyAndSeparatorForms) {
    EXPECT_TRUE(tokenize("").empty());
    EXPECT_TRUE(tokenize("   ").empty());
    for (const char* variant : {"csit 535", "CSIT-535", "(CSIT-535)", "csit535", "Csit - 535"}) {
        auto tokens = tokenize(variant);
        ASSERT_EQ(tokens.size(), 1u) << variant;
        EXPECT_EQ(tokens[0].kind, TokenKind::CourseCode) << variant;
        EXPECT_EQ(tokens[0].text, "CSIT-535") << variant;
    }
}

TEST(Tokenize, WordsFollowedByNumbersAreNotAlwaysCodes) {
    auto tokens = tokenize("take 3 courses in 2026");
    for (const auto& t : tokens) EXPECT_NE(t.kind, TokenKind::CourseCode) << t.text;
}

TEST(Tokenize, CodeTokensAlwaysMatchGrammar) {
    std::mt19937 rng(5);
    const std::string alphabet = "abcXYZ- 0123456789()";
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1), len(0, 24);
    for (int i = 0; i < 2000; ++i) {
        std::string s;
        for (std::size_t n = len(rng); n > 0; --n) s += alphabet[pick(rng)];
        for (const auto& t : tokenize(s)) {
            if (t.kind != TokenKind::CourseCode) continue;
            auto code = CourseCode::parse(t.text);
            ASSERT_TRUE(code) << s;
            EXPECT_EQ(code->str(), t.text);
        }
    }
}

TEST(Stem, SuffixRules) {
    EXPECT_EQ(stem("registering"), "register");
    EXPECT_EQ(stem("offered"), "offer");
    EXPECT_EQ(stem("courses"), "course");
    EXPECT_EQ(stem("class"), "class");
    EXPECT_EQ(stem("bus"), "bus");
    EXPECT_EQ(stem("sing"), "sing");
}

TEST(Intent, RegisterWithoutSlot) {
    auto intent = parse("I want to register for a course");
    EXPECT_EQ(intent.kind, IntentKind::RegisterCourse);
    EXPECT_FALSE(intent.slot(slot::kCourseCode));
    EXPECT_FALSE(intent.slot(slot::kCourseMention));
}

TEST(Intent, RegisterWithCode) {
    auto intent = parse("Register me for HCI (CSIT-535)");
    EXPECT_EQ(intent.kind, IntentKind::RegisterCourse);
    EXPECT_EQ(intent.slot(slot::kCourseCode), "CSIT-535");
}

TEST(Intent, ProgramAnswer) {
    auto intent = parse("Masters in Computer Science");
    EXPECT_EQ(intent.kind, IntentKind::SetProgram);
    EXPECT_EQ(intent.slot(slot::kDegreeLevel), "masters");
    EXPECT_EQ(intent.slot(slot::kProgramName), "computer science");
}

TEST(Intent, UnknownGibberish) {
    auto intent = parse("xyzzy plugh");
    EXPECT_EQ(intent.kind, IntentKind::Unknown);
    EXPECT_EQ(intent.parse_confidence, 0.0);
}

TEST(Intent, ConfirmationNeedsContext) {
    EXPECT_EQ(parse("yes", true).kind, IntentKind::ConfirmYes);
    EXPECT_EQ(parse("no", true).kind, IntentKind::ConfirmNo);
    EXPECT_NE(parse("yes", false).kind, IntentKind::ConfirmYes);
    EXPECT_NE(parse("no", false).kind, IntentKind::ConfirmNo);
}

TEST(Intent, QuitOutranksEverything) {
    EXPECT_EQ(parse("hey dona quit").kind, IntentKind::Quit);
    EXPECT_EQ(parse("no, goodbye", true).kind, IntentKind::Quit);
}

TEST(Intent, DeterministicAndConfidenceInRange) {
    std::mt19937 rng(9);
    const std::vector<std::string> words = {"register", "yes", "no", "plan", "hci", "CSIT-535", "masters",
                                            "in", "show", "dona", "hey", "quit", "prereqs", "xyz", "the"};
    std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1), len(0, 6);
    for (int i = 0; i < 1000; ++i) {
        std::string s;
        for (std::size_t n = len(rng); n > 0; --n) s += words[pick(rng)] + " ";
        for (bool confirming : {false, true}) {
            auto a = parse(s, confirming);
            auto b = parse(s, confirming);
            EXPECT_EQ(a, b);
            EXPECT_GE(a.parse_confidence, 0.0);
            EXPECT_LE(a.parse_confidence, 1.0);
            if (!confirming) {
                EXPECT_NE(a.kind, IntentKind::ConfirmYes) << s;
                EXPECT_NE(a.kind, IntentKind::ConfirmNo) << s;
            }
        }
    }
}

TEST(Intent, LabeledCorpus) {
    std::ifstream in(testing::data_dir() / "nlu_corpus.tsv");
    ASSERT_TRUE(in);
    std::string line;
    int rows = 0;
    std::map<IntentKind, int> per_kind;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        std::string label, context, text;
        std::getline(fields, label, '\t');
        std::getline(fields, context, '\t');
        std::getline(fields, text);
        auto kind = intent_kind_from_string(label);
        ASSERT_TRUE(kind) << line;
        ++rows;
        ++per_kind[*kind];
        EXPECT_EQ(to_string(parse(text, context == "confirm").kind), label) << text;
    }
    EXPECT_EQ(rows, 60);
    for (auto kind : kAllIntentKinds) EXPECT_GE(per_kind[kind], 5) << to_string(kind);
}

TEST(RuleSet, RejectsMalformedTables) {
    EXPECT_THROW(RuleSet::parse("{}"), ParseError);
    EXPECT_THROW(RuleSet::parse("not json"), ParseError);
    EXPECT_EQ(RuleSet::builtin().version(), 1);
    auto from_file = RuleSet::load(testing::data_dir() / "nlu_rules.json");
    EXPECT_EQ(from_file.version(), 1);
}

TEST(EditDistance, MatchesReference) {
    std::mt19937 rng(13);
    std::uniform_int_distribution<int> ch('a', 'e');
    std::uniform_int_distribution<std::size_t> len(0, 12);
    for (int i = 0; i < 2000; ++i) {
        std::string a, b;
        for (std::size_t n = len(rng); n > 0; --n) a += static_cast<char>(ch(rng));
        for (std::size_t n = len(rng); n > 0; --n) b += static_cast<char>(ch(rng));
        ASSERT_EQ(edit_distance(a, b), testing::reference_edit_distance(a, b)) << a << " / " << b;
    }
}

TEST(Match, ExactTitleAndCode) {
    auto by_title = match_course("HCI", testing::sample_catalog());
    ASSERT_EQ(by_title.size(), 1u);
    EXPECT_EQ(by_title[0].code.str(), "CSIT-535");
    EXPECT_EQ(by_title[0].score, 1.0);
    EXPECT_EQ(by_title[0].matched_on, MatchedOn::Title);

    auto by_code = match_course("CSIT-535", testing::sample_catalog());
    ASSERT_EQ(by_code.size(), 1u);
    EXPECT_EQ(by_code[0].code.str(), "CSIT-535");
    EXPECT_EQ(by_code[0].score, 1.0);
    EXPECT_EQ(by_code[0].matched_on, MatchedOn::Code);
}

TEST(Match, MisspelledTitle) {
    CourseCatalog cat;
    cat.courses.push_back({CourseCode::from_string("CSIT-535"), "Human Computer Interaction", 3, {}, {}});
    cat.courses.push_back({CourseCode::from_string("CSIT-545"), "Computer Architecture", 3, {}, {}});
    auto got = match_course("Humaan Computer Interactn", cat);
    ASSERT_FALSE(got.empty());
    EXPECT_EQ(got[0].code.str(), "CSIT-535");
    // Reference DP distance 3 over max length 26.
    EXPECT_EQ(testing::reference_edit_distance("humaan computer interactn", "human computer interaction"), 3u);
    EXPECT_DOUBLE_EQ(got[0].score, 1.0 - 3.0 / 26.0);
    EXPECT_EQ(got[0].matched_on, MatchedOn::Title);
}

TEST(Match, ThresholdOrderingAndLimit) {
    CourseCatalog cat;
    for (const char* c : {"AA-104", "AA-103", "AA-102", "AA-101"}) {
        cat.courses.push_back({CourseCode::from_string(c), "Data Mining", 3, {}, {}});
    }
    cat.courses.push_back({CourseCode::from_string("AA-200"), "Quantum Chemistry", 3, {}, {}});
    auto got = match_course("data minin", cat);
    ASSERT_EQ(got.size(), kMaxCandidates);
    EXPECT_EQ(got[0].code.str(), "AA-101");
    EXPECT_EQ(got[1].code.str(), "AA-102");
    EXPECT_EQ(got[2].code.str(), "AA-103");
    for (const auto& m : got) EXPECT_GE(m.score, kFuzzyThreshold);
    EXPECT_TRUE(match_course("zzzz", cat).empty());
    EXPECT_TRUE(match_course("", cat).empty());
}

TEST(Program, ResolveByNameAndLevel) {
    const auto& cat = testing::sample_catalog();
    const auto* ms = resolve_program(cat, "computer science", "masters");
    ASSERT_NE(ms, nullptr);
    EXPECT_EQ(ms->id, "MS-CS");
    const auto* bs = resolve_program(cat, "computer science", "bachelors");
    ASSERT_NE(bs, nullptr);
    EXPECT_EQ(bs->id, "BS-CS");
    const auto* ds = resolve_program(cat, "data science", "");
    ASSERT_NE(ds, nullptr);
    EXPECT_EQ(ds->id, "MS-DS");
    EXPECT_EQ(resolve_program(cat, "astrology", "masters"), nullptr);
}

}  // namespace
}  // namespace dona
