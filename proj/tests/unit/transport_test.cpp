#include <gtest/gtest.h>

#include <random>

#include "dona/codec.hpp"
#include "dona/transport.hpp"

namespace dona {
namespace {

bool accepted(const GateResult& r) { return std::holds_alternative<Accepted>(r); }

TEST(Gate, Threshold) {
    EXPECT_TRUE(accepted(gate({"register me", 0.93}, 0.5)));
    EXPECT_FALSE(accepted(gate({"register me", 0.2}, 0.5)));
    EXPECT_TRUE(accepted(gate({"register me", 0.5}, 0.5)));
    EXPECT_EQ(std::get<Rejected>(gate({"register me", 0.2}, 0.5)).reprompt_key, "reprompt");
}

TEST(Gate, BlankTextRejected) {
    EXPECT_FALSE(accepted(gate({"", 0.99}, 0.5)));
    EXPECT_FALSE(accepted(gate({" \t\n", 0.99}, 0.5)));
}

TEST(Gate, AcceptedKeepsLanguage) {
    auto r = gate({"hola dona", 0.9, "es"}, 0.5);
    ASSERT_TRUE(accepted(r));
    EXPECT_EQ(std::get<Accepted>(r).lang, "es");
}

TEST(Gate, MonotoneInConfidenceAndThreshold) {
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        double c = unit(rng), t = unit(rng), bump = unit(rng) * (1.0 - c);
        if (accepted(gate({"x", c}, t))) {
            EXPECT_TRUE(accepted(gate({"x", c + bump}, t)));
            EXPECT_TRUE(accepted(gate({"x", c}, t * unit(rng))));
        }
        EXPECT_EQ(accepted(gate({"x", c}, t)), c >= t);
    }
}

TEST(Wire, ReadUtterance) {
    auto e = read_event(R"({"type":"utterance","text":"hey dona","confidence":0.9})");
    EXPECT_EQ(e.text, "hey dona");
    EXPECT_DOUBLE_EQ(e.confidence, 0.9);
    EXPECT_EQ(e.lang, "en");

    auto d = read_event(R"({"type":"utterance","text":"hola","lang":"es"})");
    EXPECT_DOUBLE_EQ(d.confidence, 1.0);
    EXPECT_EQ(d.lang, "es");

    auto t = read_event(R"({"type":"utterance","text":"x","timestamp":1234})");
    EXPECT_EQ(t.timestamp_ms, 1234);
}

TEST(Wire, RejectsMalformed) {
    for (const char* bad : {R"({"type":"bogus"})", "not json", "[]", R"({"text":"x"})",
                            R"({"type":"utterance"})", R"({"type":"utterance","text":3})",
                            R"({"type":"utterance","text":"x","confidence":1.5})",
                            R"({"type":"utterance","text":"x","extra":true})"}) {
        EXPECT_THROW(read_event(bad), WireError) << bad;
    }
}

TEST(Wire, WriteSay) {
    EXPECT_EQ(write_event(Say{"How can I help you?"}), R"({"type":"say","text":"How can I help you?"})");
}

TEST(Wire, WriteDisplay) {
    Display d{DisplayKind::CourseTable, nlohmann::ordered_json::array()};
    d.rows.push_back({{"code", "CSIT-501"}, {"title", "Foundations"}, {"credits", 3}});
    d.rows.push_back({{"code", "CSIT-535"}, {"title", "HCI"}, {"credits", 3}});
    auto line = write_event(d);
    EXPECT_EQ(line.find('\n'), std::string::npos);
    auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j["type"], "display");
    EXPECT_EQ(j["kind"], "course_table");
    EXPECT_EQ(j["rows"].size(), 2u);
    EXPECT_EQ(codec::decode_display(codec::encode(d)), d);
}

TEST(Wire, UtteranceRoundTrip) {
    std::mt19937 rng(4);
    std::uniform_int_distribution<int> ch(32, 126);
    for (int i = 0; i < 200; ++i) {
        UtteranceEvent e;
        for (int n = i % 17; n > 0; --n) e.text += static_cast<char>(ch(rng));
        e.text += "\"\\\n\t\xc3\xa9";
        e.confidence = (i % 11) / 10.0;
        e.lang = i % 2 ? "es" : "en";
        e.timestamp_ms = i * 1000;
        EXPECT_EQ(read_event(write_utterance(e)), e);
    }
}

TEST(Wire, SayRoundTripThroughJson) {
    for (std::string text : {"", "How can I help you?", "line\nbreak", "quote \" and \\ slash", "¿Cómo?"}) {
        auto j = nlohmann::json::parse(write_event(Say{text}));
        EXPECT_EQ(j["text"].get<std::string>(), text);
    }
}

}  // namespace
}  // namespace dona
