#include "dona/nlu.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dona/builtin_data.hpp"

namespace dona {

namespace {

bool is_word_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool all_alpha(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalpha(c); });
}

bool all_digit(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

// Words that never act as a department when followed by a bare number
// ("register for 535" is not FOR-535).
const std::set<std::string, std::less<>>& non_dept_words() {
    static const std::set<std::string, std::less<>> words{
        "for", "in", "me", "the", "and", "or", "to", "of", "at", "on", "my", "is", "it", "be",
        "do", "am", "are", "was", "take", "add", "drop", "need", "want", "get", "got", "has",
        "have", "had", "with", "from", "by", "an", "as", "we", "you", "our", "your", "his",
        "her", "its", "they", "them", "this", "that", "than", "then", "all", "any", "some",
        "about", "into", "over", "after", "only", "also", "just", "more", "most", "less",
        "room", "plus", "page", "year", "like", "code", "class", "also", "course", "number",
    };
    return words;
}

struct RawToken {
    std::string text;
    TokenKind kind;
    bool space_before;
};

std::vector<RawToken> split_raw(std::string_view utterance) {
    // Typographic apostrophe (U+2019) behaves like ASCII '.
    std::string text;
    text.reserve(utterance.size());
    for (std::size_t i = 0; i < utterance.size(); ++i) {
        if (utterance.substr(i, 3) == "\xE2\x80\x99") {
            text += '\'';
            i += 2;
        } else {
            text += utterance[i];
        }
    }

    std::vector<RawToken> out;
    bool space = true;
    std::size_t i = 0;
    while (i < text.size()) {
        auto c = static_cast<unsigned char>(text[i]);
        if (std::isspace(c)) {
            space = true;
            ++i;
            continue;
        }
        if (is_word_byte(c)) {
            std::size_t j = i;
            while (j < text.size()) {
                auto d = static_cast<unsigned char>(text[j]);
                if (is_word_byte(d)) {
                    ++j;
                } else if (d == '\'' && j + 1 < text.size() &&
                           is_word_byte(static_cast<unsigned char>(text[j + 1]))) {
                    ++j;
                } else {
                    break;
                }
            }
            auto word = text.substr(i, j - i);
            out.push_back({lower(word), all_digit(word) ? TokenKind::Number : TokenKind::Word, space});
            i = j;
        } else {
            out.push_back({std::string(1, static_cast<char>(c)), TokenKind::Punct, space});
            ++i;
        }
        space = false;
    }
    return out;
}

bool dept_shaped(const RawToken& t) {
    return t.kind == TokenKind::Word && all_alpha(t.text) && t.text.size() >= 2 && t.text.size() <= 5;
}

bool number_shaped(const RawToken& t) {
    return t.kind == TokenKind::Number && t.text.size() >= 3 && t.text.size() <= 4;
}

}  // namespace

std::vector<Token> tokenize(std::string_view utterance) {
    auto raw = split_raw(utterance);
    std::vector<Token> out;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const auto& t = raw[i];
        std::optional<CourseCode> code;
        std::size_t consumed = 1;
        if (t.kind == TokenKind::Word) {
            if (!all_alpha(t.text)) {
                code = CourseCode::parse(t.text);  // "csit535"
            } else if (dept_shaped(t) && i + 2 < raw.size() && raw[i + 1].text == "-" &&
                       number_shaped(raw[i + 2])) {
                code = CourseCode::parse(t.text + "-" + raw[i + 2].text);
                consumed = 3;
            } else if (dept_shaped(t) && i + 1 < raw.size() && number_shaped(raw[i + 1]) &&
                       raw[i + 1].space_before && !non_dept_words().count(t.text)) {
                code = CourseCode::parse(t.text + "-" + raw[i + 1].text);
                consumed = 2;
            }
        }
        if (code) {
            // Drop an opening parenthesis immediately before the code and the
            // matching closing one right after it.
            if (!out.empty() && out.back().kind == TokenKind::Punct && out.back().text == "(") out.pop_back();
            out.push_back({code->str(), TokenKind::CourseCode});
            i += consumed - 1;
            if (i + 1 < raw.size() && raw[i + 1].text == ")") ++i;
            continue;
        }
        out.push_back({t.text, t.kind});
    }
    return out;
}

std::string stem(std::string_view word) {
    auto ends = [&](std::string_view suf) {
        return word.size() >= suf.size() && word.substr(word.size() - suf.size()) == suf;
    };
    if (word.size() > 5 && ends("ing")) return std::string(word.substr(0, word.size() - 3));
    if (word.size() > 4 && ends("ed")) return std::string(word.substr(0, word.size() - 2));
    if (word.size() > 3 && ends("s") && !ends("ss")) return std::string(word.substr(0, word.size() - 1));
    return std::string(word);
}

// ---------------------------------------------------------------------------
// Intent kinds

namespace {
constexpr std::pair<IntentKind, std::string_view> kKindNames[] = {
    {IntentKind::Wake, "Wake"},
    {IntentKind::RegisterCourse, "RegisterCourse"},
    {IntentKind::ListCourses, "ListCourses"},
    {IntentKind::SetProgram, "SetProgram"},
    {IntentKind::QueryPrerequisites, "QueryPrerequisites"},
    {IntentKind::PlanDegree, "PlanDegree"},
    {IntentKind::ConfirmYes, "ConfirmYes"},
    {IntentKind::ConfirmNo, "ConfirmNo"},
    {IntentKind::Quit, "Quit"},
    {IntentKind::Unknown, "Unknown"},
};

constexpr IntentKind kPriority[] = {
    IntentKind::Quit,           IntentKind::Wake,           IntentKind::ConfirmNo,
    IntentKind::ConfirmYes,     IntentKind::RegisterCourse, IntentKind::QueryPrerequisites,
    IntentKind::ListCourses,    IntentKind::SetProgram,     IntentKind::PlanDegree,
};
}  // namespace

std::string_view to_string(IntentKind kind) {
    for (const auto& [k, name] : kKindNames) {
        if (k == kind) return name;
    }
    return "Unknown";
}

std::optional<IntentKind> intent_kind_from_string(std::string_view name) {
    for (const auto& [k, n] : kKindNames) {
        if (n == name) return k;
    }
    return std::nullopt;
}

std::optional<std::string> Intent::slot(std::string_view name) const {
    auto it = slots.find(name);
    if (it == slots.end()) return std::nullopt;
    return it->second;
}

// ---------------------------------------------------------------------------
// Rules table

namespace {

std::vector<std::string> stemmed_words(const nlohmann::json& arr, const std::string& locus) {
    if (!arr.is_array()) throw ParseError(locus + ": expected array");
    std::vector<std::string> out;
    for (const auto& w : arr) {
        if (!w.is_string()) throw ParseError(locus + ": expected string");
        out.push_back(stem(lower(w.get<std::string>())));
    }
    return out;
}

std::vector<std::vector<std::string>> stemmed_phrases(const nlohmann::json& arr, const std::string& locus) {
    if (!arr.is_array()) throw ParseError(locus + ": expected array");
    std::vector<std::vector<std::string>> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        out.push_back(stemmed_words(arr[i], locus + "[" + std::to_string(i) + "]"));
        if (out.back().empty()) throw ParseError(locus + ": empty phrase");
    }
    return out;
}

}  // namespace

RuleSet RuleSet::parse(std::string_view document) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(document.begin(), document.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("rules table: ") + e.what());
    }
    if (!root.is_object()) throw ParseError("rules table: expected object");

    RuleSet rs;
    rs.version_ = root.value("version", 0);
    if (rs.version_ != 1) throw ParseError("rules table: unsupported version " + std::to_string(rs.version_));
    rs.stopwords_ = stemmed_words(root.value("stopwords", nlohmann::json::array()), "stopwords");
    rs.program_markers_ = stemmed_words(root.value("program_markers", nlohmann::json::array()), "program_markers");
    const auto levels = root.value("degree_levels", nlohmann::json::object());
    for (const auto& [level, words] : levels.items()) {
        rs.degree_levels_.emplace_back(level, stemmed_words(words, "degree_levels." + level));
    }

    const auto& intents = root.at("intents");
    if (!intents.is_array()) throw ParseError("rules table: intents must be an array");
    for (std::size_t i = 0; i < intents.size(); ++i) {
        const auto& entry = intents[i];
        std::string locus = "intents[" + std::to_string(i) + "]";
        auto kind = intent_kind_from_string(entry.value("kind", ""));
        if (!kind || *kind == IntentKind::Unknown) throw ParseError(locus + ": bad intent kind");
        Rule r;
        r.kind = *kind;
        r.keywords = stemmed_words(entry.value("keywords", nlohmann::json::array()), locus + ".keywords");
        r.phrases = stemmed_phrases(entry.value("phrases", nlohmann::json::array()), locus + ".phrases");
        r.prefixes = stemmed_phrases(entry.value("prefixes", nlohmann::json::array()), locus + ".prefixes");
        r.needs_confirmation_context = entry.value("context", "") == "confirmation";
        r.uses_degree_lexicon = entry.value("degree_lexicon", false);
        r.requires_slot = entry.value("requires_slot", false);
        const auto slots = entry.value("slots", nlohmann::json::array());
        for (const auto& s : slots) r.slots.push_back(s.get<std::string>());
        if (rs.rule(r.kind)) throw ParseError(locus + ": duplicate rule for " + std::string(to_string(r.kind)));
        rs.all_keywords_.insert(rs.all_keywords_.end(), r.keywords.begin(), r.keywords.end());
        rs.rules_.push_back(std::move(r));
    }
    std::sort(rs.stopwords_.begin(), rs.stopwords_.end());
    std::sort(rs.all_keywords_.begin(), rs.all_keywords_.end());
    return rs;
}

RuleSet RuleSet::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open rules table '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

const RuleSet& RuleSet::builtin() {
    static const RuleSet rules = parse(builtin::rules_json());
    return rules;
}

const RuleSet::Rule* RuleSet::rule(IntentKind kind) const {
    for (const auto& r : rules_) {
        if (r.kind == kind) return &r;
    }
    return nullptr;
}

bool RuleSet::is_stopword(const std::string& stemmed) const {
    return std::binary_search(stopwords_.begin(), stopwords_.end(), stemmed);
}

bool RuleSet::is_any_keyword(const std::string& stemmed) const {
    return std::binary_search(all_keywords_.begin(), all_keywords_.end(), stemmed);
}

std::optional<std::string> RuleSet::degree_level(const std::string& stemmed) const {
    for (const auto& [level, words] : degree_levels_) {
        if (std::find(words.begin(), words.end(), stemmed) != words.end()) return level;
    }
    return std::nullopt;
}

std::vector<std::string> RuleSet::degree_synonyms(std::string_view level) const {
    for (const auto& [name, words] : degree_levels_) {
        if (name == level) return words;
    }
    return {};
}

// ---------------------------------------------------------------------------
// Intent parsing

namespace {

struct Prepared {
    std::vector<std::string> words;  // stemmed Word tokens, in order
    std::vector<std::string> codes;  // CourseCode tokens
};

Prepared prepare(const std::vector<Token>& tokens) {
    Prepared p;
    for (const auto& t : tokens) {
        if (t.kind == TokenKind::Word || t.kind == TokenKind::Number) p.words.push_back(stem(t.text));
        if (t.kind == TokenKind::CourseCode) p.codes.push_back(t.text);
    }
    return p;
}

bool contains_sequence(const std::vector<std::string>& words, const std::vector<std::string>& seq) {
    if (seq.size() > words.size()) return false;
    return std::search(words.begin(), words.end(), seq.begin(), seq.end()) != words.end();
}

bool matches(const RuleSet::Rule& rule, const Prepared& p, const RuleSet& rules) {
    for (const auto& prefix : rule.prefixes) {
        if (prefix.size() <= p.words.size() && std::equal(prefix.begin(), prefix.end(), p.words.begin())) {
            return true;
        }
    }
    for (const auto& w : p.words) {
        if (std::find(rule.keywords.begin(), rule.keywords.end(), w) != rule.keywords.end()) return true;
        if (rule.uses_degree_lexicon && rules.degree_level(w)) return true;
    }
    return std::any_of(rule.phrases.begin(), rule.phrases.end(),
                       [&](const auto& ph) { return contains_sequence(p.words, ph); });
}

std::string join(const std::vector<std::string>& words) {
    std::string out;
    for (const auto& w : words) {
        if (!out.empty()) out += ' ';
        out += w;
    }
    return out;
}

// Unstemmed content words: not a keyword of any rule, not a stopword, not a degree word.
std::vector<std::string> residual(const std::vector<Token>& tokens, const RuleSet& rules, std::size_t from = 0) {
    std::vector<std::string> out;
    std::size_t word_index = 0;
    for (const auto& t : tokens) {
        if (t.kind != TokenKind::Word && t.kind != TokenKind::Number) continue;
        if (word_index++ < from) continue;
        auto s = stem(t.text);
        if (rules.is_stopword(s) || rules.is_stopword(t.text) || rules.is_any_keyword(s) || rules.degree_level(s)) {
            continue;
        }
        out.push_back(t.text);
    }
    return out;
}

void fill_slots(Intent& intent, const RuleSet::Rule& rule, const std::vector<Token>& tokens,
                const Prepared& p, const RuleSet& rules) {
    for (const auto& name : rule.slots) {
        if (name == slot::kCourseCode && !p.codes.empty()) {
            intent.slots[name] = p.codes.front();
        } else if (name == slot::kCourseMention && p.codes.empty()) {
            auto words = residual(tokens, rules);
            if (!words.empty()) intent.slots[name] = join(words);
        } else if (name == slot::kDegreeLevel) {
            for (const auto& w : p.words) {
                if (auto level = rules.degree_level(w)) {
                    intent.slots[name] = *level;
                    break;
                }
            }
        } else if (name == slot::kProgramName) {
            std::size_t from = 0;
            const auto& markers = rules.program_markers();
            for (std::size_t i = 0; i < p.words.size(); ++i) {
                if (std::find(markers.begin(), markers.end(), p.words[i]) != markers.end()) from = i + 1;
            }
            auto words = residual(tokens, rules, from);
            if (!words.empty()) intent.slots[name] = join(words);
        }
    }
}

}  // namespace

Intent parse_intent(const std::vector<Token>& tokens, const ParseContext& context, const RuleSet& rules) {
    auto prepared = prepare(tokens);
    for (auto kind : kPriority) {
        const auto* rule = rules.rule(kind);
        if (!rule) continue;
        if (rule->needs_confirmation_context && !context.awaiting_confirmation) continue;
        if (!matches(*rule, prepared, rules)) continue;

        Intent intent;
        intent.kind = kind;
        fill_slots(intent, *rule, tokens, prepared, rules);
        if (rule->requires_slot && intent.slots.empty()) continue;
        intent.parse_confidence = intent.slots.count(slot::kCourseMention) ? 0.9 : 1.0;
        return intent;
    }
    return Intent{IntentKind::Unknown, {}, 0.0};
}

// ---------------------------------------------------------------------------
// Fuzzy course matching

std::size_t edit_distance(std::string_view a, std::string_view b) {
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::size_t up = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0u : 1u)});
            diag = up;
        }
    }
    return row[b.size()];
}

namespace {
std::string normalize_mention(std::string_view s) {
    std::string out;
    bool pending_space = false;
    for (unsigned char c : s) {
        if (std::isspace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out += ' ';
        pending_space = false;
        out += static_cast<char>(std::tolower(c));
    }
    return out;
}
}  // namespace

std::vector<MatchCandidate> match_course(std::string_view mention, const CourseCatalog& catalog) {
    auto needle = normalize_mention(mention);
    if (needle.empty()) return {};

    if (auto code = CourseCode::parse(needle)) {
        if (catalog.find_course(*code)) return {{*code, 1.0, MatchedOn::Code}};
    }

    std::vector<MatchCandidate> out;
    for (const auto& c : catalog.courses) {
        auto title = normalize_mention(c.title);
        std::size_t longest = std::max(title.size(), needle.size());
        if (longest == 0) continue;
        double score = 1.0 - static_cast<double>(edit_distance(needle, title)) / static_cast<double>(longest);
        if (score >= kFuzzyThreshold) out.push_back({c.code, score, MatchedOn::Title});
    }
    std::stable_sort(out.begin(), out.end(), [](const MatchCandidate& a, const MatchCandidate& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.code < b.code;
    });
    if (out.size() > kMaxCandidates) out.resize(kMaxCandidates);
    return out;
}

const Program* resolve_program(const CourseCatalog& catalog, std::string_view program_name,
                               std::string_view degree_level, const RuleSet& rules) {
    auto name = normalize_mention(program_name);
    std::vector<const Program*> candidates;
    for (const auto& p : catalog.programs) {
        if (name.empty() || lower(p.id) == name || normalize_mention(p.name).find(name) != std::string::npos) {
            candidates.push_back(&p);
        }
    }
    if (!degree_level.empty()) {
        auto synonyms = rules.degree_synonyms(degree_level);
        auto has_level = [&](const Program* p) {
            std::vector<std::string> words;
            for (const auto& t : tokenize(p->name)) words.push_back(stem(t.text));
            auto id = lower(p->id);
            words.push_back(id.substr(0, id.find('-')));
            return std::any_of(words.begin(), words.end(), [&](const std::string& w) {
                return std::find(synonyms.begin(), synonyms.end(), w) != synonyms.end();
            });
        };
        std::erase_if(candidates, [&](const Program* p) { return !has_level(p); });
    }
    if (name.empty() && candidates.size() != 1) return nullptr;
    return candidates.empty() ? nullptr : candidates.front();
}

}  // namespace dona
