#include "dona/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace dona {

namespace {

using ordered_json = nlohmann::ordered_json;

bool all_of_class(std::string_view s, int (*pred)(int)) {
    return std::all_of(s.begin(), s.end(), [pred](unsigned char c) { return pred(c) != 0; });
}

std::string upper(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

constexpr std::string_view kSeasonNames[] = {"SPRING", "SUMMER", "FALL"};

}  // namespace

std::optional<CourseCode> CourseCode::parse(std::string_view text) {
    std::size_t i = 0;
    while (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i]))) ++i;
    std::string_view dept = text.substr(0, i);
    std::string_view rest = text.substr(i);
    if (!rest.empty() && (rest.front() == '-' || rest.front() == ' ')) rest.remove_prefix(1);
    if (dept.size() < 2 || dept.size() > 5) return std::nullopt;
    if (rest.size() < 3 || rest.size() > 4 || !all_of_class(rest, ::isdigit)) return std::nullopt;
    return CourseCode(upper(dept), std::string(rest));
}

CourseCode CourseCode::from_string(std::string_view text) {
    if (auto code = parse(text)) return *code;
    throw ParseError("malformed course code '" + std::string(text) + "'");
}

std::string join_codes(const CodeSet& codes, std::string_view sep) {
    std::string out;
    for (const auto& c : codes) {
        if (!out.empty()) out += sep;
        out += c.str();
    }
    return out;
}

std::optional<TermId> TermId::parse(std::string_view text) {
    auto dash = text.find('-');
    if (dash != 4) return std::nullopt;
    auto year = text.substr(0, 4);
    if (!all_of_class(year, ::isdigit)) return std::nullopt;
    auto season = upper(text.substr(dash + 1));
    for (std::size_t s = 0; s < std::size(kSeasonNames); ++s) {
        if (season == kSeasonNames[s]) {
            return TermId(std::stoi(std::string(year)), static_cast<Season>(s));
        }
    }
    return std::nullopt;
}

TermId TermId::from_string(std::string_view text) {
    if (auto id = parse(text)) return *id;
    throw ParseError("malformed term id '" + std::string(text) + "'");
}

std::string TermId::str() const {
    std::ostringstream os;
    os << year_ << '-' << kSeasonNames[static_cast<std::size_t>(season_)];
    return os.str();
}

const Course* CourseCatalog::find_course(const CourseCode& code) const {
    auto it = std::find_if(courses.begin(), courses.end(),
                           [&](const Course& c) { return c.code == code; });
    return it == courses.end() ? nullptr : &*it;
}

const Program* CourseCatalog::find_program(std::string_view id) const {
    auto it = std::find_if(programs.begin(), programs.end(),
                           [&](const Program& p) { return p.id == id; });
    return it == programs.end() ? nullptr : &*it;
}

const Term* CourseCatalog::find_term(const TermId& id) const {
    auto it = std::find_if(terms.begin(), terms.end(), [&](const Term& t) { return t.id == id; });
    return it == terms.end() ? nullptr : &*it;
}

std::vector<TermId> CourseCatalog::term_order() const {
    std::vector<TermId> ids;
    ids.reserve(terms.size());
    for (const auto& t : terms) ids.push_back(t.id);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

// ---------------------------------------------------------------------------
// Validation

std::string_view to_string(FindingKind kind) {
    switch (kind) {
        case FindingKind::DuplicateCode: return "DuplicateCode";
        case FindingKind::DuplicateProgram: return "DuplicateProgram";
        case FindingKind::DuplicateTerm: return "DuplicateTerm";
        case FindingKind::UnresolvedReference: return "UnresolvedReference";
        case FindingKind::SelfPrerequisite: return "SelfPrerequisite";
        case FindingKind::Cycle: return "Cycle";
        case FindingKind::InvalidCredits: return "InvalidCredits";
    }
    return "?";
}

std::string ValidationFinding::describe() const {
    std::string out(to_string(kind));
    if (kind == FindingKind::Cycle) {
        out += "[";
        for (std::size_t i = 0; i < cycle.size(); ++i) {
            if (i) out += ",";
            out += cycle[i].str();
        }
        out += "]";
        return out;
    }
    out += "(\"" + subject + "\")";
    if (!detail.empty()) out += ": " + detail;
    return out;
}

bool ValidationReport::has(FindingKind kind) const {
    return std::any_of(findings.begin(), findings.end(),
                       [kind](const ValidationFinding& f) { return f.kind == kind; });
}

namespace {

std::string report_message(const ValidationReport& report) {
    std::string msg = "catalog failed validation:";
    for (const auto& f : report.findings) msg += "\n  " + f.describe();
    return msg;
}

// Colored DFS over prerequisite edges. Every back edge yields one Cycle
// finding whose path runs from the back-edge target around to itself.
class CycleFinder {
public:
    explicit CycleFinder(const std::map<CourseCode, std::vector<CourseCode>>& edges) : edges_(edges) {}

    std::vector<std::vector<CourseCode>> run() {
        for (const auto& [code, _] : edges_) {
            if (color_[code] == White) visit(code);
        }
        return cycles_;
    }

private:
    enum Color { White, Grey, Black };

    void visit(const CourseCode& code) {
        color_[code] = Grey;
        stack_.push_back(code);
        for (const auto& next : edges_.at(code)) {
            auto c = color_[next];
            if (c == White) {
                visit(next);
            } else if (c == Grey) {
                auto from = std::find(stack_.begin(), stack_.end(), next);
                std::vector<CourseCode> path(from, stack_.end());
                path.push_back(next);
                cycles_.push_back(std::move(path));
            }
        }
        stack_.pop_back();
        color_[code] = Black;
    }

    const std::map<CourseCode, std::vector<CourseCode>>& edges_;
    std::map<CourseCode, Color> color_;
    std::vector<CourseCode> stack_;
    std::vector<std::vector<CourseCode>> cycles_;
};

}  // namespace

ValidationError::ValidationError(ValidationReport report)
    : Error("ValidationError", report_message(report)), report_(std::move(report)) {}

ValidationReport validate_catalog(const CourseCatalog& catalog) {
    ValidationReport report;
    auto add = [&](FindingKind kind, std::string subject, std::string detail = {}) {
        report.findings.push_back({kind, std::move(subject), std::move(detail), {}});
    };

    std::set<std::string> program_ids;
    for (const auto& p : catalog.programs) {
        if (!program_ids.insert(p.id).second) add(FindingKind::DuplicateProgram, p.id);
        if (p.required_credits < 1) {
            add(FindingKind::InvalidCredits, p.id, "required_credits must be >= 1");
        }
    }

    CodeSet codes;
    for (const auto& c : catalog.courses) {
        if (!codes.insert(c.code).second) add(FindingKind::DuplicateCode, c.code.str());
    }

    // First definition of a code wins for edge purposes.
    std::map<CourseCode, std::vector<CourseCode>> edges;
    for (const auto& c : catalog.courses) {
        if (c.credits < 1) add(FindingKind::InvalidCredits, c.code.str(), "credits must be >= 1");
        for (const auto& pid : c.program_ids) {
            if (!program_ids.count(pid)) {
                add(FindingKind::UnresolvedReference, c.code.str(), "program '" + pid + "'");
            }
        }
        bool first = !edges.count(c.code);
        auto& out = edges[c.code];
        for (const auto& pre : c.prerequisites) {
            if (pre == c.code) {
                add(FindingKind::SelfPrerequisite, c.code.str());
            } else if (!codes.count(pre)) {
                add(FindingKind::UnresolvedReference, c.code.str(), "prerequisite '" + pre.str() + "'");
            } else if (first) {
                out.push_back(pre);
            }
        }
    }

    std::set<TermId> term_ids;
    for (const auto& t : catalog.terms) {
        if (!term_ids.insert(t.id).second) add(FindingKind::DuplicateTerm, t.id.str());
        for (const auto& code : t.offered) {
            if (!codes.count(code)) {
                add(FindingKind::UnresolvedReference, t.id.str(), "offered course '" + code.str() + "'");
            }
        }
    }

    for (auto& path : CycleFinder(edges).run()) {
        ValidationFinding f{FindingKind::Cycle, path.front().str(), {}, std::move(path)};
        report.findings.push_back(std::move(f));
    }
    return report;
}

// ---------------------------------------------------------------------------
// File format

namespace {

std::size_t line_of(std::string_view doc, std::size_t byte) {
    byte = std::min(byte, doc.size());
    return 1 + static_cast<std::size_t>(std::count(doc.begin(), doc.begin() + byte, '\n'));
}

[[noreturn]] void field_error(const std::string& locus, const std::string& what) {
    throw ParseError(locus + ": " + what);
}

void check_keys(const ordered_json& obj, const std::string& locus,
                std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) field_error(locus, "expected object");
    for (const auto& [key, _] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            field_error(locus, "unknown key '" + key + "'");
        }
    }
    for (auto key : allowed) {
        if (!obj.contains(std::string(key))) field_error(locus, "missing key '" + std::string(key) + "'");
    }
}

const ordered_json& array_at(const ordered_json& obj, const std::string& key, const std::string& locus) {
    const auto& v = obj.at(key);
    if (!v.is_array()) field_error(locus + "." + key, "expected array");
    return v;
}

std::string string_at(const ordered_json& obj, const std::string& key, const std::string& locus) {
    const auto& v = obj.at(key);
    if (!v.is_string()) field_error(locus + "." + key, "expected string");
    return v.get<std::string>();
}

int int_at(const ordered_json& obj, const std::string& key, const std::string& locus) {
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) field_error(locus + "." + key, "expected integer");
    return v.get<int>();
}

CodeSet codes_at(const ordered_json& obj, const std::string& key, const std::string& locus) {
    CodeSet out;
    const auto& arr = array_at(obj, key, locus);
    for (std::size_t i = 0; i < arr.size(); ++i) {
        std::string where = locus + "." + key + "[" + std::to_string(i) + "]";
        if (!arr[i].is_string()) field_error(where, "expected course code string");
        auto code = CourseCode::parse(arr[i].get<std::string>());
        if (!code) field_error(where, "malformed course code '" + arr[i].get<std::string>() + "'");
        out.insert(*code);
    }
    return out;
}

}  // namespace

CourseCatalog parse_catalog(std::string_view document) {
    ordered_json root;
    try {
        root = ordered_json::parse(document.begin(), document.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("line " + std::to_string(line_of(document, e.byte)) + ": " + e.what());
    }
    check_keys(root, "$", {"programs", "courses", "terms"});

    CourseCatalog catalog;
    const auto& programs = array_at(root, "programs", "$");
    for (std::size_t i = 0; i < programs.size(); ++i) {
        std::string locus = "programs[" + std::to_string(i) + "]";
        check_keys(programs[i], locus, {"id", "name", "required_credits"});
        catalog.programs.push_back({string_at(programs[i], "id", locus),
                                    string_at(programs[i], "name", locus),
                                    int_at(programs[i], "required_credits", locus)});
    }

    const auto& courses = array_at(root, "courses", "$");
    for (std::size_t i = 0; i < courses.size(); ++i) {
        std::string locus = "courses[" + std::to_string(i) + "]";
        const auto& c = courses[i];
        check_keys(c, locus, {"code", "title", "credits", "program_ids", "prerequisites"});
        Course course;
        auto code_text = string_at(c, "code", locus);
        auto code = CourseCode::parse(code_text);
        if (!code) field_error(locus + ".code", "malformed course code '" + code_text + "'");
        course.code = *code;
        course.title = string_at(c, "title", locus);
        course.credits = int_at(c, "credits", locus);
        const auto& pids = array_at(c, "program_ids", locus);
        for (std::size_t j = 0; j < pids.size(); ++j) {
            if (!pids[j].is_string()) {
                field_error(locus + ".program_ids[" + std::to_string(j) + "]", "expected string");
            }
            course.program_ids.insert(pids[j].get<std::string>());
        }
        course.prerequisites = codes_at(c, "prerequisites", locus);
        catalog.courses.push_back(std::move(course));
    }

    const auto& terms = array_at(root, "terms", "$");
    for (std::size_t i = 0; i < terms.size(); ++i) {
        std::string locus = "terms[" + std::to_string(i) + "]";
        check_keys(terms[i], locus, {"id", "offered"});
        auto id_text = string_at(terms[i], "id", locus);
        auto id = TermId::parse(id_text);
        if (!id) field_error(locus + ".id", "malformed term id '" + id_text + "'");
        catalog.terms.push_back({*id, codes_at(terms[i], "offered", locus)});
    }

    auto report = validate_catalog(catalog);
    if (!report.ok()) throw ValidationError(std::move(report));
    return catalog;
}

CourseCatalog load_catalog(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open catalog file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_catalog(buf.str());
}

std::string save_catalog(const CourseCatalog& catalog) {
    ordered_json root = ordered_json::object();
    root["programs"] = ordered_json::array();
    for (const auto& p : catalog.programs) {
        root["programs"].push_back({{"id", p.id}, {"name", p.name}, {"required_credits", p.required_credits}});
    }
    root["courses"] = ordered_json::array();
    for (const auto& c : catalog.courses) {
        ordered_json prereqs = ordered_json::array();
        for (const auto& p : c.prerequisites) prereqs.push_back(p.str());
        root["courses"].push_back({{"code", c.code.str()},
                                   {"title", c.title},
                                   {"credits", c.credits},
                                   {"program_ids", c.program_ids},
                                   {"prerequisites", prereqs}});
    }
    root["terms"] = ordered_json::array();
    for (const auto& t : catalog.terms) {
        ordered_json offered = ordered_json::array();
        for (const auto& code : t.offered) offered.push_back(code.str());
        root["terms"].push_back({{"id", t.id.str()}, {"offered", offered}});
    }
    return root.dump(2) + "\n";
}

void save_catalog(const CourseCatalog& catalog, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("IoError", "cannot write catalog file '" + path.string() + "'");
    out << save_catalog(catalog);
}

std::vector<Course> courses_for_program(const CourseCatalog& catalog, std::string_view program_id) {
    if (!catalog.find_program(program_id)) throw UnknownProgram(std::string(program_id));
    std::map<CourseCode, Course> picked;
    for (const auto& c : catalog.courses) {
        if (c.program_ids.count(std::string(program_id))) picked.emplace(c.code, c);
    }
    std::vector<Course> out;
    out.reserve(picked.size());
    for (auto& [_, c] : picked) out.push_back(std::move(c));
    return out;
}

std::optional<Course> lookup_course(const CourseCatalog& catalog, std::string_view code) {
    auto parsed = CourseCode::parse(code);
    if (!parsed) return std::nullopt;
    if (const auto* c = catalog.find_course(*parsed)) return *c;
    return std::nullopt;
}

}  // namespace dona
