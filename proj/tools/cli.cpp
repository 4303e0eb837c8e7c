#include "cli.hpp"

#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <httplib.h>

#include "dona/agent.hpp"
#include "dona/codec.hpp"
#include "dona/http.hpp"
#include "dona/service.hpp"
#include "dona/session_log.hpp"

namespace dona::cli {

namespace {

struct Config {
    std::string catalog_path;
    std::string data_dir;
    std::string locale{kDefaultLocale};
    double threshold = kDefaultThreshold;
    int cap = 9;
};

std::string table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
    for (const auto& r : rows) {
        for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
    }
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& cells) {
        std::string text = "  ";
        for (std::size_t c = 0; c < cells.size(); ++c) {
            text += cells[c];
            if (c + 1 < cells.size()) text += std::string(width[c] - cells[c].size() + 2, ' ');
        }
        os << text << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return os.str();
}

std::string joined(const nlohmann::ordered_json& arr) {
    std::string out;
    for (const auto& v : arr) {
        if (!out.empty()) out += ", ";
        out += v.get<std::string>();
    }
    return out;
}

std::vector<TermId> parse_terms(const std::vector<std::string>& ids) {
    std::vector<TermId> out;
    for (const auto& id : ids) out.push_back(TermId::from_string(id));
    return out;
}

CodeSet parse_codes(const std::vector<std::string>& codes) {
    CodeSet out;
    for (const auto& c : codes) out.insert(CourseCode::from_string(c));
    return out;
}

// Loads the catalog; prints the error and returns nullopt on failure.
std::optional<CourseCatalog> open_catalog(const Config& cfg, std::ostream& err) {
    try {
        return load_catalog(cfg.catalog_path);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return std::nullopt;
    }
}

int cmd_validate(const Config& cfg, std::ostream& out, std::ostream& err) {
    try {
        load_catalog(cfg.catalog_path);
    } catch (const ValidationError& e) {
        for (const auto& f : e.report().findings) out << f.describe() << '\n';
        return kFindings;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
    out << "OK\n";
    return kOk;
}

int cmd_plan(const Config& cfg, const std::vector<std::string>& targets, const std::vector<std::string>& completed,
             const std::vector<std::string>& horizon, std::ostream& out, std::ostream& err) {
    auto catalog = open_catalog(cfg, err);
    if (!catalog) return kInputError;
    try {
        StudentRecord student;
        student.completed = parse_codes(completed);
        PlanConstraints constraints{cfg.cap, horizon.empty() ? catalog->term_order() : parse_terms(horizon)};
        auto plan = plan_semesters(*catalog, student, parse_codes(targets), constraints);
        std::vector<std::vector<std::string>> rows;
        for (const auto& row : plan_rows(*catalog, plan)) {
            rows.push_back({row["term"].get<std::string>(), joined(row["courses"]), std::to_string(row["credits"].get<int>())});
        }
        out << table({"TERM", "COURSES", "CREDITS"}, rows);
        out << "total terms: " << plan.total_terms << '\n';
        return kOk;
    } catch (const Infeasible& e) {
        err << "infeasible (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return kInfeasible;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
}

int cmd_repl(const Config& cfg, bool wire, double confidence, const std::string& student_id, std::istream& in,
             std::ostream& out, std::ostream& err) {
    auto catalog = open_catalog(cfg, err);
    if (!catalog) return kInputError;

    DialogConfig dialog;
    dialog.credit_cap = cfg.cap;
    DialogEngine engine(*catalog, dialog);
    Agent agent(engine, cfg.threshold);

    DialogSession session;
    session.session_id = "repl";
    session.student.student_id = student_id;
    session.locale = cfg.locale;

    std::unique_ptr<SessionLog> log;
    if (!cfg.data_dir.empty()) {
        log = std::make_unique<SessionLog>(std::filesystem::path(cfg.data_dir) / "repl.ndjson");
        log->append({{"type", "session"}, {"session_id", session.session_id},
                     {"student_id", student_id}, {"locale", session.locale}});
    }

    InputSource source = [&]() -> std::optional<UtteranceEvent> {
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!wire) return UtteranceEvent{line, confidence, session.locale, 0};
            try {
                return read_event(line);
            } catch (const WireError& e) {
                out << nlohmann::ordered_json{{"type", "error"}, {"message", e.what()}}.dump() << '\n';
            }
        }
        return std::nullopt;
    };
    OutputSink sink = [&](const OutputEvent& ev) {
        if (wire) {
            out << write_event(ev) << '\n';
        } else if (const auto* say = std::get_if<Say>(&ev)) {
            out << "Dona: " << say->text << '\n';
        } else {
            out << format_display(std::get<Display>(ev));
        }
        out.flush();
        if (!out) throw Error("IoError", "output stream closed");
    };
    TurnObserver observer = [&](const DialogSession&, const TurnRecord& record) {
        if (log) log->append({{"type", "turn"}, {"session_id", session.session_id}, {"turn", codec::encode(record)}});
    };

    run_loop(session, source, sink, agent, observer);
    return kOk;
}

int cmd_serve(const Config& cfg, const std::string& host, int port, std::ostream& out, std::ostream& err) {
    auto catalog = open_catalog(cfg, err);
    if (!catalog) return kInputError;
    ServiceConfig sc;
    sc.data_dir = cfg.data_dir;
    sc.threshold = cfg.threshold;
    sc.default_locale = cfg.locale;
    sc.dialog.credit_cap = cfg.cap;
    try {
        Service service(std::move(*catalog), sc);
        httplib::Server server;
        bind_routes(server, service);
        out << "listening on " << host << ":" << port << '\n';
        out.flush();
        if (!server.listen(host, port)) {
            err << "error: cannot listen on " << host << ":" << port << '\n';
            return kInputError;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
    return kOk;
}

}  // namespace

std::string format_display(const Display& display) {
    std::vector<std::vector<std::string>> rows;
    switch (display.kind) {
        case DisplayKind::CourseTable:
            for (const auto& r : display.rows) {
                rows.push_back({r["code"].get<std::string>(), r["title"].get<std::string>(),
                                std::to_string(r["credits"].get<int>())});
            }
            return table({"CODE", "TITLE", "CREDITS"}, rows);
        case DisplayKind::PrereqList:
            for (const auto& r : display.rows) {
                rows.push_back({r["code"].get<std::string>(), r["title"].get<std::string>(),
                                r["satisfied"].get<bool>() ? "yes" : "no"});
            }
            return table({"PREREQUISITE", "TITLE", "DONE"}, rows);
        case DisplayKind::Plan:
            for (const auto& r : display.rows) {
                rows.push_back({r["term"].get<std::string>(), joined(r["courses"]),
                                std::to_string(r["credits"].get<int>())});
            }
            return table({"TERM", "COURSES", "CREDITS"}, rows);
    }
    return {};
}

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Course registration agent"};
    app.require_subcommand(1);

    Config cfg;
    auto add_shared = [&](CLI::App* sub) {
        sub->add_option("--catalog", cfg.catalog_path, "Catalog file")->required()->envname("DONA_CATALOG");
        sub->add_option("--data-dir", cfg.data_dir, "Directory for session logs")->envname("DONA_DATA_DIR");
        sub->add_option("--locale", cfg.locale, "Response locale")->envname("DONA_LOCALE");
        sub->add_option("--threshold", cfg.threshold, "Confidence gate threshold")
            ->check(CLI::Range(0.0, 1.0))
            ->envname("DONA_THRESHOLD");
        sub->add_option("--cap", cfg.cap, "Credit cap per term")->check(CLI::PositiveNumber);
    };

    bool wire = false;
    double confidence = 1.0;
    std::string student_id = "cli";
    auto* repl = app.add_subcommand("repl", "Interactive text session on standard input");
    add_shared(repl);
    repl->add_flag("--wire", wire, "Read and write newline-delimited JSON records");
    repl->add_option("--confidence", confidence, "Confidence assigned to typed input")->check(CLI::Range(0.0, 1.0));
    repl->add_option("--student", student_id, "Student id for the session");

    auto* validate = app.add_subcommand("validate", "Validate a catalog file");
    add_shared(validate);

    std::vector<std::string> targets, completed, horizon;
    auto* plan = app.add_subcommand("plan", "Compute a minimum-term registration plan");
    add_shared(plan);
    plan->add_option("--target", targets, "Target course (repeatable)")->required();
    plan->add_option("--completed", completed, "Completed course (repeatable)");
    plan->add_option("--horizon", horizon, "Horizon term (repeatable, default all catalog terms)");

    std::string host = "127.0.0.1";
    int port = 8080;
    auto* serve = app.add_subcommand("serve", "Run the HTTP service");
    add_shared(serve);
    serve->add_option("--port", port, "Port")->envname("DONA_PORT");
    serve->add_option("--host", host, "Bind address");

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }

    if (*validate) return cmd_validate(cfg, out, err);
    if (*plan) return cmd_plan(cfg, targets, completed, horizon, out, err);
    if (*repl) return cmd_repl(cfg, wire, confidence, student_id, in, out, err);
    return cmd_serve(cfg, host, port, out, err);
}

}  // namespace dona::cli
