#include "mathwb/cli.hpp"

#include <pthread.h>
#include <signal.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "mathwb/api.hpp"
#include "mathwb/service.hpp"
#include "mathwb/wikitext.hpp"

namespace mathwb::cli {

using nlohmann::ordered_json;

namespace {

constexpr int kOk = 0;
constexpr int kDomainError = 1;
constexpr int kUsageError = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::filesystem::path snapshot_path(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("MATHWB_SNAPSHOT"); env && *env) return env;
    throw UsageError("no snapshot: pass --snapshot or set MATHWB_SNAPSHOT");
}

std::shared_ptr<kb::KnowledgeBase> open_kb(const std::string& flag) {
    return kb::KnowledgeBase::open(snapshot_path(flag));
}

// Prints a successful payload, or a diagnostic for an error response.
int emit(const api::Response& r, std::ostream& out, std::ostream& err) {
    if (r.status >= 200 && r.status < 300) {
        out << r.body << '\n';
        return kOk;
    }
    std::string code = "error";
    std::string detail;
    try {
        const auto body = nlohmann::json::parse(r.body);
        code = body.value("error", code);
        detail = body.value("detail", "");
    } catch (const nlohmann::json::exception&) {
        detail = r.body;
    }
    if (code == "not_found") {
        err << "not found\n";
    } else {
        err << code;
        if (!detail.empty()) err << ": " << detail;
        err << '\n';
    }
    return kDomainError;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int extract(const std::string& file, const std::string& snapshot_flag, std::ostream& out) {
    const std::string doc = read_file(file);
    const auto occurrences = wikitext::extract_math_tags(doc);

    std::vector<wikitext::LinkedOccurrence> linked;
    std::shared_ptr<kb::KnowledgeBase> kb;
    if (!snapshot_flag.empty() || std::getenv("MATHWB_SNAPSHOT")) kb = open_kb(snapshot_flag);
    linked = kb ? wikitext::link_occurrences(occurrences, *kb->snapshot()) : wikitext::link_occurrences(occurrences);

    ordered_json arr = ordered_json::array();
    for (const auto& l : linked) {
        ordered_json o{{"tex", l.occurrence.tex},
                       {"qid", l.qid ? ordered_json(l.qid->str()) : ordered_json(nullptr)},
                       {"start", l.occurrence.span.begin},
                       {"end", l.occurrence.span.end}};
        if (l.error) o["error"] = *l.error;
        arr.push_back(std::move(o));
    }
    out << arr.dump() << '\n';
    return kOk;
}

int serve(std::ostream& err) {
    const service::ServiceConfig config = service::ServiceConfig::from_env();
    auto kb = kb::KnowledgeBase::open(config.snapshot);
    auto api = std::make_shared<api::Api>(kb, config.api);
    service::Service svc(api, err);
    const int port = svc.bind(config.host, config.port);

    // Route SIGINT/SIGTERM to a waiter thread that stops the server.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);
    std::thread waiter([&] {
        int sig = 0;
        sigwait(&signals, &sig);
        svc.stop();
    });

    err << ordered_json{{"event", "listening"}, {"port", port}, {"items", kb->snapshot()->size()}}.dump() << '\n';
    bool ok = true;
    try {
        svc.listen();
    } catch (const std::exception& e) {
        err << "serve: " << e.what() << '\n';
        ok = false;
    }
    pthread_kill(waiter.native_handle(), SIGTERM);
    waiter.join();
    return ok ? kOk : kDomainError;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Formula parsing, rendering and knowledge-base linking", "mathwb"};
    app.require_subcommand(1);

    std::string snapshot;
    std::string tex;
    std::string format = "mathml";
    std::string qid;
    std::string lang;
    std::string file;
    std::string fragment;
    std::string part_qid;
    std::size_t limit = 10;
    bool html = false;

    auto* extract_cmd = app.add_subcommand("extract", "List <math> tags of a wikitext file as JSON");
    extract_cmd->add_option("file", file, "Wikitext file")->required();
    extract_cmd->add_option("--snapshot", snapshot, "Snapshot used to link formulas");

    auto* render_cmd = app.add_subcommand("render", "Render a TeX formula");
    render_cmd->add_option("--tex", tex, "TeX source")->required();
    render_cmd->add_option("--format", format, "mathml, text or ast")
        ->check(CLI::IsMember({"mathml", "text", "ast"}));

    auto* page_cmd = app.add_subcommand("page", "Special-page model of an item");
    page_cmd->add_option("--qid", qid, "Item id")->required();
    page_cmd->add_option("--lang", lang, "Language code");
    page_cmd->add_flag("--html", html, "Emit the HTML page instead of JSON");
    page_cmd->add_option("--snapshot", snapshot, "Snapshot file");

    auto* lookup_cmd = app.add_subcommand("lookup", "Find the item defined by a formula");
    lookup_cmd->add_option("--tex", tex, "TeX source")->required();
    lookup_cmd->add_option("--snapshot", snapshot, "Snapshot file");

    auto* suggest_cmd = app.add_subcommand("suggest", "Rank candidate items for a formula element");
    suggest_cmd->add_option("--tex", tex, "TeX source")->required();
    suggest_cmd->add_option("--limit", limit, "Maximum number of suggestions")->check(CLI::Range(1, 100));
    suggest_cmd->add_option("--lang", lang, "Language for labels");
    suggest_cmd->add_option("--snapshot", snapshot, "Snapshot file");

    auto* add_part_cmd = app.add_subcommand("add-part", "Add a has-part annotation to an item");
    add_part_cmd->add_option("--qid", qid, "Item id")->required();
    add_part_cmd->add_option("--fragment", fragment, "TeX of the annotated sub-term")->required();
    add_part_cmd->add_option("--part-qid", part_qid, "Item the fragment denotes")->required();
    add_part_cmd->add_option("--snapshot", snapshot, "Snapshot file");

    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service (configured by MATHWB_* variables)");

    auto* validate_cmd = app.add_subcommand("validate-snapshot", "Load and validate a snapshot file");
    validate_cmd->add_option("file", file, "Snapshot file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return kOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, err, err);
        return kUsageError;
    }

    const std::optional<std::string> lang_opt = lang.empty() ? std::nullopt : std::optional(lang);
    try {
        if (*extract_cmd) return extract(file, snapshot, out);
        if (*render_cmd) {
            api::Api api(std::make_shared<kb::KnowledgeBase>(kb::Snapshot{}));
            return emit(api.render(tex, format), out, err);
        }
        if (*serve_cmd) return serve(err);
        if (*validate_cmd) {
            api::Api api(std::make_shared<kb::KnowledgeBase>(kb::load_snapshot(file)));
            return emit(api.health(), out, err);
        }

        api::Api api(open_kb(snapshot), api::Config::from_env());
        if (*page_cmd) return emit(api.page(qid, lang_opt, html), out, err);
        if (*lookup_cmd) return emit(api.lookup(tex), out, err);
        if (*suggest_cmd) return emit(api.suggest(tex, std::to_string(limit), lang_opt), out, err);
        if (*add_part_cmd) {
            const std::string body = ordered_json{{"fragment", fragment}, {"part_qid", part_qid}}.dump();
            return emit(api.add_part(qid, body), out, err);
        }
    } catch (const UsageError& e) {
        err << e.what() << '\n';
        return kUsageError;
    } catch (const std::invalid_argument& e) {
        err << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        err << e.what() << '\n';
        return kDomainError;
    }
    return kUsageError;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace mathwb::cli
