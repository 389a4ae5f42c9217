#include "conman/cli.hpp"

#include "cli_common.hpp"
#include "conman/dot.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace conman::cli {

namespace detail {

namespace fs = std::filesystem;

std::vector<std::string> input_files(const std::vector<std::string>& given)
{
    if (!given.empty())
        return given;
    const char* root = std::getenv("CONMAN_CORPUS");
    if (root == nullptr || *root == '\0')
        throw Error("no input files (and CONMAN_CORPUS is not set)");
    std::vector<std::string> out;
    std::error_code ec;
    for (const auto& entry : fs::recursive_directory_iterator(root, ec))
        if (entry.is_regular_file() && entry.path().extension() == ".cml")
            out.push_back(entry.path().string());
    if (ec)
        throw Error("cannot read corpus directory '" + std::string(root) + "': " + ec.message());
    std::sort(out.begin(), out.end());
    if (out.empty())
        throw Error("no .cml files below '" + std::string(root) + "'");
    return out;
}

void print_diagnostics(std::ostream& err, const dsl::ParseError& e)
{
    for (const auto& d : e.diagnostics())
        err << d.to_string() << "\n";
}

std::shared_ptr<demo::PayloadStore> collect_payloads(const dsl::Document& doc, const std::vector<std::string>& names,
                                                     bool none)
{
    auto store = std::make_shared<demo::PayloadStore>();
    if (none)
        return store;
    auto take = [&](const dsl::PayloadStoreDecl& s) {
        for (const auto& m : s.models)
            store->emplace(m.ref, m.model);
    };
    if (names.empty()) {
        for (const auto& s : doc.payload_stores)
            take(s);
        return store;
    }
    for (const auto& n : names) {
        const dsl::PayloadStoreDecl* s = doc.find_store(n);
        if (s == nullptr)
            throw Error("unknown payload store '" + n + "'");
        take(*s);
    }
    return store;
}

bool parse_relations(const std::string& spec, demo::KindMap& km)
{
    if (spec == "none")
        return false;
    if (spec == "demo") {
        km = demo::KindMap::identity();
        return true;
    }
    if (spec.rfind("demo:", 0) == 0) {
        km = demo::KindMap::named(spec.substr(5));
        return true;
    }
    throw Error("unknown relation binding '" + spec + "' (expected demo, demo:<kindmap> or none)");
}

std::string timestamp_iso8601()
{
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream out;
    out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%S") << '.' << std::setw(3) << std::setfill('0') << ms << 'Z';
    return out.str();
}

namespace {

std::string where(const dsl::SourceSpan& s)
{
    return s.file.empty() ? std::string("<unknown>") : s.to_string();
}

template <class Map>
const dsl::SourceSpan& span_or(const Map& spans, const std::string& id, const dsl::SourceSpan& fallback)
{
    auto it = spans.find(id);
    return it == spans.end() ? fallback : it->second;
}

std::size_t report(std::ostream& out, const ValidationReport& r, const std::function<dsl::SourceSpan(const Violation&)>& at)
{
    for (const auto& v : r)
        out << where(at(v)) << ": " << v.to_string() << "\n";
    return r.size();
}

} // namespace

int cmd_validate(const std::vector<std::string>& given, std::ostream& out, std::ostream& err)
{
    dsl::Document doc;
    try {
        doc = dsl::load_files(input_files(given));
    } catch (const dsl::ParseError& e) {
        print_diagnostics(err, e);
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    std::size_t violations = 0;
    for (const auto& c : doc.contexts)
        violations += report(out, validate_context(*c.context), [&](const Violation& v) {
            return span_or(c.relation_spans, v.subject, span_or(c.type_spans, v.subject, c.span));
        });
    for (const auto& s : doc.schemas) {
        const dsl::ContextDecl* c = doc.find_context(s.context);
        violations += report(out, validate_schema(*s.schema, *c->context), [&](const Violation& v) {
            return span_or(s.edge_spans, v.subject, span_or(s.node_spans, v.subject, s.span));
        });
    }
    for (const auto& n : doc.networks) {
        const dsl::SchemaDecl* s = doc.find_schema(n.schema);
        violations += report(out, validate_network(n.network, *s->schema), [&](const Violation& v) {
            return span_or(n.spans.edges, v.subject, span_or(n.spans.models, v.subject, n.spans.span));
        });
    }
    for (const auto& p : doc.paths) {
        if (p.path.networks.empty()) {
            out << where(p.span) << ": empty-path: a path needs at least one network\n";
            ++violations;
            continue;
        }
        for (std::size_t i = 0; i < p.path.networks.size(); ++i) {
            const dsl::NetworkSpans& sp = p.step_spans[i];
            violations += report(out, validate_network(p.path.networks[i], *p.path.schema), [&](const Violation& v) {
                return span_or(sp.edges, v.subject, span_or(sp.models, v.subject, sp.span));
            });
        }
        const PathValidation pv = validate_path(p.path);
        for (std::size_t i = 0; i < pv.steps.size(); ++i) {
            // Step i+1 maps network i to network i+1; subjects are models of network i.
            const dsl::NetworkSpans& sp = p.step_spans[i];
            const dsl::SourceSpan fallback = p.step_spans[i + 1].span;
            for (const auto& v : pv.steps[i])
                out << where(span_or(sp.models, v.subject, fallback)) << ": step " << i + 1 << ": " << v.to_string()
                    << "\n";
            violations += pv.steps[i].size();
        }
    }

    if (violations == 0) {
        out << "ok: " << doc.contexts.size() << " contexts, " << doc.schemas.size() << " schemas, "
            << doc.networks.size() << " networks, " << doc.paths.size() << " paths, " << doc.payload_stores.size()
            << " payload stores\n";
        return kExitOk;
    }
    out << violations << " violation" << (violations == 1 ? "" : "s") << "\n";
    return kExitFailure;
}

namespace {

void write_text(const fs::path& file, const std::string& text)
{
    std::ofstream f(file, std::ios::binary);
    if (!f)
        throw Error("cannot write '" + file.string() + "'");
    f << text;
}

} // namespace

int cmd_replay(const ReplayOptions& o, std::ostream& out, std::ostream& err)
{
    try {
        const dsl::Document doc = dsl::load_files(input_files(o.files));
        const dsl::PathDecl* p = doc.find_path(o.path);
        if (p == nullptr) {
            err << "error: no path named '" << o.path << "'\n";
            return kExitUsage;
        }
        const dsl::ContextDecl* c = doc.context_of_schema(p->schema);

        const PathValidation pv = validate_path(p->path);
        if (!pv.ok()) {
            out << "path '" << p->name << "' is not a valid resolution path:\n";
            for (const auto& v : pv.networks)
                out << "  " << v.to_string() << "\n";
            for (std::size_t i = 0; i < pv.steps.size(); ++i)
                for (const auto& v : pv.steps[i])
                    out << "  step " << i + 1 << ": " << v.to_string() << "\n";
            return kExitFailure;
        }

        demo::KindMap km = demo::KindMap::identity();
        const bool bound = parse_relations(o.relations, km);
        auto store = collect_payloads(doc, o.payloads, o.no_payloads);
        auto relations = std::make_shared<demo::DemoRelations>(*c->context, store, km);
        const RelationRegistry registry = bound ? relations->registry() : RelationRegistry{};

        const PathReport r = replay_path(p->path, *c->context, registry);
        std::set<std::string> warned;
        for (std::size_t i = 0; i < r.per_network.size(); ++i) {
            const Network& n = p->path.networks[i];
            const ConsistencyReport& cr = r.per_network[i];
            out << "N" << p->step_labels[i] << ": " << to_string(cr.network) << "\n";
            for (const auto& e : n.graph->edges()) {
                const EdgeVerdict& v = cr.per_edge.at(e.id);
                out << "  " << e.src << " -- " << e.trg << " (" << v.relation << "): " << to_string(v.status);
                if (!v.witness.empty())
                    out << "  " << v.witness;
                out << "\n";
            }
            for (const auto& w : cr.warnings)
                if (warned.insert(w).second)
                    err << "warning: " << w << "\n";
        }
        for (const auto& x : r.expectations)
            if (x.outcome == ExpectationOutcome::Mismatch)
                out << "expectation mismatch in N" << p->step_labels[x.network] << " edge " << x.edge << ": expected "
                    << to_string(x.expected) << ", got " << to_string(x.actual) << "\n";

        const EdgeStatus last = r.per_network.back().network;
        if (last == EdgeStatus::Consistent)
            out << "path consistent\n";
        else if (last == EdgeStatus::Inconsistent)
            out << "path not consistent\n";
        else
            out << "path consistency unknown\n";

        if (!o.dot_dir.empty()) {
            fs::create_directories(o.dot_dir);
            const fs::path dir(o.dot_dir);
            write_text(dir / (c->name + ".dot"), dsl::export_dot(*c->context, c->name));
            write_text(dir / (p->schema + ".dot"),
                       dsl::export_dot(*p->path.schema, *c->context, p->schema));
            write_text(dir / (p->name + ".dot"), dsl::export_dot(p->path, &r, p->name));
            out << "wrote DOT files to " << o.dot_dir << "\n";
        }
        return r.mismatches() == 0 ? kExitOk : kExitFailure;
    } catch (const dsl::ParseError& e) {
        print_diagnostics(err, e);
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

int cmd_search(const SearchOptions& o, std::ostream& out, std::ostream& err)
{
    if (o.depth <= 0) {
        err << "error: --depth must be positive\n";
        return kExitUsage;
    }
    try {
        const dsl::Document doc = dsl::load_files(input_files(o.files));
        const dsl::NetworkDecl* n = doc.find_network(o.network);
        if (n == nullptr) {
            err << "error: no network named '" << o.network << "'\n";
            return kExitUsage;
        }
        const dsl::SchemaDecl* s = doc.find_schema(n->schema);
        const dsl::ContextDecl* c = doc.find_context(s->context);

        demo::KindMap km = demo::KindMap::identity();
        if (!parse_relations(o.relations, km)) {
            err << "error: search needs a relation binding\n";
            return kExitUsage;
        }
        auto store = collect_payloads(doc, o.payloads, false);
        auto relations = std::make_shared<demo::DemoRelations>(*c->context, store, km);
        const RelationRegistry registry = relations->registry();
        const auto moves = demo::demo_moves(o.moves, relations, s->schema);

        const auto found = search_consistent_path(n->network, s->schema, *c->context, registry, moves,
                                                  {o.depth, o.expansions});
        if (!found) {
            out << "none\n";
            return kExitFailure;
        }

        // A self-contained document: context, schema, the payloads it uses, the path.
        dsl::Document result;
        result.contexts.push_back(*c);
        result.schemas.push_back(*s);
        dsl::PayloadStoreDecl used{o.network + "Payloads", {}, {}};
        std::set<std::string> refs;
        for (const auto& net : found->networks)
            for (const auto& [_, ref] : net.payloads)
                if (refs.insert(ref).second)
                    used.models.push_back({ref, store->at(ref), {}});
        result.payload_stores.push_back(std::move(used));
        dsl::PathDecl path;
        path.name = o.network + "Resolution";
        path.schema = s->name;
        path.path = *found;
        for (std::size_t i = 0; i < found->networks.size(); ++i)
            path.step_labels.push_back(static_cast<int>(i + 1));
        result.paths.push_back(std::move(path));
        result.order = {{dsl::DeclKind::Context, 0},
                        {dsl::DeclKind::Schema, 0},
                        {dsl::DeclKind::Path, 0},
                        {dsl::DeclKind::Payloads, 0}};
        const std::string text = dsl::serialize(result);

        out << "found path of length " << found->length() << "\n";
        for (std::size_t i = 1; i < found->networks.size(); ++i) {
            const StepMorphism step = derive_step(found->networks[i - 1], found->networks[i], i);
            for (const auto& id : step.created)
                out << "  step " << i << ": " << id << " v" << found->networks[i].version(id) << "\n";
        }
        if (o.out_file.empty())
            out << text;
        else {
            write_text(o.out_file, text);
            out << "wrote " << o.out_file << "\n";
        }
        return kExitOk;
    } catch (const dsl::ParseError& e) {
        print_diagnostics(err, e);
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

namespace {

int cmd_fmt(const std::vector<std::string>& files, std::ostream& out, std::ostream& err)
{
    try {
        out << dsl::serialize(dsl::load_files(input_files(files)));
        return kExitOk;
    } catch (const dsl::ParseError& e) {
        print_diagnostics(err, e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
    }
    return kExitUsage;
}

int cmd_dot(const std::string& name, const std::vector<std::string>& files, std::ostream& out, std::ostream& err)
{
    try {
        const dsl::Document doc = dsl::load_files(input_files(files));
        if (const auto* c = doc.find_context(name))
            out << dsl::export_dot(*c->context, c->name);
        else if (const auto* s = doc.find_schema(name))
            out << dsl::export_dot(*s->schema, *doc.find_context(s->context)->context, s->name);
        else if (const auto* n = doc.find_network(name))
            out << dsl::export_dot(n->network, nullptr, n->name);
        else if (const auto* p = doc.find_path(name))
            out << dsl::export_dot(p->path, nullptr, p->name);
        else {
            err << "error: nothing named '" << name << "'\n";
            return kExitUsage;
        }
        return kExitOk;
    } catch (const dsl::ParseError& e) {
        print_diagnostics(err, e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
    }
    return kExitUsage;
}

} // namespace

} // namespace detail

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    using namespace detail;
    CLI::App app{"Consistency management toolkit"};
    app.require_subcommand(1);

    std::vector<std::string> files;

    auto* validate = app.add_subcommand("validate", "Parse and validate .cml files");
    validate->add_option("files", files, "Input files (default: $CONMAN_CORPUS)");

    ReplayOptions ro;
    auto* replay = app.add_subcommand("replay", "Replay a resolution path and evaluate consistency");
    replay->add_option("path", ro.path, "Path name")->required();
    replay->add_option("files", ro.files, "Input files (default: $CONMAN_CORPUS)");
    replay->add_option("--payloads", ro.payloads, "Payload store to use (repeatable; default: all)");
    replay->add_flag("--no-payloads", ro.no_payloads, "Evaluate without any payloads");
    replay->add_option("--relations", ro.relations, "demo, demo:<identity|shift|multi> or none");
    replay->add_option("--dot", ro.dot_dir, "Directory for DOT output");

    PatternOptions po;
    auto* pattern = app.add_subcommand("pattern", "Expand and execute a method pattern");
    pattern->add_option("name", po.name, "DirectedStart, ColdStart or GenerateAndCheck")->required();
    pattern->add_option("--n", po.n, "Number of incremental rounds");
    pattern->add_option("--impl", po.impl, "Fragment implementations");
    pattern->add_option("--sut", po.sut, "SUT command template with {in} and {out}");
    pattern->add_option("--cases", po.cases, "Generated cases (GenerateAndCheck)");
    pattern->add_option("--seed", po.seed, "Base seed");
    pattern->add_option("--size", po.size, "Generated model size");
    pattern->add_option("--kindmap", po.kindmap, "identity, shift or multi");
    pattern->add_option("--directions", po.directions, "Comma list of fwd/bwd per increment");
    pattern->add_option("--policy", po.policy, "INT policy");
    pattern->add_option("--trace", po.trace, "Write a JSON-lines run trace");

    SearchOptions so;
    auto* search = app.add_subcommand("search", "Search for a consistent resolution path");
    search->add_option("network", so.network, "Start network name")->required();
    search->add_option("files", so.files, "Input files (default: $CONMAN_CORPUS)");
    search->add_option("--moves", so.moves, "Comma list of move generators");
    search->add_option("--depth", so.depth, "Maximum path length");
    search->add_option("--expansions", so.expansions, "Maximum expanded networks");
    search->add_option("--payloads", so.payloads, "Payload store to use (repeatable; default: all)");
    search->add_option("--relations", so.relations, "demo or demo:<kindmap>");
    search->add_option("--out", so.out_file, "Write the path here instead of stdout");

    auto* fmt = app.add_subcommand("fmt", "Print the canonical form of the input");
    fmt->add_option("files", files, "Input files (default: $CONMAN_CORPUS)");

    std::string entity;
    auto* dot = app.add_subcommand("dot", "Export a context, schema, network or path as DOT");
    dot->add_option("name", entity, "Entity name")->required();
    dot->add_option("files", files, "Input files (default: $CONMAN_CORPUS)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (validate->parsed())
        return cmd_validate(files, out, err);
    if (replay->parsed())
        return cmd_replay(ro, out, err);
    if (pattern->parsed())
        return cmd_pattern(po, out, err);
    if (search->parsed())
        return cmd_search(so, out, err);
    if (fmt->parsed())
        return cmd_fmt(files, out, err);
    return cmd_dot(entity, files, out, err);
}

} // namespace conman::cli
