#include "conman/dsl.hpp"

#include "dsl_lexer.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <variant>

namespace conman::dsl {

bool SourceSpan::contains(const SourceSpan& inner) const
{
    return file == inner.file && begin <= inner.begin && inner.end <= end;
}

std::string SourceSpan::to_string() const
{
    return file + ":" + std::to_string(begin.line) + ":" + std::to_string(begin.column);
}

std::string Diagnostic::to_string() const
{
    std::string out = span.to_string() + ": " + message;
    if (!expected.empty()) {
        out += " (expected ";
        for (std::size_t i = 0; i < expected.size(); ++i)
            out += (i ? (i + 1 == expected.size() ? " or " : ", ") : "") + expected[i];
        out += ")";
    }
    return out;
}

ParseError::ParseError(std::vector<Diagnostic> diagnostics)
    : Error(diagnostics.empty() ? std::string("parse error") : diagnostics.front().to_string()),
      diagnostics_(std::move(diagnostics))
{
}

const demo::DemoModel* PayloadStoreDecl::find(const std::string& ref) const
{
    for (const auto& m : models)
        if (m.ref == ref)
            return &m.model;
    return nullptr;
}

bool Document::empty() const
{
    return contexts.empty() && schemas.empty() && networks.empty() && paths.empty() && payload_stores.empty();
}

namespace {

template <class T>
const T* find_named(const std::vector<T>& v, const std::string& name)
{
    for (const auto& d : v)
        if (d.name == name)
            return &d;
    return nullptr;
}

} // namespace

const ContextDecl* Document::find_context(const std::string& n) const { return find_named(contexts, n); }
const SchemaDecl* Document::find_schema(const std::string& n) const { return find_named(schemas, n); }
const NetworkDecl* Document::find_network(const std::string& n) const { return find_named(networks, n); }
const PathDecl* Document::find_path(const std::string& n) const { return find_named(paths, n); }
const PayloadStoreDecl* Document::find_store(const std::string& n) const { return find_named(payload_stores, n); }

const ContextDecl* Document::context_of_schema(const std::string& schema_name) const
{
    const SchemaDecl* s = find_schema(schema_name);
    return s == nullptr ? nullptr : find_context(s->context);
}

namespace {

using detail::Token;
using detail::TokType;

// ---------------------------------------------------------------- syntax tree

struct Name {
    std::string text;
    SourceSpan span;
};

struct TypeAst {
    Name name;
    std::optional<std::size_t> role;
};

struct RelationAst {
    Name name, src, trg;
    SourceSpan span;
};

struct ContextAst {
    Name name;
    SourceSpan span;
    std::vector<Name> roles;
    std::vector<TypeAst> types;
    std::vector<RelationAst> relations;
};

struct SchemaNodeAst {
    Name id, type;
    SourceSpan span;
};

struct SchemaEdgeAst {
    Name id, a, b, relation;
    SourceSpan span;
};

struct SchemaAst {
    Name name, context;
    SourceSpan span;
    std::vector<SchemaNodeAst> nodes;
    std::vector<SchemaEdgeAst> edges;
};

struct ModelAst {
    Name id, node;
    std::optional<int> version;
    bool authoritative = false;
    std::optional<std::string> payload;
    SourceSpan span;
};

struct NetEdgeAst {
    Name a, b;
    std::optional<EdgeStatus> expect;
    SourceSpan span;
};

struct BodyAst {
    std::vector<ModelAst> models;
    std::vector<NetEdgeAst> edges;
    SourceSpan span;
};

struct NetworkAst {
    Name name, schema;
    BodyAst body;
};

struct StepAst {
    int label = 0;
    BodyAst body;
};

struct PathAst {
    Name name, schema;
    SourceSpan span;
    std::vector<StepAst> steps;
};

struct ElementAst {
    Name name, kind;
    std::vector<std::pair<std::string, std::string>> attrs;
    SourceSpan span;
};

struct PayloadModelAst {
    std::string ref;
    SourceSpan ref_span;
    std::optional<std::string> domain;
    std::vector<ElementAst> elements;
    SourceSpan span;
};

struct StoreAst {
    Name name;
    SourceSpan span;
    std::vector<PayloadModelAst> models;
};

using DeclAst = std::variant<ContextAst, SchemaAst, NetworkAst, PathAst, StoreAst>;

// ---------------------------------------------------------------- parser

struct SyntaxError {
    Diagnostic diag;
};

class Parser {
public:
    Parser(std::vector<Token> tokens, std::vector<Diagnostic>& diags) : toks_(std::move(tokens)), diags_(diags) {}

    std::vector<DeclAst> file()
    {
        std::vector<DeclAst> out;
        while (peek().type != TokType::End) {
            try {
                out.push_back(declaration());
            } catch (const SyntaxError& e) {
                diags_.push_back(e.diag);
                recover_top();
            }
        }
        return out;
    }

private:
    const Token& peek(std::size_t ahead = 0) const
    {
        const std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
        return toks_[i];
    }
    const Token& advance()
    {
        const Token& t = toks_[pos_];
        if (pos_ + 1 < toks_.size())
            ++pos_;
        return t;
    }
    bool is_kw(const char* kw, std::size_t ahead = 0) const
    {
        return peek(ahead).type == TokType::Ident && peek(ahead).text == kw;
    }
    SourceSpan span_since(const SourceSpan& start) const
    {
        const Token& last = toks_[pos_ == 0 ? 0 : pos_ - 1];
        return {start.file, start.begin, last.span.end};
    }

    [[noreturn]] void fail(std::vector<std::string> expected, const std::string& what = {})
    {
        const Token& t = peek();
        std::string found = t.type == TokType::Ident    ? "'" + t.text + "'"
                            : t.type == TokType::String ? "string \"" + t.text + "\""
                                                        : describe(t.type);
        throw SyntaxError{{t.span, (what.empty() ? "unexpected " : what + ", found ") + found, std::move(expected)}};
    }

    const Token& expect(TokType type)
    {
        if (peek().type != type)
            fail({describe(type)});
        return advance();
    }
    void expect_kw(const char* kw)
    {
        if (!is_kw(kw))
            fail({std::string("'") + kw + "'"});
        advance();
    }
    Name ident()
    {
        const Token& t = expect(TokType::Ident);
        return {t.text, t.span};
    }

    void recover_top()
    {
        // Skip to the next top-level keyword outside any braces.
        int depth = 0;
        advance();
        while (peek().type != TokType::End) {
            if (depth == 0 && (is_kw("context") || is_kw("schema") || is_kw("network") || is_kw("path") ||
                               is_kw("payloads")))
                return;
            if (peek().type == TokType::LBrace)
                ++depth;
            else if (peek().type == TokType::RBrace && depth > 0)
                --depth;
            advance();
        }
    }

    // Skips the rest of a broken statement inside a block. Stops before a
    // statement keyword or before the closing brace of the enclosing block.
    void recover_statement(std::initializer_list<const char*> keywords)
    {
        int depth = 0;
        bool first = true;
        while (peek().type != TokType::End) {
            if (depth == 0 && !first) {
                if (peek().type == TokType::RBrace)
                    return;
                for (const char* kw : keywords)
                    if (is_kw(kw))
                        return;
            }
            if (peek().type == TokType::LBrace)
                ++depth;
            else if (peek().type == TokType::RBrace) {
                if (depth == 0)
                    return;
                --depth;
            }
            first = false;
            advance();
        }
    }

    template <class F>
    void block(std::initializer_list<const char*> keywords, F&& statement)
    {
        expect(TokType::LBrace);
        while (peek().type != TokType::RBrace) {
            if (peek().type == TokType::End)
                fail({"'}'"}, "unterminated block");
            try {
                statement();
            } catch (const SyntaxError& e) {
                diags_.push_back(e.diag);
                recover_statement(keywords);
            }
        }
        advance();
    }

    DeclAst declaration()
    {
        if (is_kw("context"))
            return context();
        if (is_kw("schema"))
            return schema();
        if (is_kw("network"))
            return network();
        if (is_kw("path"))
            return path();
        if (is_kw("payloads"))
            return store();
        fail({"'context'", "'schema'", "'network'", "'path'", "'payloads'"});
    }

    ContextAst context()
    {
        const SourceSpan start = advance().span;
        ContextAst c;
        c.name = ident();
        block({"role", "type", "relation"}, [&] {
            if (is_kw("role")) {
                advance();
                const Token& name = expect(TokType::String);
                c.roles.push_back({name.text, name.span});
                const std::size_t role = c.roles.size() - 1;
                block({"type"}, [&] {
                    expect_kw("type");
                    c.types.push_back({ident(), role});
                });
            } else if (is_kw("type")) {
                advance();
                c.types.push_back({ident(), std::nullopt});
            } else if (is_kw("relation")) {
                const SourceSpan s = advance().span;
                RelationAst r;
                r.name = ident();
                expect(TokType::Colon);
                r.src = ident();
                expect(TokType::DashDash);
                r.trg = ident();
                r.span = span_since(s);
                c.relations.push_back(std::move(r));
            } else {
                fail({"'role'", "'type'", "'relation'", "'}'"});
            }
        });
        c.span = span_since(start);
        return c;
    }

    SchemaAst schema()
    {
        const SourceSpan start = advance().span;
        SchemaAst s;
        s.name = ident();
        expect_kw("for");
        s.context = ident();
        block({"node", "edge"}, [&] {
            if (is_kw("node")) {
                const SourceSpan st = advance().span;
                SchemaNodeAst n;
                n.id = ident();
                expect(TokType::Colon);
                n.type = ident();
                n.span = span_since(st);
                s.nodes.push_back(std::move(n));
            } else if (is_kw("edge")) {
                const SourceSpan st = advance().span;
                SchemaEdgeAst e;
                e.id = ident();
                expect(TokType::Colon);
                e.a = ident();
                expect(TokType::DashDash);
                e.b = ident();
                expect_kw("via");
                e.relation = ident();
                e.span = span_since(st);
                s.edges.push_back(std::move(e));
            } else {
                fail({"'node'", "'edge'", "'}'"});
            }
        });
        s.span = span_since(start);
        return s;
    }

    static std::optional<int> version_word(const std::string& w)
    {
        if (w.size() < 2 || w[0] != 'v' || w.size() > 10)
            return std::nullopt;
        int v = 0;
        for (std::size_t i = 1; i < w.size(); ++i) {
            if (w[i] < '0' || w[i] > '9')
                return std::nullopt;
            v = v * 10 + (w[i] - '0');
        }
        return v;
    }

    BodyAst body()
    {
        BodyAst b;
        const SourceSpan start = peek().span;
        block({"model", "edge"}, [&] {
            if (is_kw("model")) {
                const SourceSpan st = advance().span;
                ModelAst m;
                m.id = ident();
                expect(TokType::At);
                m.node = ident();
                while (true) {
                    if (is_kw("v") && peek(1).type == TokType::Int) {
                        advance();
                        m.version = static_cast<int>(advance().value);
                    } else if (peek().type == TokType::Ident && version_word(peek().text)) {
                        m.version = version_word(advance().text);
                    } else if (is_kw("authoritative")) {
                        advance();
                        m.authoritative = true;
                    } else if (is_kw("payload")) {
                        advance();
                        m.payload = expect(TokType::String).text;
                    } else {
                        break;
                    }
                }
                m.span = span_since(st);
                b.models.push_back(std::move(m));
            } else if (is_kw("edge")) {
                const SourceSpan st = advance().span;
                NetEdgeAst e;
                e.a = ident();
                expect(TokType::DashDash);
                e.b = ident();
                if (is_kw("expect")) {
                    advance();
                    if (is_kw("consistent"))
                        e.expect = EdgeStatus::Consistent;
                    else if (is_kw("inconsistent"))
                        e.expect = EdgeStatus::Inconsistent;
                    else
                        fail({"'consistent'", "'inconsistent'"});
                    advance();
                }
                e.span = span_since(st);
                b.edges.push_back(std::move(e));
            } else {
                fail({"'model'", "'edge'", "'}'"});
            }
        });
        b.span = span_since(start);
        return b;
    }

    NetworkAst network()
    {
        const SourceSpan start = advance().span;
        NetworkAst n;
        n.name = ident();
        expect_kw("on");
        n.schema = ident();
        n.body = body();
        n.body.span = span_since(start);
        return n;
    }

    PathAst path()
    {
        const SourceSpan start = advance().span;
        PathAst p;
        p.name = ident();
        expect_kw("on");
        p.schema = ident();
        block({"step"}, [&] {
            const SourceSpan st = peek().span;
            expect_kw("step");
            StepAst s;
            s.label = static_cast<int>(expect(TokType::Int).value);
            s.body = body();
            s.body.span = span_since(st);
            p.steps.push_back(std::move(s));
        });
        p.span = span_since(start);
        return p;
    }

    StoreAst store()
    {
        const SourceSpan start = advance().span;
        StoreAst s;
        s.name = ident();
        block({"model"}, [&] {
            const SourceSpan st = peek().span;
            expect_kw("model");
            PayloadModelAst m;
            const Token& ref = expect(TokType::String);
            m.ref = ref.text;
            m.ref_span = ref.span;
            if (is_kw("domain")) {
                advance();
                m.domain = ident().text;
            }
            block({"element"}, [&] {
                const SourceSpan est = peek().span;
                expect_kw("element");
                ElementAst e;
                e.name = ident();
                expect(TokType::Colon);
                e.kind = ident();
                while (peek().type == TokType::Ident && peek(1).type == TokType::Equals) {
                    std::string key = advance().text;
                    advance();
                    e.attrs.emplace_back(std::move(key), expect(TokType::String).text);
                }
                e.span = span_since(est);
                m.elements.push_back(std::move(e));
            });
            m.span = span_since(st);
            s.models.push_back(std::move(m));
        });
        s.span = span_since(start);
        return s;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::vector<Diagnostic>& diags_;
};

// ---------------------------------------------------------------- resolution

// Identifier used for the k-th repeated declaration of the same name.
std::string unique_id(std::map<std::string, int>& seen, const std::string& name)
{
    const int n = ++seen[name];
    return n == 1 ? name : name + "#" + std::to_string(n);
}

class Builder {
public:
    explicit Builder(std::vector<Diagnostic>& diags) : diags_(diags) {}

    Document build(const std::vector<std::vector<DeclAst>>& files)
    {
        // Pass 1: contexts and payload stores; pass 2: schemas; pass 3:
        // networks and paths. References may therefore cross files.
        std::vector<std::pair<DeclKind, std::size_t>> order;
        for (const auto& f : files)
            for (const auto& d : f) {
                if (const auto* c = std::get_if<ContextAst>(&d))
                    add_context(*c);
                else if (const auto* s = std::get_if<StoreAst>(&d))
                    add_store(*s);
            }
        for (const auto& f : files)
            for (const auto& d : f)
                if (const auto* s = std::get_if<SchemaAst>(&d))
                    add_schema(*s);
        for (const auto& f : files)
            for (const auto& d : f) {
                if (const auto* n = std::get_if<NetworkAst>(&d))
                    add_network(*n);
                else if (const auto* p = std::get_if<PathAst>(&d))
                    add_path(*p);
            }

        // Declaration order, restricted to declarations that were built.
        std::map<DeclKind, std::size_t> next;
        for (const auto& f : files)
            for (const auto& d : f) {
                DeclKind kind = static_cast<DeclKind>(d.index());
                const std::string& name = std::visit([](const auto& a) -> const std::string& { return a.name.text; }, d);
                const std::size_t i = next[kind];
                if (i < count(kind) && name_at(kind, i) == name) {
                    doc_.order.emplace_back(kind, i);
                    ++next[kind];
                }
            }
        return std::move(doc_);
    }

private:
    std::size_t count(DeclKind k) const
    {
        switch (k) {
        case DeclKind::Context: return doc_.contexts.size();
        case DeclKind::Schema: return doc_.schemas.size();
        case DeclKind::Network: return doc_.networks.size();
        case DeclKind::Path: return doc_.paths.size();
        case DeclKind::Payloads: return doc_.payload_stores.size();
        }
        return 0;
    }
    const std::string& name_at(DeclKind k, std::size_t i) const
    {
        switch (k) {
        case DeclKind::Context: return doc_.contexts[i].name;
        case DeclKind::Schema: return doc_.schemas[i].name;
        case DeclKind::Network: return doc_.networks[i].name;
        case DeclKind::Path: return doc_.paths[i].name;
        case DeclKind::Payloads: return doc_.payload_stores[i].name;
        }
        return doc_.contexts[i].name;
    }

    void error(const SourceSpan& span, std::string message) { diags_.push_back({span, std::move(message), {}}); }

    bool claim_name(const std::string& space, const Name& name)
    {
        if (!declared_[space].insert(name.text).second) {
            error(name.span, "duplicate " + space + " '" + name.text + "'");
            return false;
        }
        return true;
    }

    void add_context(const ContextAst& a)
    {
        if (!claim_name("context", a.name))
            return;
        ContextDecl d;
        d.name = a.name.text;
        d.span = a.span;
        auto c = std::make_shared<Context>();
        std::vector<Id> nodes;
        std::map<std::string, int> seen_types;
        std::map<std::string, Id> first_type;
        c->roles.resize(a.roles.size());
        for (std::size_t i = 0; i < a.roles.size(); ++i)
            c->roles[i].name = a.roles[i].text;
        for (const auto& t : a.types) {
            const Id id = unique_id(seen_types, t.name.text);
            nodes.push_back(id);
            c->type_names[id] = t.name.text;
            first_type.emplace(t.name.text, id);
            d.type_spans[id] = t.name.span;
            if (t.role)
                c->roles[*t.role].types.push_back(id);
        }
        std::vector<Edge> edges;
        std::map<std::string, int> seen_relations;
        for (const auto& r : a.relations) {
            auto src = first_type.find(r.src.text);
            auto trg = first_type.find(r.trg.text);
            if (src == first_type.end()) {
                error(r.src.span, "unresolved type '" + r.src.text + "'");
                continue;
            }
            if (trg == first_type.end()) {
                error(r.trg.span, "unresolved type '" + r.trg.text + "'");
                continue;
            }
            const Id id = unique_id(seen_relations, r.name.text);
            edges.push_back({id, src->second, trg->second});
            c->relation_names[id] = r.name.text;
            d.relation_spans[id] = r.span;
        }
        c->graph = make_graph(std::move(nodes), std::move(edges));
        d.context = std::move(c);
        doc_.contexts.push_back(std::move(d));
    }

    void add_store(const StoreAst& a)
    {
        if (!claim_name("payload store", a.name))
            return;
        PayloadStoreDecl d;
        d.name = a.name.text;
        d.span = a.span;
        for (const auto& m : a.models) {
            if (!refs_.insert(m.ref).second) {
                error(m.ref_span, "duplicate payload '" + m.ref + "'");
                continue;
            }
            PayloadModelDecl pm;
            pm.ref = m.ref;
            pm.span = m.span;
            pm.model.set_domain(m.domain.value_or(""));
            for (const auto& e : m.elements) {
                auto kind = demo::parse_kind(e.kind.text);
                if (!kind) {
                    error(e.kind.span, "unknown kind '" + e.kind.text + "' (expected K1..K" +
                                           std::to_string(demo::kKindCount) + ")");
                    continue;
                }
                if (pm.model.contains(e.name.text)) {
                    error(e.name.span, "duplicate element '" + e.name.text + "'");
                    continue;
                }
                demo::Element el{e.name.text, *kind, {}};
                for (const auto& [k, v] : e.attrs)
                    el.attrs[k] = v;
                pm.model.add(std::move(el));
            }
            d.models.push_back(std::move(pm));
        }
        doc_.payload_stores.push_back(std::move(d));
    }

    void add_schema(const SchemaAst& a)
    {
        if (!claim_name("schema", a.name))
            return;
        const ContextDecl* ctx = doc_.find_context(a.context.text);
        if (ctx == nullptr) {
            error(a.context.span, "unresolved context '" + a.context.text + "'");
            return;
        }
        const Context& c = *ctx->context;
        auto type_by_name = [&](const std::string& n) -> std::optional<Id> {
            for (const auto& node : c.graph->nodes())
                if (c.type_name(node) == n)
                    return node;
            return std::nullopt;
        };
        auto relation_by_name = [&](const std::string& n) -> const Edge* {
            for (const auto& e : c.graph->edges())
                if (c.relation_name(e.id) == n)
                    return &e;
            return nullptr;
        };

        SchemaDecl d;
        d.name = a.name.text;
        d.context = a.context.text;
        d.span = a.span;
        std::vector<Id> nodes;
        std::map<Id, Id> node_typing;
        std::map<std::string, int> seen;
        std::map<std::string, Id> first_node;
        for (const auto& n : a.nodes) {
            auto type = type_by_name(n.type.text);
            if (!type) {
                error(n.type.span, "unresolved type '" + n.type.text + "'");
                continue;
            }
            const Id id = unique_id(seen, n.id.text);
            nodes.push_back(id);
            node_typing[id] = *type;
            first_node.emplace(n.id.text, id);
            d.node_spans[id] = n.span;
        }
        std::vector<Edge> edges;
        std::map<Id, Id> edge_typing;
        std::map<std::string, int> seen_edges;
        for (const auto& e : a.edges) {
            auto x = first_node.find(e.a.text);
            auto y = first_node.find(e.b.text);
            const Edge* rel = relation_by_name(e.relation.text);
            if (x == first_node.end()) {
                error(e.a.span, "unresolved schema node '" + e.a.text + "'");
                continue;
            }
            if (y == first_node.end()) {
                error(e.b.span, "unresolved schema node '" + e.b.text + "'");
                continue;
            }
            if (rel == nullptr) {
                error(e.relation.span, "unresolved relation '" + e.relation.text + "'");
                continue;
            }
            Id src = x->second, trg = y->second;
            // Edges are written undirected; orient them along the relation
            // when the node types allow it.
            if (!(node_typing[src] == rel->src && node_typing[trg] == rel->trg) &&
                node_typing[trg] == rel->src && node_typing[src] == rel->trg)
                std::swap(src, trg);
            const Id id = unique_id(seen_edges, e.id.text);
            edges.push_back({id, src, trg});
            edge_typing[id] = rel->id;
            d.edge_spans[id] = e.span;
        }
        auto g = make_graph(std::move(nodes), std::move(edges));
        d.schema = std::make_shared<Schema>(
            Schema{g, GraphMorphism(g, c.graph, std::move(node_typing), std::move(edge_typing), Totality::Total)});
        doc_.schemas.push_back(std::move(d));
    }

    struct BuiltNetwork {
        Network network;
        std::map<Id, EdgeStatus> expected;
        NetworkSpans spans;
    };

    std::optional<BuiltNetwork> build_network(const BodyAst& b, const Schema& s, bool versions_required)
    {
        bool ok = true;
        std::vector<Id> nodes;
        std::map<Id, Id> node_typing;
        std::map<Id, int> versions;
        std::set<Id> authoritative;
        std::map<Id, PayloadRef> payloads;
        std::map<std::string, int> seen;
        std::map<std::string, Id> first_model;
        NetworkSpans spans;
        spans.span = b.span;

        for (const auto& m : b.models) {
            if (!s.graph->has_node(m.node.text)) {
                error(m.node.span, "unresolved schema node '" + m.node.text + "'");
                ok = false;
                continue;
            }
            if (!m.version && versions_required) {
                error(m.span, "model '" + m.id.text + "' needs a version number in a path step");
                ok = false;
                continue;
            }
            if (m.payload && !refs_.empty() && !refs_.contains(*m.payload)) {
                error(m.span, "unresolved payload '" + *m.payload + "'");
                ok = false;
                continue;
            }
            const Id id = unique_id(seen, m.id.text);
            nodes.push_back(id);
            node_typing[id] = m.node.text;
            versions[id] = m.version.value_or(1);
            if (m.authoritative)
                authoritative.insert(id);
            if (m.payload)
                payloads[id] = *m.payload;
            first_model.emplace(m.id.text, id);
            spans.models[id] = m.span;
        }

        std::vector<Edge> edges;
        std::map<Id, Id> edge_typing;
        std::map<Id, EdgeStatus> expected;
        std::map<std::string, int> seen_edges;
        std::set<Id> used;
        for (const auto& e : b.edges) {
            auto x = first_model.find(e.a.text);
            auto y = first_model.find(e.b.text);
            if (x == first_model.end() || y == first_model.end()) {
                const Name& missing = x == first_model.end() ? e.a : e.b;
                error(missing.span, "unresolved model '" + missing.text + "'");
                ok = false;
                continue;
            }
            const Id& tx = node_typing[x->second];
            const Id& ty = node_typing[y->second];
            const Edge* pick = nullptr;
            bool flip = false;
            for (int pass = 0; pass < 2 && pick == nullptr; ++pass)
                for (const auto& se : s.graph->edges()) {
                    if (pass == 0 && used.contains(se.id))
                        continue;
                    if (se.src == tx && se.trg == ty) {
                        pick = &se;
                        break;
                    }
                    if (se.src == ty && se.trg == tx) {
                        pick = &se;
                        flip = true;
                        break;
                    }
                }
            if (pick == nullptr) {
                error(e.span, "no schema edge between '" + tx + "' and '" + ty + "'");
                ok = false;
                continue;
            }
            used.insert(pick->id);
            const Id id = unique_id(seen_edges, pick->id);
            edges.push_back(flip ? Edge{id, y->second, x->second} : Edge{id, x->second, y->second});
            edge_typing[id] = pick->id;
            if (e.expect)
                expected[id] = *e.expect;
            spans.edges[id] = e.span;
        }
        if (!ok)
            return std::nullopt;

        auto g = make_graph(std::move(nodes), std::move(edges));
        Network n{g, GraphMorphism(g, s.graph, std::move(node_typing), std::move(edge_typing), Totality::Total),
                  std::move(versions), std::move(authoritative), std::move(payloads)};
        return BuiltNetwork{std::move(n), std::move(expected), std::move(spans)};
    }

    void add_network(const NetworkAst& a)
    {
        if (!claim_name("network", a.name))
            return;
        const SchemaDecl* s = doc_.find_schema(a.schema.text);
        if (s == nullptr) {
            error(a.schema.span, "unresolved schema '" + a.schema.text + "'");
            return;
        }
        auto built = build_network(a.body, *s->schema, false);
        if (!built)
            return;
        doc_.networks.push_back(
            {a.name.text, a.schema.text, std::move(built->network), std::move(built->expected), std::move(built->spans)});
    }

    void add_path(const PathAst& a)
    {
        if (!claim_name("path", a.name))
            return;
        const SchemaDecl* s = doc_.find_schema(a.schema.text);
        if (s == nullptr) {
            error(a.schema.span, "unresolved schema '" + a.schema.text + "'");
            return;
        }
        PathDecl d;
        d.name = a.name.text;
        d.schema = a.schema.text;
        d.span = a.span;
        d.path.schema = s->schema;
        bool ok = true;
        for (const auto& step : a.steps) {
            auto built = build_network(step.body, *s->schema, true);
            if (!built) {
                ok = false;
                continue;
            }
            d.path.networks.push_back(std::move(built->network));
            d.path.expected.push_back(std::move(built->expected));
            d.step_labels.push_back(step.label);
            d.step_spans.push_back(std::move(built->spans));
        }
        if (ok)
            doc_.paths.push_back(std::move(d));
    }

    std::vector<Diagnostic>& diags_;
    Document doc_;
    std::map<std::string, std::set<std::string>> declared_;
    std::set<std::string> refs_;
};

} // namespace

Document parse_set(const std::vector<SourceFile>& files)
{
    std::vector<Diagnostic> diags;
    std::vector<std::vector<DeclAst>> trees;
    for (const auto& f : files) {
        auto tokens = detail::lex(f.text, f.filename, diags);
        trees.push_back(Parser(std::move(tokens), diags).file());
    }
    if (!diags.empty())
        throw ParseError(std::move(diags));
    Document doc = Builder(diags).build(trees);
    if (!diags.empty())
        throw ParseError(std::move(diags));
    return doc;
}

Document parse(std::string_view text, const std::string& filename)
{
    return parse_set({SourceFile{std::string(text), filename}});
}

Document load_files(const std::vector<std::string>& paths)
{
    std::vector<SourceFile> files;
    for (const auto& p : paths) {
        std::ifstream in(p, std::ios::binary);
        if (!in)
            throw Error("cannot read '" + p + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        files.push_back({buf.str(), p});
    }
    return parse_set(files);
}

demo::DemoModel read_model_file(std::string_view text, const std::string& filename)
{
    Document d = parse(text, filename);
    if (d.payload_stores.empty() || d.payload_stores.front().models.empty())
        throw Error("'" + filename + "' contains no payload model");
    return d.payload_stores.front().models.front().model;
}

} // namespace conman::dsl
