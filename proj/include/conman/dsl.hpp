#pragma once

// Textual syntax (.cml) for contexts, schemas, networks, resolution paths and
// demo payload stores. See docs/grammar.md for the EBNF.

#include "conman/demo.hpp"
#include "conman/error.hpp"
#include "conman/resolution.hpp"

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace conman::dsl {

struct SourcePos {
    std::size_t line = 1;   // 1-based
    std::size_t column = 1; // 1-based, in bytes
    friend auto operator<=>(const SourcePos&, const SourcePos&) = default;
};

struct SourceSpan {
    std::string file;
    SourcePos begin;
    SourcePos end;

    bool contains(const SourceSpan& inner) const;
    std::string to_string() const;
};

struct Diagnostic {
    SourceSpan span;
    std::string message;
    std::vector<std::string> expected; // expected-token set for syntax errors

    std::string to_string() const;
};

/// Lexical, syntactic, or reference-resolution failure. what() renders the
/// first diagnostic; all collected diagnostics are available.
class ParseError : public Error {
public:
    explicit ParseError(std::vector<Diagnostic> diagnostics);
    const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

struct ContextDecl {
    std::string name;
    std::shared_ptr<const Context> context;
    SourceSpan span;
    std::map<Id, SourceSpan> type_spans;
    std::map<Id, SourceSpan> relation_spans;
};

struct SchemaDecl {
    std::string name;
    std::string context;
    std::shared_ptr<const Schema> schema;
    SourceSpan span;
    std::map<Id, SourceSpan> node_spans;
    std::map<Id, SourceSpan> edge_spans;
};

struct NetworkSpans {
    SourceSpan span;
    std::map<Id, SourceSpan> models;
    std::map<Id, SourceSpan> edges;
};

struct NetworkDecl {
    std::string name;
    std::string schema;
    Network network;
    std::map<Id, EdgeStatus> expected;
    NetworkSpans spans;
};

struct PathDecl {
    std::string name;
    std::string schema;
    ResolutionPath path;
    std::vector<int> step_labels; // the N in `step N`
    SourceSpan span;
    std::vector<NetworkSpans> step_spans;
};

struct PayloadModelDecl {
    std::string ref;
    demo::DemoModel model;
    SourceSpan span;
};

struct PayloadStoreDecl {
    std::string name;
    std::vector<PayloadModelDecl> models;
    SourceSpan span;

    const demo::DemoModel* find(const std::string& ref) const;
};

enum class DeclKind { Context, Schema, Network, Path, Payloads };

struct Document {
    /// Declaration order across kinds: (kind, index into that kind's list).
    std::vector<std::pair<DeclKind, std::size_t>> order;
    std::vector<ContextDecl> contexts;
    std::vector<SchemaDecl> schemas;
    std::vector<NetworkDecl> networks;
    std::vector<PathDecl> paths;
    std::vector<PayloadStoreDecl> payload_stores;

    bool empty() const;
    const ContextDecl* find_context(const std::string& name) const;
    const SchemaDecl* find_schema(const std::string& name) const;
    const NetworkDecl* find_network(const std::string& name) const;
    const PathDecl* find_path(const std::string& name) const;
    const PayloadStoreDecl* find_store(const std::string& name) const;

    /// Context declaration the schema of a path/network refers to.
    const ContextDecl* context_of_schema(const std::string& schema_name) const;
};

struct SourceFile {
    std::string text;
    std::string filename;
};

/// Parses one file. Cross-references must resolve inside it.
Document parse(std::string_view text, const std::string& filename);

/// Parses several files as one document set; references may cross files.
Document parse_set(const std::vector<SourceFile>& files);

/// Reads and parses files from disk. Throws Error on I/O failure.
Document load_files(const std::vector<std::string>& paths);

/// Canonical text: declaration order kept, one entity per line, 2-space
/// indentation.
std::string serialize(const Document& doc);

/// Equality of everything except source spans.
bool semantically_equal(const Document& a, const Document& b);

/// Quotes a string literal with backslash escapes.
std::string quote(std::string_view s);

/// Single-model payload file used by the SUT contract.
std::string write_model_file(const demo::DemoModel& m, const std::string& ref = "model");
/// Returns the first model of the first payload store in the text.
demo::DemoModel read_model_file(std::string_view text, const std::string& filename);

} // namespace conman::dsl
