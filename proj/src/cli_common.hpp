#pragma once

#include "conman/demo_bindings.hpp"
#include "conman/dsl.hpp"

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace conman::cli::detail {

/// Files given on the command line, or every *.cml below $CONMAN_CORPUS when
/// none are given.
std::vector<std::string> input_files(const std::vector<std::string>& given);

void print_diagnostics(std::ostream& err, const dsl::ParseError& e);

/// Models of the named stores, or of every store when `names` is empty.
std::shared_ptr<demo::PayloadStore> collect_payloads(const dsl::Document& doc, const std::vector<std::string>& names,
                                                     bool none);

/// Parses "demo", "demo:<kindmap>" or "none". Returns false for "none".
bool parse_relations(const std::string& spec, demo::KindMap& km);

std::string timestamp_iso8601();

int cmd_validate(const std::vector<std::string>& files, std::ostream& out, std::ostream& err);

struct ReplayOptions {
    std::string path;
    std::vector<std::string> payloads;
    bool no_payloads = false;
    std::string relations = "demo";
    std::string dot_dir;
    std::vector<std::string> files;
};
int cmd_replay(const ReplayOptions& o, std::ostream& out, std::ostream& err);

struct PatternOptions {
    std::string name;
    std::size_t n = 1;
    std::string impl = "demo";
    std::string sut;
    std::size_t cases = 50;
    std::uint64_t seed = 1;
    std::size_t size = 3;
    std::string kindmap = "identity";
    std::string directions;
    std::string policy = "source-wins";
    std::string trace;
};
int cmd_pattern(const PatternOptions& o, std::ostream& out, std::ostream& err);

struct SearchOptions {
    std::string network;
    std::string moves = "demo-sync";
    int depth = 3;
    std::size_t expansions = 10000;
    std::vector<std::string> payloads;
    std::string relations = "demo";
    std::string out_file;
    std::vector<std::string> files;
};
int cmd_search(const SearchOptions& o, std::ostream& out, std::ostream& err);

} // namespace conman::cli::detail
