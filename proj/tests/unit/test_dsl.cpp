#include "conman/demo_bindings.hpp"
#include "conman/dot.hpp"
#include "conman/dsl.hpp"

#include "../support/fixtures.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <regex>

using namespace conman;
using namespace conman::dsl;

namespace {

std::vector<Diagnostic> diagnostics_of(const std::string& text)
{
    try {
        parse(text, "t.cml");
    } catch (const ParseError& e) {
        return e.diagnostics();
    }
    return {};
}

std::size_t count(const std::string& text, const std::string& needle)
{
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1))
        ++n;
    return n;
}

const char* const kSmall = R"(
context C {
  role "R" {
    type A
  }
  type B
  relation AB : A -- B
}
schema S for C {
  node a : A
  node b : B
  edge ab : a -- b via AB
}
)";

} // namespace

TEST_CASE("parse the CMDAE corpus file")
{
    const Document d = fixture::load("cmdae.cml");
    REQUIRE(d.contexts.size() == 1);
    const Context& c = *d.contexts[0].context;
    CHECK(c.graph->nodes().size() == 3);
    CHECK(c.graph->edges().size() == 4);
    REQUIRE(d.schemas.size() == 1);
    CHECK(d.schemas[0].schema->graph->nodes().size() == 5);
    CHECK(d.schemas[0].schema->graph->edges().size() == 4);
    REQUIRE(d.paths.size() == 1);
    CHECK(d.paths[0].path.networks.size() == 9);
    CHECK(d.paths[0].step_labels.front() == 1);
    CHECK(d.paths[0].step_labels.back() == 9);
}

TEST_CASE("empty input")
{
    CHECK(parse("", "e.cml").empty());
    CHECK(parse("  # only a comment\n\n", "e.cml").empty());
    CHECK(serialize(parse("", "e.cml")).empty());
}

TEST_CASE("unresolved references carry the span of the reference")
{
    const std::string text = std::string(kSmall) + "schema T for C {\n  node x : A\n  node y : B\n  edge x -- y\n}\n";
    auto diags = diagnostics_of(std::string(kSmall) +
                                "schema T for C {\n  node x : A\n  node y : B\n  edge e : x -- y via NOPE\n}\n");
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].message.find("NOPE") != std::string::npos);
    CHECK(diags[0].span.begin.line == 17);
    CHECK(diags[0].span.begin.column == 23);
    CHECK(diags[0].span.end.column == 27);

    diags = diagnostics_of("schema S for Missing { }");
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].message.find("Missing") != std::string::npos);

    diags = diagnostics_of(std::string(kSmall) + "path P on S { step 1 { model m @ zz v1 } }");
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].message.find("zz") != std::string::npos);

    diags = diagnostics_of(std::string(kSmall) + "payloads P { model \"r\" { element e : K1 } }\n" +
                           "network N on S { model m @ a payload \"q\" }");
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].message.find("'q'") != std::string::npos);
}

TEST_CASE("syntax errors list the expected tokens and recover")
{
    auto diags = diagnostics_of("context C { type A relation R A -- A }");
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].expected == std::vector<std::string>{"':'"});
    CHECK(diags[0].span.begin.column == 31);

    // Two independent statement errors in one block are both reported.
    diags = diagnostics_of("context C {\n  type 1\n  type A\n  relation : A -- A\n}\n");
    CHECK(diags.size() == 2);
    CHECK(diags[0].span.begin.line == 2);
    CHECK(diags[1].span.begin.line == 4);

    diags = diagnostics_of("bogus");
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].expected.size() == 5);

    diags = diagnostics_of("context C { type A \"unterminated\n}");
    REQUIRE_FALSE(diags.empty());
    CHECK(diags[0].message.find("string") != std::string::npos);
}

TEST_CASE("versions are required in path steps and default to 1 in networks")
{
    auto diags = diagnostics_of(std::string(kSmall) + "path P on S { step 1 { model m @ a } }");
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].message.find("version") != std::string::npos);

    const Document d = parse(std::string(kSmall) + "network N on S { model m @ a }", "n.cml");
    CHECK(d.networks[0].network.version("m") == 1);

    const Document v = parse(std::string(kSmall) + "path P on S { step 1 { model m @ a v 3 model n @ b v4 } }", "v");
    CHECK(v.paths[0].path.networks[0].version("m") == 3);
    CHECK(v.paths[0].path.networks[0].version("n") == 4);
}

TEST_CASE("edges are oriented along their relation")
{
    const Document d = parse(std::string(kSmall) +
                                 "schema T for C { node x : A node y : B edge e : y -- x via AB }\n"
                                 "network N on T { model p @ y model q @ x edge p -- q }",
                             "o.cml");
    const Schema& t = *d.find_schema("T")->schema;
    CHECK(t.graph->find_edge("e")->src == "x");
    CHECK(validate_schema(t, *d.contexts[0].context).ok());
    const Network& n = d.networks[0].network;
    CHECK(n.graph->edges()[0].src == "q");
    CHECK(validate_network(n, t).ok());
}

TEST_CASE("duplicate names produce exactly one violation")
{
    const Document d = parse("context C { type A type B relation R : A -- B relation R : A -- B }", "d.cml");
    const ValidationReport r = validate_context(*d.contexts[0].context);
    CHECK(r.size() == 1);
    CHECK(r.has("duplicate-relation-name"));
}

TEST_CASE("spans nest")
{
    const Document d = fixture::load("cmdae.cml");
    const auto& c = d.contexts[0];
    for (const auto& [_, s] : c.type_spans)
        CHECK(c.span.contains(s));
    for (const auto& [_, s] : c.relation_spans)
        CHECK(c.span.contains(s));
    const auto& sc = d.schemas[0];
    for (const auto& [_, s] : sc.node_spans)
        CHECK(sc.span.contains(s));
    const auto& p = d.paths[0];
    for (const auto& step : p.step_spans) {
        CHECK(p.span.contains(step.span));
        for (const auto& [_, s] : step.models)
            CHECK(step.span.contains(s));
        for (const auto& [_, s] : step.edges)
            CHECK(step.span.contains(s));
    }
    CHECK_FALSE(c.span.contains(sc.span));
}

TEST_CASE("serialize round trip on the corpus")
{
    for (const auto& file : fixture::corpus_files()) {
        const Document d = load_files({file});
        const std::string once = serialize(d);
        const Document again = parse(once, "canonical.cml");
        CHECK_MESSAGE(semantically_equal(d, again), file);
        CHECK_MESSAGE(serialize(again) == once, file);
    }
    const Document all = load_files(fixture::corpus_files());
    CHECK(semantically_equal(all, parse(serialize(all), "all.cml")));
}

TEST_CASE("messy whitespace serializes canonically")
{
    const std::string messy = "context   C{type A\n\n\n   type B relation AB:A--B}   # trailing\n"
                              "schema S for C{node a:A node b:B edge ab:a--b via AB}";
    const Document d = parse(messy, "m.cml");
    const std::string canonical = serialize(d);
    CHECK(canonical != messy);
    CHECK(semantically_equal(d, parse(canonical, "c.cml")));
    CHECK(canonical.find("\n  type A\n") != std::string::npos);
}

TEST_CASE("quote and model files")
{
    CHECK(quote("a\"b\\c\n") == "\"a\\\"b\\\\c\\n\"");
    const Document d = parse("payloads P { model \"r\" { element e : K1 k = \"x\\ty\" } }", "q.cml");
    CHECK(d.payload_stores[0].models[0].model.find("e")->attrs.at("k") == "x\ty");

    const demo::Triple t = demo::demo_gen(4, 6, demo::KindMap::identity());
    CHECK(read_model_file(write_model_file(t.src()), "f") == t.src());
    CHECK_THROWS_AS(read_model_file("", "f"), Error);
}

TEST_CASE("parser totality under fuzzing")
{
    std::mt19937 rng(99);
    std::vector<std::string> seeds;
    for (const auto& f : fixture::corpus_files())
        seeds.push_back(fixture::read_file(f));
    std::size_t ok = 0, failed = 0;
    auto attempt = [&](const std::string& text) {
        try {
            parse(text, "fuzz.cml");
            ++ok;
        } catch (const ParseError& e) {
            REQUIRE_FALSE(e.diagnostics().empty());
            for (const auto& d : e.diagnostics())
                CHECK(d.span.file == "fuzz.cml");
            ++failed;
        }
    };
    for (int i = 0; i < 300; ++i) {
        std::string junk(std::uniform_int_distribution<std::size_t>(0, 200)(rng), '\0');
        for (auto& ch : junk)
            ch = static_cast<char>(std::uniform_int_distribution<int>(0, 255)(rng));
        attempt(junk);
    }
    const std::string alphabet = "{}:@=-\"#\n abcvK1 context schema path step model edge";
    for (int i = 0; i < 700; ++i) {
        std::string text = seeds[i % seeds.size()];
        const int edits = std::uniform_int_distribution<int>(1, 8)(rng);
        for (int k = 0; k < edits && !text.empty(); ++k) {
            const std::size_t pos = std::uniform_int_distribution<std::size_t>(0, text.size() - 1)(rng);
            switch (rng() % 3) {
            case 0: text.erase(pos, std::uniform_int_distribution<std::size_t>(1, 20)(rng)); break;
            case 1: text.insert(pos, 1, alphabet[rng() % alphabet.size()]); break;
            default: text[pos] = static_cast<char>(rng() % 256); break;
            }
        }
        attempt(text);
    }
    CHECK(ok + failed == 1000);
    CHECK(failed > 0);
}

TEST_CASE("DOT export")
{
    const Document d = fixture::load("cmdae.cml");
    const Context& c = *d.contexts[0].context;

    SUBCASE("context: one cluster per role, four edges")
    {
        const std::string dot = export_dot(c, "CMDAE");
        CHECK(count(dot, "subgraph cluster_") == 3);
        CHECK(count(dot, " -- ") == 4);
        CHECK(dot.find("label=\"Electrical Engineer\"") != std::string::npos);
        CHECK(dot.rfind("graph \"CMDAE\" {", 0) == 0);
    }
    SUBCASE("schema")
    {
        const std::string dot = export_dot(*d.schemas[0].schema, c);
        CHECK(count(dot, " -- ") == 4);
        CHECK(dot.find("\"los_tmp : LOS\"") != std::string::npos);
    }
    SUBCASE("empty network is a single empty cluster")
    {
        const std::string dot = export_dot(empty_network(d.schemas[0].schema->graph));
        CHECK(count(dot, "subgraph cluster_") == 1);
        CHECK(count(dot, " -- ") == 0);
        CHECK(count(dot, "[label=") == 0);
    }
    SUBCASE("replayed path: nine clusters, one red edge in the fifth")
    {
        const PathDecl& p = d.paths[0];
        auto store = std::make_shared<demo::PayloadStore>();
        for (const auto& m : d.payload_stores[0].models)
            store->emplace(m.ref, m.model);
        demo::DemoRelations rel(c, store, demo::KindMap::identity());
        const PathReport r = replay_path(p.path, c, rel.registry());
        const std::string dot = export_dot(p.path, &r, p.name);
        CHECK(count(dot, "subgraph cluster_") == 9);
        CHECK(dot.find("rankdir=LR") != std::string::npos);

        // Split into clusters and look at the fifth.
        std::vector<std::string> clusters;
        for (auto pos = dot.find("subgraph cluster_"); pos != std::string::npos;) {
            const auto next = dot.find("subgraph cluster_", pos + 1);
            clusters.push_back(dot.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
            pos = next;
        }
        REQUIRE(clusters.size() == 9);
        CHECK(count(clusters[4], "style=\"dashed,bold\" color=red") == 1);
        CHECK(count(clusters[3], "color=red") == 0);
        CHECK(count(clusters[6], "color=red") == 2);
        CHECK(clusters[4].find("\"SM v2\" style=filled fillcolor=black fontcolor=white") != std::string::npos);
        CHECK(count(clusters[0], "[label=") == 0);
    }
}
