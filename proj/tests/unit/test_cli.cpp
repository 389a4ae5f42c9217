#include "conman/cli.hpp"
#include "conman/dsl.hpp"

#include "../support/fixtures.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using conman::cli::run;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result conman_cli(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::size_t lines(const std::string& s, const std::string& needle = "")
{
    std::istringstream in(s);
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);)
        if (line.find(needle) != std::string::npos)
            ++n;
    return n;
}

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / "conman-cli-tests";
    fs::create_directories(dir);
    return dir / name;
}

void write(const fs::path& p, const std::string& text)
{
    std::ofstream(p) << text;
}

std::string sut_template(const char* binary)
{
    return std::string("'") + binary + "' {in} {out}";
}

} // namespace

TEST_CASE("validate")
{
    const auto ok = conman_cli({"validate", fixture::corpus("cmdae.cml"), fixture::corpus("cme.cml")});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("ok") != std::string::npos);

    // Two models typed by the same schema node: the typing is not mono.
    const fs::path bad = scratch("bad.cml");
    write(bad, "context C { type A }\n"
               "schema S for C { node a : A }\n"
               "network N on S { model m @ a model n @ a }\n");
    const auto r = conman_cli({"validate", bad.string()});
    CHECK(r.code == 1);
    CHECK(lines(r.out, "bad.cml:") == 1);
    CHECK(r.out.find("1 violation") != std::string::npos);

    const auto missing = conman_cli({"validate", scratch("does-not-exist.cml").string()});
    CHECK(missing.code == 2);

    const fs::path broken = scratch("broken.cml");
    write(broken, "context C { type }\n");
    const auto syntax = conman_cli({"validate", broken.string()});
    CHECK(syntax.code == 2);
    CHECK(syntax.err.find("broken.cml:1:") != std::string::npos);
}

TEST_CASE("usage errors")
{
    CHECK(conman_cli({}).code == 2);
    CHECK(conman_cli({"frobnicate"}).code == 2);
    CHECK(conman_cli({"replay"}).code == 2);
    CHECK(conman_cli({"--help"}).code == 0);
}

TEST_CASE("replay")
{
    const auto r = conman_cli({"replay", "CMDAEPath", fixture::corpus("cmdae.cml")});
    CHECK(r.code == 0);
    CHECK(r.out.find("path consistent") != std::string::npos);
    CHECK(lines(r.out, "N5: inconsistent") == 1);

    const auto bare = conman_cli({"replay", "CMDAEPath", "--no-payloads", fixture::corpus("cmdae.cml")});
    CHECK(bare.code == 0);
    CHECK(bare.out.find("path consistency unknown") != std::string::npos);
    CHECK(lines(bare.out, " -- ") > 0);
    CHECK(lines(bare.out, " -- ") == lines(bare.out, "): unknown"));

    const auto fail = conman_cli({"replay", "MBTTFail", fixture::corpus("mbtt.cml")});
    CHECK(fail.code == 0);
    CHECK(fail.out.find("path not consistent") != std::string::npos);

    CHECK(conman_cli({"replay", "Nope", fixture::corpus("cmdae.cml")}).code == 2);

    const fs::path dir = scratch("dot");
    fs::remove_all(dir);
    const auto dot = conman_cli({"replay", "CMDAEPath", "--dot", dir.string(), fixture::corpus("cmdae.cml")});
    CHECK(dot.code == 0);
    std::size_t n = 0;
    for (const auto& e : fs::directory_iterator(dir))
        n += e.path().extension() == ".dot";
    CHECK(n == 3);
}

TEST_CASE("fmt and dot")
{
    const auto f = conman_cli({"fmt", fixture::corpus("cmdae.cml")});
    CHECK(f.code == 0);
    CHECK(f.out == conman::dsl::serialize(fixture::load("cmdae.cml")));
    const auto d = conman_cli({"dot", "CMDAE", fixture::corpus("cmdae.cml")});
    CHECK(d.code == 0);
    CHECK(d.out.rfind("graph", 0) == 0);
    CHECK(conman_cli({"dot", "Nope", fixture::corpus("cmdae.cml")}).code == 2);
}

TEST_CASE("pattern")
{
    SUBCASE("DirectedStart with three increments")
    {
        const fs::path trace = scratch("ds.jsonl");
        const auto r = conman_cli({"pattern", "DirectedStart", "--n", "3", "--trace", trace.string()});
        CHECK(r.code == 0);
        CHECK(r.out.find("4 steps") != std::string::npos);
        CHECK(lines(fixture::read_file(trace.string()), "\"type\":\"step\"") == 4);
    }
    SUBCASE("ColdStart backwards")
    {
        const auto r = conman_cli({"pattern", "ColdStart", "--n", "2", "--directions", "bwd,fwd"});
        CHECK(r.code == 0);
    }
    SUBCASE("GenerateAndCheck against the in-process SUTs")
    {
        const auto good = conman_cli({"pattern", "GenerateAndCheck", "--sut", "builtin:reference", "--cases", "10"});
        CHECK(good.code == 0);
        CHECK(good.out.find("10 pass, 0 fail, 0 error") != std::string::npos);
        const auto bad = conman_cli({"pattern", "GenerateAndCheck", "--sut", "builtin:mutant", "--cases", "10"});
        CHECK(bad.code == 1);
        CHECK(bad.out.find("0 pass, 10 fail") != std::string::npos);
    }
    SUBCASE("GenerateAndCheck against external SUT processes")
    {
        const fs::path trace = scratch("gac.jsonl");
        const auto good = conman_cli({"pattern", "GenerateAndCheck", "--sut", sut_template(CONMAN_REF_SUT), "--cases",
                                      "3", "--n", "1", "--trace", trace.string()});
        CHECK(good.code == 0);
        CHECK(good.out.find("3 pass") != std::string::npos);
        std::ifstream in(trace);
        std::size_t steps = 0, cases = 0;
        for (std::string line; std::getline(in, line);) {
            const auto j = nlohmann::json::parse(line);
            steps += j.at("type") == "step";
            cases += j.at("type") == "case";
        }
        CHECK(cases == 3);
        CHECK(steps % 3 == 0);

        const auto bad =
            conman_cli({"pattern", "GenerateAndCheck", "--sut", sut_template(CONMAN_MUTANT_SUT), "--cases", "3"});
        CHECK(bad.code == 1);
        CHECK(bad.out.find("0 pass") != std::string::npos);

        const auto crash = conman_cli({"pattern", "GenerateAndCheck", "--sut", "false", "--cases", "2"});
        CHECK(crash.code == 1);
        CHECK(crash.out.find("2 error") != std::string::npos);
    }
    SUBCASE("argument errors")
    {
        CHECK(conman_cli({"pattern", "GenerateAndCheck"}).code == 2);
        CHECK(conman_cli({"pattern", "Sideways"}).code == 2);
        CHECK(conman_cli({"pattern", "DirectedStart", "--impl", "other"}).code == 2);
    }
}

TEST_CASE("search")
{
    const fs::path out = scratch("found.cml");
    const auto r = conman_cli({"search", "SearchStart", "--out", out.string(), fixture::corpus("search_demo.cml")});
    CHECK(r.code == 0);
    CHECK(r.out.find("found path of length 2") != std::string::npos);

    const auto v = conman_cli({"validate", out.string()});
    CHECK(v.code == 0);
    const auto replay = conman_cli({"replay", "SearchStartResolution", out.string()});
    CHECK(replay.code == 0);
    CHECK(replay.out.find("path consistent") != std::string::npos);

    CHECK(conman_cli({"search", "SearchStart", "--depth", "0", fixture::corpus("search_demo.cml")}).code == 2);
    CHECK(conman_cli({"search", "SearchStart", "--depth", "1", fixture::corpus("search_demo.cml")}).code == 1);
}

TEST_CASE("the conman binary")
{
    const std::string cmd = std::string("'") + CONMAN_BIN + "' validate '" + fixture::corpus("cmdae.cml") + "' >/dev/null";
    CHECK(std::system(cmd.c_str()) == 0);
}
