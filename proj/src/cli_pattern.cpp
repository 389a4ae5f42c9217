#include "cli_common.hpp"
#include "conman/cli.hpp"

#include <json.hpp>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

namespace conman::cli::detail {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Raised by the external SUT binding; turns the case verdict into "error".
class SutFailure : public Error {
public:
    using Error::Error;
};

std::string shell_quote(const std::string& s)
{
    std::string out = "'";
    for (char ch : s) {
        if (ch == '\'')
            out += "'\\''";
        else
            out += ch;
    }
    return out + "'";
}

std::string substitute(std::string tmpl, const std::string& key, const std::string& value)
{
    for (std::size_t pos = tmpl.find(key); pos != std::string::npos; pos = tmpl.find(key, pos + value.size()))
        tmpl.replace(pos, key.size(), value);
    return tmpl;
}

std::string read_text(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in)
        throw SutFailure("SUT produced no output file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Runs the command template on one model through temporary files.
demo::DemoModel run_external_sut(const std::string& tmpl, const demo::DemoModel& input)
{
    static std::atomic<unsigned> counter{0};
    const std::string stem = "conman-sut-" + std::to_string(::getpid()) + "-" + std::to_string(counter++);
    const fs::path in = fs::temp_directory_path() / (stem + "-in.cml");
    const fs::path out = fs::temp_directory_path() / (stem + "-out.cml");
    {
        std::ofstream f(in, std::ios::binary);
        f << dsl::write_model_file(input, "input");
    }
    const std::string cmd = substitute(substitute(tmpl, "{in}", shell_quote(in.string())), "{out}",
                                       shell_quote(out.string()));
    const int status = std::system(cmd.c_str());
    std::error_code ec;
    fs::remove(in, ec);
    if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0) {
        fs::remove(out, ec);
        throw SutFailure("SUT exited with status " +
                         std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : status));
    }
    const std::string text = read_text(out);
    fs::remove(out, ec);
    try {
        return dsl::read_model_file(text, "SUT output");
    } catch (const Error& e) {
        throw SutFailure(std::string("unreadable SUT output: ") + e.what());
    }
}

std::function<demo::DemoModel(const demo::DemoModel&)> sut_transform(const std::string& spec,
                                                                      const demo::KindMap& km)
{
    if (spec == "builtin:reference")
        return [km](const demo::DemoModel& m) { return demo::reference_transform(m, km); };
    if (spec == "builtin:mutant")
        return [km](const demo::DemoModel& m) { return demo::mutant_transform(m, km); };
    return [spec](const demo::DemoModel& m) { return run_external_sut(spec, m); };
}

std::vector<method::Direction> parse_directions(const std::string& spec, std::size_t n)
{
    std::vector<method::Direction> out;
    std::stringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item == "fwd")
            out.push_back(method::Direction::Fwd);
        else if (item == "bwd")
            out.push_back(method::Direction::Bwd);
        else if (!item.empty())
            throw Error("unknown direction '" + item + "' (expected fwd or bwd)");
    }
    if (out.size() > n)
        throw Error("more directions than increments");
    out.resize(n, method::Direction::Fwd);
    return out;
}

json step_json(const method::StepRecord& r)
{
    const auto t = std::chrono::system_clock::to_time_t(r.started);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    json j{{"type", "step"},   {"step", r.index},     {"fragment", r.fragment}, {"sources", r.sources},
           {"inputs", r.inputs}, {"outputs", r.outputs}, {"notes", r.notes},       {"timestamp", buf}};
    j["verdict"] = r.verdict ? json(*r.verdict) : json(nullptr);
    return j;
}

class TraceWriter {
public:
    explicit TraceWriter(const std::string& path)
    {
        if (path.empty())
            return;
        file_.open(path, std::ios::binary | std::ios::trunc);
        if (!file_)
            throw Error("cannot write trace '" + path + "'");
    }
    void write(json j)
    {
        if (file_.is_open())
            file_ << j.dump() << "\n";
    }
    void steps(const std::vector<method::StepRecord>& trace, const json& extra)
    {
        for (const auto& r : trace) {
            json j = step_json(r);
            j.update(extra);
            write(std::move(j));
        }
    }

private:
    std::ofstream file_;
};

std::string verdict_of(const std::vector<method::StepRecord>& trace)
{
    for (const auto& r : trace)
        if (r.verdict && !*r.verdict)
            return "fail";
    return "pass";
}

int generate_and_check(const PatternOptions& o, const method::Chain& chain, const demo::KindMap& km,
                       demo::IntPolicy policy, std::ostream& out, std::ostream& err)
{
    if (o.sut.empty()) {
        err << "error: GenerateAndCheck needs --sut\n";
        return kExitUsage;
    }
    TraceWriter trace(o.trace);
    const auto transform = sut_transform(o.sut, km);
    std::size_t pass = 0, fail = 0, error = 0;
    for (std::size_t k = 0; k < o.cases; ++k) {
        const std::uint64_t seed = o.seed + k;
        method::ImplRegistry impls = demo::demo_impls({km, seed, o.size, policy, std::nullopt});
        demo::bind_sut(impls, transform);
        const json extra{{"case", k}, {"seed", seed}};
        std::string verdict;
        std::string detail;
        try {
            const method::ChainResult r = method::run_chain(chain, {}, impls);
            trace.steps(r.trace, extra);
            verdict = verdict_of(r.trace);
        } catch (const method::ChainError& e) {
            trace.steps(e.partial_trace(), extra);
            verdict = "error";
            detail = e.cause();
        }
        (verdict == "pass" ? pass : verdict == "fail" ? fail : error)++;
        json summary{{"type", "case"}, {"verdict", verdict}, {"timestamp", timestamp_iso8601()}};
        summary.update(extra);
        if (!detail.empty())
            summary["detail"] = detail;
        trace.write(std::move(summary));
        out << "case " << k << " (seed " << seed << "): " << verdict;
        if (!detail.empty())
            out << " (" << detail << ")";
        out << "\n";
    }
    out << pass << " pass, " << fail << " fail, " << error << " error\n";
    return fail == 0 && error == 0 ? kExitOk : kExitFailure;
}

// Externals for the SYNC patterns: a generated start and one applicable delta
// per increment, computed against a simulated evolution of the models.
std::map<std::string, method::Artefact> sync_externals(method::PatternName p, const PatternOptions& o,
                                                       const demo::KindMap& km,
                                                       const std::vector<method::Direction>& dirs)
{
    using method::ArtefactKind;
    std::map<std::string, method::Artefact> ext;
    const demo::Triple t = demo::demo_gen(o.seed, o.size, km);
    demo::DemoCorr corr;
    ext["M_S"] = {ArtefactKind::model("S"), t.src()};
    if (p == method::PatternName::ColdStart) {
        ext["M_T"] = {ArtefactKind::model("T"), t.trg()};
        corr = demo::demo_cc_initial(t.src(), t.trg(), km).corr;
    } else {
        corr = demo::demo_sync_fwd_initial(t.src(), km).corr;
    }
    for (std::size_t j = 1; j <= dirs.size(); ++j) {
        const bool fwd = dirs[j - 1] == method::Direction::Fwd;
        const std::uint64_t seed = o.seed * 7919ULL + j;
        const demo::DemoDelta d = demo::random_delta(seed, fwd ? corr.src : corr.trg);
        corr = fwd ? demo::demo_sync_fwd_incr(d, corr, km).corr : demo::demo_sync_bwd_incr(d, corr, km).corr;
        ext[method::external_delta_name(dirs[j - 1], j)] = {ArtefactKind::delta(fwd ? "S" : "T"), d};
    }
    return ext;
}

int run_sync_pattern(method::PatternName p, const PatternOptions& o, const method::Chain& chain,
                     const demo::KindMap& km, demo::IntPolicy policy, const std::vector<method::Direction>& dirs,
                     std::ostream& out, std::ostream& err)
{
    TraceWriter trace(o.trace);
    const auto ext = sync_externals(p, o, km, dirs);
    const method::ImplRegistry impls = demo::demo_impls({km, o.seed, o.size, policy, std::nullopt});
    try {
        const method::ChainResult r = method::run_chain(chain, ext, impls);
        trace.steps(r.trace, json{{"seed", o.seed}});
        for (const auto& s : r.trace) {
            out << "step " << s.index << " " << s.fragment << ":";
            for (const auto& x : s.outputs)
                out << " " << x;
            out << "\n";
        }
        // The last step's correspondence carries the final pair of models.
        const demo::DemoCorr* last = nullptr;
        for (const auto& a : r.outputs.back())
            if (const auto* c = std::any_cast<demo::DemoCorr>(&a.payload))
                last = c;
        const bool consistent = last != nullptr && demo::demo_consistent(last->src, last->trg, km);
        out << r.trace.size() << " steps; final pair " << (consistent ? "consistent" : "inconsistent") << "\n";
        trace.write({{"type", "result"},
                     {"steps", r.trace.size()},
                     {"consistent", consistent},
                     {"timestamp", timestamp_iso8601()}});
        return consistent && verdict_of(r.trace) == "pass" ? kExitOk : kExitFailure;
    } catch (const method::ChainError& e) {
        trace.steps(e.partial_trace(), json{{"seed", o.seed}});
        err << "error: step " << e.step() << ": " << e.cause() << "\n";
        return kExitFailure;
    }
}

} // namespace

int cmd_pattern(const PatternOptions& o, std::ostream& out, std::ostream& err)
{
    try {
        const auto p = method::parse_pattern_name(o.name);
        if (!p) {
            err << "error: unknown pattern '" << o.name << "'\n";
            return kExitUsage;
        }
        if (o.impl != "demo") {
            err << "error: missing implementation '" << o.impl << "' (available: demo)\n";
            return kExitUsage;
        }
        const demo::KindMap km = demo::KindMap::named(o.kindmap);
        const auto policy = demo::parse_policy(o.policy);
        if (!policy) {
            err << "error: unknown policy '" << o.policy << "'\n";
            return kExitUsage;
        }
        const auto dirs = parse_directions(o.directions, o.n);
        const method::Chain chain = method::expand_pattern(*p, o.n, dirs);
        const ValidationReport v = method::validate_chain(chain);
        if (!v.ok()) {
            for (const auto& x : v)
                err << "chain: " << x.to_string() << "\n";
            return kExitFailure;
        }
        if (*p == method::PatternName::GenerateAndCheck)
            return generate_and_check(o, chain, km, *policy, out, err);
        return run_sync_pattern(*p, o, chain, km, *policy, dirs, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

} // namespace conman::cli::detail
