#include "conman/demo_bindings.hpp"
#include "conman/method.hpp"

#include <doctest.h>

#include <set>

using namespace conman;
using namespace conman::method;

namespace {

const ArtefactKind MS = ArtefactKind::model("S");
const ArtefactKind MT = ArtefactKind::model("T");
const ArtefactKind C = ArtefactKind::corrs("S", "T");
const ArtefactKind DS = ArtefactKind::delta("S");
const ArtefactKind DT = ArtefactKind::delta("T");

using Sig = std::pair<std::vector<ArtefactKind>, std::vector<ArtefactKind>>;

const std::map<std::string, Sig>& expected_signatures()
{
    static const std::map<std::string, Sig> sigs = {
        {"GEN-initial", {{}, {MS, C, MT}}},
        {"GEN-incremental", {{MS, C, MT}, {DS, C, DT}}},
        {"CC-initial", {{MS, MT}, {C}}},
        {"CC-incremental", {{C, DS, DT}, {C}}},
        {"SYNC-fwd-initial", {{MS}, {C, MT}}},
        {"SYNC-fwd-incremental", {{DS, C}, {C, DT}}},
        {"SYNC-bwd-initial", {{MT}, {C, MS}}},
        {"SYNC-bwd-incremental", {{DT, C}, {C, DS}}},
        {"INT", {{C, DS, DT}, {C, DS, DT}}},
    };
    return sigs;
}

} // namespace

TEST_CASE("artefact kinds")
{
    CHECK(validate_kind(MS).ok());
    CHECK(validate_kind(C).ok());
    CHECK(validate_kind(ArtefactKind::corrs("S", "S")).has("corrs-same-domain"));
    ArtefactKind cross = DS;
    cross.src = "S";
    cross.trg = "T";
    CHECK(validate_kind(cross).has("delta-cross-domain"));
    CHECK(ArtefactKind::model("S", true) == ArtefactKind::model("S", false));
    CHECK_FALSE(MS == MT);
}

TEST_CASE("catalogue")
{
    const auto& cat = catalogue();
    REQUIRE(cat.size() == 9);
    std::set<std::string> names;
    for (const auto& f : cat) {
        names.insert(f.name);
        CHECK(is_legal(f.activity, f.mode, f.direction));
        const auto it = expected_signatures().find(f.name);
        REQUIRE_MESSAGE(it != expected_signatures().end(), f.name);
        CHECK_MESSAGE(f.inputs == it->second.first, f.name);
        CHECK_MESSAGE(f.outputs == it->second.second, f.name);
    }
    CHECK(names.size() == 9);
    CHECK(fragment("CC-incremental").outputs == std::vector<ArtefactKind>{C});
    CHECK(fragment("SYNC-fwd-initial").inputs.size() == 1);
    CHECK_THROWS_AS(fragment("SYNC-sideways"), Error);

    // Exactly nine legal combinations.
    std::size_t legal = 0;
    for (auto a : {Activity::CC, Activity::GEN, Activity::SYNC, Activity::INT, Activity::SUT})
        for (auto m : {Mode::Initial, Mode::Incremental})
            for (auto d : {Direction::Fwd, Direction::Bwd, Direction::None})
                legal += is_legal(a, m, d);
    CHECK(legal == 9);
}

TEST_CASE("every fragment type-checks as a one-step chain")
{
    for (const auto& f : catalogue()) {
        Chain ch;
        std::vector<std::optional<WireSource>> in;
        for (std::size_t i = 0; i < f.inputs.size(); ++i)
            in.push_back(WireSource::ext("x" + std::to_string(i)));
        ch.add(f, in);
        CHECK_MESSAGE(validate_chain(ch).ok(), f.name);
    }
}

TEST_CASE("validate_chain")
{
    CHECK(validate_chain(Chain{}).ok());
    CHECK(validate_chain(expand_pattern(PatternName::DirectedStart, 0)).ok());

    Chain bad;
    bad.add(fragment("SYNC-fwd-initial"), {WireSource::ext("M_S")});
    bad.add(fragment("SYNC-fwd-incremental"), {WireSource::ext("d"), WireSource::from(0, 1)}); // Model_T into Corrs
    CHECK(validate_chain(bad).has("kind-mismatch"));

    Chain forward_ref;
    forward_ref.add(fragment("CC-initial"), {WireSource::from(1, 0), WireSource::ext("M_T")});
    forward_ref.add(fragment("SYNC-fwd-initial"), {WireSource::ext("M_S")});
    CHECK(validate_chain(forward_ref).has("wiring-not-acyclic"));

    Chain missing;
    missing.add(fragment("CC-initial"), {WireSource::ext("M_S"), std::nullopt});
    CHECK(validate_chain(missing).has("unsatisfied-input"));

    Chain arity;
    arity.add(fragment("CC-initial"), {WireSource::ext("M_S")});
    CHECK(validate_chain(arity).has("input-arity"));

    Chain slot;
    slot.add(fragment("SYNC-fwd-initial"), {WireSource::ext("M_S")});
    slot.add(fragment("SYNC-fwd-incremental"), {WireSource::ext("d"), WireSource::from(0, 5)});
    CHECK(validate_chain(slot).has("unknown-output-slot"));
}

TEST_CASE("pattern expansion")
{
    CHECK(patterns().size() == 3);
    for (std::size_t n = 0; n <= 5; ++n) {
        const Chain d = expand_pattern(PatternName::DirectedStart, n);
        const Chain c = expand_pattern(PatternName::ColdStart, n);
        const Chain g = expand_pattern(PatternName::GenerateAndCheck, n);
        CHECK(d.size() == 1 + n);
        CHECK(c.size() == 1 + n);
        CHECK(g.size() == 3 * (1 + n));
        CHECK(validate_chain(d).ok());
        CHECK(validate_chain(c).ok());
        CHECK(validate_chain(g).ok());
    }
    CHECK(expand_pattern(PatternName::DirectedStart, 0).steps[0].fragment.name == "SYNC-fwd-initial");
    const Chain cold = expand_pattern(PatternName::ColdStart, 2);
    CHECK(cold.steps[0].fragment.name == "CC-initial");
    const Chain gac = expand_pattern(PatternName::GenerateAndCheck, 0);
    CHECK(gac.steps.back().fragment.name == "CC-initial");

    const Chain mixed = expand_pattern(PatternName::DirectedStart, 2, {Direction::Fwd, Direction::Bwd});
    CHECK(mixed.steps[1].fragment.name == "SYNC-fwd-incremental");
    CHECK(mixed.steps[2].fragment.name == "SYNC-bwd-incremental");
    CHECK(validate_chain(mixed).ok());

    CHECK(parse_pattern_name("GenerateAndCheck") == PatternName::GenerateAndCheck);
    CHECK_FALSE(parse_pattern_name("Whatever"));
}

TEST_CASE("run_chain with the demo implementations")
{
    const demo::KindMap km = demo::KindMap::identity();
    const demo::Triple t = demo::demo_gen(3, 3, km);

    SUBCASE("DirectedStart n=0")
    {
        const auto impls = demo::demo_impls({km, 1, 3});
        const ChainResult r =
            run_chain(expand_pattern(PatternName::DirectedStart, 0), {{"M_S", {MS, t.src()}}}, impls);
        REQUIRE(r.trace.size() == 1);
        const auto& corr = std::any_cast<const demo::DemoCorr&>(r.outputs[0][0].payload);
        const auto& mt = std::any_cast<const demo::DemoModel&>(r.outputs[0][1].payload);
        CHECK(corr.src == t.src());
        CHECK(demo::demo_cc_initial(t.src(), mt, km).witness.empty());
    }
    SUBCASE("GenerateAndCheck n=0: reference passes, mutant fails")
    {
        for (bool mutant : {false, true}) {
            auto impls = demo::demo_impls({km, 5, 4});
            demo::bind_sut(impls, [&](const demo::DemoModel& m) {
                return mutant ? demo::mutant_transform(m, km) : demo::reference_transform(m, km);
            });
            const ChainResult r = run_chain(expand_pattern(PatternName::GenerateAndCheck, 0), {}, impls);
            REQUIRE(r.trace.back().verdict);
            CHECK(*r.trace.back().verdict == !mutant);
        }
    }
    SUBCASE("determinism")
    {
        auto impls = demo::demo_impls({km, 9, 5});
        demo::bind_sut(impls, [&](const demo::DemoModel& m) { return demo::reference_transform(m, km); });
        const Chain ch = expand_pattern(PatternName::GenerateAndCheck, 3);
        const ChainResult a = run_chain(ch, {}, impls);
        const ChainResult b = run_chain(ch, {}, impls);
        REQUIRE(a.trace.size() == b.trace.size());
        for (std::size_t i = 0; i < a.trace.size(); ++i)
            CHECK(a.trace[i].same_as(b.trace[i]));
    }
    SUBCASE("missing implementation fails before execution")
    {
        const auto impls = demo::demo_impls({km, 1, 3}); // no SUT bound
        CHECK_THROWS_AS(run_chain(expand_pattern(PatternName::GenerateAndCheck, 0), {}, impls), Error);
        CHECK_THROWS_AS(run_chain(expand_pattern(PatternName::DirectedStart, 0), {}, impls), Error);
        CHECK_THROWS_AS(
            run_chain(expand_pattern(PatternName::DirectedStart, 0), {{"M_S", {MT, t.trg()}}}, impls), Error);
    }
    SUBCASE("implementation failure carries the step and the partial trace")
    {
        auto impls = demo::demo_impls({km, 1, 3});
        demo::bind_sut(impls, [](const demo::DemoModel&) -> demo::DemoModel { throw Error("boom"); });
        try {
            run_chain(expand_pattern(PatternName::GenerateAndCheck, 0), {}, impls);
            FAIL("expected ChainError");
        } catch (const ChainError& e) {
            CHECK(e.step() == 1);
            CHECK(e.partial_trace().size() == 1);
            CHECK(e.cause() == "boom");
        }
    }
}

TEST_CASE("GenerateAndCheck verdicts come from CC, not from model equality")
{
    // With several acceptable target kinds, the generated M_T and the SUT
    // output usually differ while the case still passes.
    const demo::KindMap km = demo::KindMap::multi();
    const Chain ch = expand_pattern(PatternName::GenerateAndCheck, 1);
    std::size_t differing = 0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        auto impls = demo::demo_impls({km, seed, 5});
        demo::bind_sut(impls, [&](const demo::DemoModel& m) { return demo::reference_transform(m, km); });
        const ChainResult r = run_chain(ch, {}, impls);

        // The SUT output (step 1, slot 0) is consumed only by CC steps.
        for (std::size_t i = 0; i < ch.size(); ++i)
            for (const auto& in : ch.steps[i].inputs)
                if (in && !in->external && in->step == 1)
                    CHECK(ch.steps[i].fragment.activity == Activity::CC);
        // Only CC steps produce verdicts.
        for (const auto& rec : r.trace)
            CHECK(rec.verdict.has_value() == (rec.fragment.rfind("CC-", 0) == 0));

        const auto& gen_mt = std::any_cast<const demo::DemoModel&>(r.outputs[0][2].payload);
        const auto& sut_mt = std::any_cast<const demo::DemoModel&>(r.outputs[1][0].payload);
        differing += !(gen_mt == sut_mt);
        for (const auto& rec : r.trace)
            if (rec.verdict)
                CHECK(*rec.verdict);
    }
    CHECK(differing > 0);
}
