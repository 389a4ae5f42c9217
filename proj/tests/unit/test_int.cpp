#include "conman/demo.hpp"

#include "../support/oracles.hpp"

#include <doctest.h>

using namespace conman;
using namespace conman::demo;

namespace {

DemoCorr start()
{
    DemoModel ms("S");
    ms.add({"a", Kind::K1, {{"len", "1"}}});
    ms.add({"b", Kind::K2, {{"len", "2"}}});
    ms.add({"c", Kind::K3, {}});
    return demo_sync_fwd_initial(ms, KindMap::identity()).corr;
}

} // namespace

TEST_CASE("INT: disjoint deltas are applied verbatim")
{
    const KindMap km = KindMap::identity();
    const DemoDelta ds{{SetAttrOp{"a", "len", "10"}}};
    const DemoDelta dt{{AddOp{{"d", Kind::K4, {}}}}};
    const IntResult r = demo_int(start(), ds, dt, IntPolicy::SourceWins, km);
    CHECK(r.conflicts.empty());
    CHECK(r.corr.src.find("a")->attrs.at("len") == "10");
    CHECK(r.corr.trg.find("a")->attrs.at("len") == "10");
    CHECK(r.corr.src.contains("d"));
    CHECK(std::vector<DeltaOp>(r.delta_s.ops.begin(), r.delta_s.ops.begin() + 1) == ds.ops);
    CHECK(std::vector<DeltaOp>(r.delta_t.ops.begin(), r.delta_t.ops.begin() + 1) == dt.ops);
    CHECK(apply_delta(start().src, r.delta_s) == r.corr.src);
    CHECK(apply_delta(start().trg, r.delta_t) == r.corr.trg);
    CHECK(oracle::bijection_exists(r.corr.src, r.corr.trg, "identity"));
}

TEST_CASE("INT: conflicting attribute under each policy")
{
    const KindMap km = KindMap::identity();
    const DemoDelta ds{{SetAttrOp{"b", "len", "S"}}};
    const DemoDelta dt{{SetAttrOp{"b", "len", "T"}}};

    const IntResult s = demo_int(start(), ds, dt, IntPolicy::SourceWins, km);
    REQUIRE(s.conflicts.size() == 1);
    CHECK(s.conflicts[0].element == "b");
    CHECK(s.conflicts[0].key == "len");
    CHECK(s.corr.trg.find("b")->attrs.at("len") == "S");

    const IntResult t = demo_int(start(), ds, dt, IntPolicy::TargetWins, km);
    CHECK(t.corr.src.find("b")->attrs.at("len") == "T");

    const IntResult a = demo_int(start(), ds, dt, IntPolicy::AuthoritativeWins, km, Side::Target);
    CHECK(a.corr.src.find("b")->attrs.at("len") == "T");
    CHECK_THROWS_WITH_AS(demo_int(start(), ds, dt, IntPolicy::AuthoritativeWins, km), "no authority", Error);

    for (const IntResult* r : {&s, &t, &a})
        CHECK(demo_consistent(r->corr.src, r->corr.trg, km));
}

TEST_CASE("INT: both sides remove the same linked pair")
{
    const KindMap km = KindMap::identity();
    const IntResult r = demo_int(start(), DemoDelta{{RemoveOp{"c"}}}, DemoDelta{{RemoveOp{"c"}}},
                                 IntPolicy::SourceWins, km);
    CHECK(r.conflicts.empty());
    CHECK_FALSE(r.corr.src.contains("c"));
    CHECK_FALSE(r.corr.trg.contains("c"));
    CHECK_FALSE(r.corr.links.contains({"c", "c"}));
}

TEST_CASE("INT: remove against change is a conflict")
{
    const KindMap km = KindMap::identity();
    const IntResult keep = demo_int(start(), DemoDelta{{SetAttrOp{"a", "len", "5"}}}, DemoDelta{{RemoveOp{"a"}}},
                                    IntPolicy::SourceWins, km);
    CHECK(keep.conflicts.size() == 1);
    CHECK(keep.corr.trg.contains("a"));
    const IntResult drop = demo_int(start(), DemoDelta{{SetAttrOp{"a", "len", "5"}}}, DemoDelta{{RemoveOp{"a"}}},
                                    IntPolicy::TargetWins, km);
    CHECK_FALSE(drop.corr.src.contains("a"));
    CHECK(demo_consistent(drop.corr.src, drop.corr.trg, km));
}

TEST_CASE("INT: random concurrent deltas always end consistent")
{
    for (const char* map : {"identity", "shift", "multi"}) {
        const KindMap km = KindMap::named(map);
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            const Triple t = demo_gen(seed, 5, km);
            const DemoDelta ds = random_delta(seed * 3, t.src());
            const DemoDelta dt = random_delta(seed * 5, t.trg());
            for (auto policy : {IntPolicy::SourceWins, IntPolicy::TargetWins}) {
                const IntResult r = demo_int(t.corr, ds, dt, policy, km);
                CHECK(oracle::bijection_exists(r.corr.src, r.corr.trg, map));
                CHECK(apply_delta(t.src(), r.delta_s) == r.corr.src);
                CHECK(apply_delta(t.trg(), r.delta_t) == r.corr.trg);
            }
        }
    }
}
