#include "conman/demo.hpp"

namespace conman::demo {

std::optional<IntPolicy> parse_policy(const std::string& s)
{
    if (s == "source-wins")
        return IntPolicy::SourceWins;
    if (s == "target-wins")
        return IntPolicy::TargetWins;
    if (s == "authoritative-wins")
        return IntPolicy::AuthoritativeWins;
    return std::nullopt;
}

namespace {

using Attr = std::optional<std::string>;

Attr attr(const Element* e, const std::string& key)
{
    if (e == nullptr)
        return std::nullopt;
    auto it = e->attrs.find(key);
    if (it == e->attrs.end())
        return std::nullopt;
    return it->second;
}

bool same(const Element* a, const Element* b)
{
    if (a == nullptr || b == nullptr)
        return a == b;
    return *a == *b;
}

// Mirror of `from` on the other side. Keeps the previous element's kind when
// still acceptable, and its private attributes.
Element translate(const Element& from, const Element* previous, const KindMap& km, bool forward)
{
    Element out{from.name, from.kind, {}};
    if (forward) {
        out.kind = previous != nullptr && km.accepts(from.kind, previous->kind) ? previous->kind : km.primary(from.kind);
    } else if (previous != nullptr && km.accepts(previous->kind, from.kind)) {
        out.kind = previous->kind;
    } else {
        auto k = km.source_of(from.kind);
        if (!k)
            throw Error("untranslatable kind " + to_string(from.kind) + " of '" + from.name + "'");
        out.kind = *k;
    }
    if (previous == nullptr) {
        out.attrs = from.attrs;
    } else {
        out.attrs = from.shared_attrs();
        for (const auto& [k, v] : previous->attrs)
            if (is_private_attr(k))
                out.attrs[k] = v;
    }
    return out;
}

void put(DemoModel& m, const std::string& name, const std::optional<Element>& e)
{
    m.remove(name);
    if (e)
        m.add(*e);
}

} // namespace

IntResult demo_int(const DemoCorr& corr, const DemoDelta& delta_s, const DemoDelta& delta_t, IntPolicy policy,
                   const KindMap& km, std::optional<Side> authority)
{
    if (policy == IntPolicy::AuthoritativeWins && !authority)
        throw Error("no authority");
    const Side winner = policy == IntPolicy::SourceWins   ? Side::Source
                        : policy == IntPolicy::TargetWins ? Side::Target
                                                          : *authority;

    const DemoModel& s0 = corr.src;
    const DemoModel& t0 = corr.trg;
    const DemoModel s1 = apply_delta(s0, delta_s);
    const DemoModel t1 = apply_delta(t0, delta_t);
    DemoModel s2 = s1;
    DemoModel t2 = t1;
    IntResult result;

    std::set<std::string> names;
    for (const DemoModel* m : {&s0, &t0, &s1, &t1})
        for (const auto& n : m->names())
            names.insert(n);

    auto to_target = [&](const Element* s, const Element* t_prev) -> std::optional<Element> {
        if (s == nullptr)
            return std::nullopt;
        return translate(*s, t_prev, km, true);
    };
    auto to_source = [&](const Element* t, const Element* s_prev) -> std::optional<Element> {
        if (t == nullptr)
            return std::nullopt;
        return translate(*t, s_prev, km, false);
    };

    for (const auto& n : names) {
        const Element* es0 = s0.find(n);
        const Element* et0 = t0.find(n);
        const Element* es1 = s1.find(n);
        const Element* et1 = t1.find(n);
        const bool changed_s = !same(es0, es1);
        const bool changed_t = !same(et0, et1);
        if (!changed_s && !changed_t)
            continue;

        if (changed_s && !changed_t) {
            put(t2, n, to_target(es1, et1));
            continue;
        }
        if (changed_t && !changed_s) {
            put(s2, n, to_source(et1, es1));
            continue;
        }

        const bool attr_level = es0 && et0 && es1 && et1 && es0->kind == es1->kind && et0->kind == et1->kind;
        if (attr_level) {
            Element ms = *es1;
            Element mt = *et1;
            std::set<std::string> keys;
            for (const Element* e : {es0, et0, es1, et1})
                for (const auto& [k, _] : e->attrs)
                    keys.insert(k);
            for (const auto& k : keys) {
                const Attr vs0 = attr(es0, k), vs1 = attr(es1, k), vt0 = attr(et0, k), vt1 = attr(et1, k);
                const bool cs = vs0 != vs1;
                const bool ct = vt0 != vt1;
                Attr merged;
                if (cs && !ct) {
                    merged = vs1;
                } else if (ct && !cs) {
                    merged = vt1;
                } else if (cs && ct) {
                    merged = vs1;
                    if (vs1 != vt1) {
                        result.conflicts.push_back({n, k, "source set '" + vs1.value_or("<none>") +
                                                              "', target set '" + vt1.value_or("<none>") + "'"});
                        merged = winner == Side::Source ? vs1 : vt1;
                    }
                } else {
                    continue;
                }
                if (merged) {
                    ms.attrs[k] = *merged;
                    mt.attrs[k] = *merged;
                } else {
                    ms.attrs.erase(k);
                    mt.attrs.erase(k);
                }
            }
            if (!elements_correspond(ms, mt, km)) {
                // Kinds diverged on both sides while attributes merged.
                result.conflicts.push_back({n, {}, "kinds do not correspond"});
                if (winner == Side::Source)
                    mt = translate(ms, &mt, km, true);
                else
                    ms = translate(mt, &ms, km, false);
            }
            put(s2, n, ms);
            put(t2, n, mt);
            continue;
        }

        if (es1 == nullptr && et1 == nullptr)
            continue;
        if (es1 != nullptr && et1 != nullptr && elements_correspond(*es1, *et1, km))
            continue;
        result.conflicts.push_back({n, {}, std::string("concurrent ") + (es1 ? "change" : "removal") +
                                               " vs " + (et1 ? "change" : "removal")});
        if (winner == Side::Source)
            put(t2, n, to_target(es1, et1));
        else
            put(s2, n, to_source(et1, es1));
    }

    result.delta_s = delta_s;
    for (auto& op : diff_models(s1, s2).ops)
        result.delta_s.ops.push_back(std::move(op));
    result.delta_t = delta_t;
    for (auto& op : diff_models(t1, t2).ops)
        result.delta_t.ops.push_back(std::move(op));
    result.corr = demo_cc_initial(s2, t2, km).corr;
    return result;
}

} // namespace conman::demo
