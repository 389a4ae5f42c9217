#include "conman/demo.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace conman::demo {

std::string to_string(Kind k) { return "K" + std::to_string(static_cast<int>(k) + 1); }

std::optional<Kind> parse_kind(std::string_view s)
{
    if (s.size() != 2 || s[0] != 'K' || s[1] < '1' || s[1] > '0' + static_cast<int>(kKindCount))
        return std::nullopt;
    return kind_at(static_cast<std::size_t>(s[1] - '1'));
}

Kind kind_at(std::size_t i)
{
    if (i >= kKindCount)
        throw Error("kind index out of range");
    return static_cast<Kind>(i);
}

bool is_private_attr(const std::string& key) { return !key.empty() && key.front() == '_'; }

std::map<std::string, std::string> Element::shared_attrs() const
{
    std::map<std::string, std::string> out;
    for (const auto& [k, v] : attrs)
        if (!is_private_attr(k))
            out.emplace(k, v);
    return out;
}

void DemoModel::add(Element e)
{
    const std::string name = e.name;
    if (!elements_.emplace(name, std::move(e)).second)
        throw Error("duplicate element '" + name + "'");
}

bool DemoModel::remove(const std::string& name) { return elements_.erase(name) > 0; }

const Element* DemoModel::find(const std::string& name) const
{
    auto it = elements_.find(name);
    return it == elements_.end() ? nullptr : &it->second;
}

Element* DemoModel::find_mut(const std::string& name)
{
    auto it = elements_.find(name);
    return it == elements_.end() ? nullptr : &it->second;
}

std::vector<Element> DemoModel::elements() const
{
    std::vector<Element> out;
    out.reserve(elements_.size());
    for (const auto& [_, e] : elements_)
        out.push_back(e);
    return out;
}

std::vector<std::string> DemoModel::names() const
{
    std::vector<std::string> out;
    out.reserve(elements_.size());
    for (const auto& [n, _] : elements_)
        out.push_back(n);
    return out;
}

KindMap::KindMap(Table table, std::string name) : table_(std::move(table)), name_(std::move(name))
{
    for (std::size_t i = 0; i < kKindCount; ++i)
        if (table_[i].empty())
            throw Error("kind map '" + name_ + "' is not total: " + to_string(kind_at(i)) + " has no target");
}

KindMap KindMap::identity()
{
    Table t;
    for (std::size_t i = 0; i < kKindCount; ++i)
        t[i] = {kind_at(i)};
    return KindMap(std::move(t), "identity");
}

KindMap KindMap::shift()
{
    Table t;
    for (std::size_t i = 0; i < kKindCount; ++i)
        t[i] = {kind_at((i + 1) % kKindCount)};
    return KindMap(std::move(t), "shift");
}

KindMap KindMap::multi()
{
    Table t;
    for (std::size_t i = 0; i < kKindCount; ++i)
        t[i] = {kind_at(i), kind_at((i + 1) % kKindCount)};
    return KindMap(std::move(t), "multi");
}

KindMap KindMap::named(const std::string& name)
{
    if (name == "identity")
        return identity();
    if (name == "shift")
        return shift();
    if (name == "multi")
        return multi();
    throw Error("unknown kind map '" + name + "' (expected identity, shift or multi)");
}

bool KindMap::accepts(Kind src, Kind trg) const
{
    const auto& ts = table_[static_cast<std::size_t>(src)];
    return std::find(ts.begin(), ts.end(), trg) != ts.end();
}

Kind KindMap::primary(Kind src) const { return table_[static_cast<std::size_t>(src)].front(); }

std::span<const Kind> KindMap::targets(Kind src) const { return table_[static_cast<std::size_t>(src)]; }

std::optional<Kind> KindMap::source_of(Kind trg) const
{
    for (std::size_t i = 0; i < kKindCount; ++i)
        if (table_[i].front() == trg)
            return kind_at(i);
    for (std::size_t i = 0; i < kKindCount; ++i)
        if (accepts(kind_at(i), trg))
            return kind_at(i);
    return std::nullopt;
}

bool KindMap::deterministic() const
{
    return std::all_of(table_.begin(), table_.end(), [](const auto& ts) { return ts.size() == 1; });
}

bool KindMap::injective() const
{
    std::set<Kind> seen;
    for (const auto& ts : table_)
        for (Kind k : ts)
            if (!seen.insert(k).second)
                return false;
    return true;
}

KindMap KindMap::inverse() const
{
    if (!deterministic() || !injective())
        throw Error("kind map '" + name_ + "' is not invertible");
    Table t;
    for (std::size_t i = 0; i < kKindCount; ++i)
        t[static_cast<std::size_t>(table_[i].front())] = {kind_at(i)};
    return KindMap(std::move(t), name_ + "^-1");
}

std::optional<std::string> DemoCorr::target_of(const std::string& src_name) const
{
    for (const auto& [s, t] : links)
        if (s == src_name)
            return t;
    return std::nullopt;
}

std::optional<std::string> DemoCorr::source_of(const std::string& trg_name) const
{
    for (const auto& [s, t] : links)
        if (t == trg_name)
            return s;
    return std::nullopt;
}

std::vector<std::string> corr_problems(const DemoCorr& c)
{
    std::vector<std::string> out;
    std::set<std::string> srcs, trgs;
    for (const auto& [s, t] : c.links) {
        if (!c.src.contains(s))
            out.push_back("link source '" + s + "' missing");
        if (!c.trg.contains(t))
            out.push_back("link target '" + t + "' missing");
        if (!srcs.insert(s).second)
            out.push_back("source '" + s + "' linked twice");
        if (!trgs.insert(t).second)
            out.push_back("target '" + t + "' linked twice");
    }
    return out;
}

std::string to_string(const DeltaOp& op)
{
    return std::visit(
        [](const auto& o) -> std::string {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, AddOp>)
                return "add(" + o.element.name + ":" + to_string(o.element.kind) + ")";
            else if constexpr (std::is_same_v<T, RemoveOp>)
                return "remove(" + o.name + ")";
            else
                return "set(" + o.name + "." + o.key + "=" + o.value + ")";
        },
        op);
}

namespace {

[[noreturn]] void inapplicable(const std::string& why) { throw Error("inapplicable delta: " + why); }

void apply_op(DemoModel& m, const DeltaOp& op)
{
    if (const auto* add = std::get_if<AddOp>(&op)) {
        if (m.contains(add->element.name))
            inapplicable("'" + add->element.name + "' already exists");
        m.add(add->element);
    } else if (const auto* rm = std::get_if<RemoveOp>(&op)) {
        if (!m.remove(rm->name))
            inapplicable("'" + rm->name + "' does not exist");
    } else {
        const auto& set = std::get<SetAttrOp>(op);
        Element* e = m.find_mut(set.name);
        if (e == nullptr)
            inapplicable("'" + set.name + "' does not exist");
        e->attrs[set.key] = set.value;
    }
}

const std::string& op_name(const DeltaOp& op)
{
    return std::visit(
        [](const auto& o) -> const std::string& {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, AddOp>)
                return o.element.name;
            else
                return o.name;
        },
        op);
}

} // namespace

DemoModel apply_delta(const DemoModel& base, const DemoDelta& delta)
{
    DemoModel m = base;
    for (const auto& op : delta.ops)
        apply_op(m, op);
    return m;
}

DemoDelta diff_models(const DemoModel& from, const DemoModel& to)
{
    DemoDelta d;
    std::vector<DeltaOp> adds, sets;
    for (const auto& e : from.elements()) {
        const Element* other = to.find(e.name);
        bool replace = other == nullptr || other->kind != e.kind;
        if (!replace)
            for (const auto& [k, _] : e.attrs)
                replace = replace || !other->attrs.contains(k);
        if (replace) {
            d.ops.push_back(RemoveOp{e.name});
            if (other != nullptr)
                adds.push_back(AddOp{*other});
            continue;
        }
        for (const auto& [k, v] : other->attrs) {
            auto it = e.attrs.find(k);
            if (it == e.attrs.end() || it->second != v)
                sets.push_back(SetAttrOp{e.name, k, v});
        }
    }
    for (const auto& e : to.elements())
        if (!from.contains(e.name))
            adds.push_back(AddOp{e});
    d.ops.insert(d.ops.end(), adds.begin(), adds.end());
    d.ops.insert(d.ops.end(), sets.begin(), sets.end());
    return d;
}

bool elements_correspond(const Element& s, const Element& t, const KindMap& km)
{
    return s.name == t.name && km.accepts(s.kind, t.kind) && s.shared_attrs() == t.shared_attrs();
}

bool demo_consistent(const DemoModel& ms, const DemoModel& mt, const KindMap& km)
{
    if (ms.size() != mt.size())
        return false;
    for (const auto& s : ms.elements()) {
        const Element* t = mt.find(s.name);
        if (t == nullptr || !elements_correspond(s, *t, km))
            return false;
    }
    return true;
}

namespace {

Witness witness_for(const DemoCorr& c)
{
    Witness w;
    for (const auto& n : c.src.names())
        if (!c.target_of(n))
            w.unmatched_src.push_back(n);
    for (const auto& n : c.trg.names())
        if (!c.source_of(n))
            w.unmatched_trg.push_back(n);
    return w;
}

} // namespace

CheckResult demo_cc_initial(const DemoModel& ms, const DemoModel& mt, const KindMap& km)
{
    CheckResult r{DemoCorr{ms, mt, {}}, {}};
    for (const auto& s : ms.elements()) {
        const Element* t = mt.find(s.name);
        if (t != nullptr && elements_correspond(s, *t, km))
            r.corr.links.emplace(s.name, t->name);
    }
    r.witness = witness_for(r.corr);
    return r;
}

CheckResult demo_cc_incremental(const DemoCorr& corr, const DemoDelta& delta_s, const DemoDelta& delta_t,
                                const KindMap& km)
{
    DemoCorr next{apply_delta(corr.src, delta_s), apply_delta(corr.trg, delta_t), {}};
    std::set<std::string> touched_s, touched_t;
    for (const auto& op : delta_s.ops)
        touched_s.insert(op_name(op));
    for (const auto& op : delta_t.ops)
        touched_t.insert(op_name(op));

    for (const auto& [s, t] : corr.links)
        if (!touched_s.contains(s) && !touched_t.contains(t))
            next.links.emplace(s, t);

    std::set<std::string> candidates = touched_s;
    candidates.insert(touched_t.begin(), touched_t.end());
    for (const auto& n : candidates) {
        const Element* s = next.src.find(n);
        const Element* t = next.trg.find(n);
        if (s != nullptr && t != nullptr && !next.target_of(n) && !next.source_of(n) &&
            elements_correspond(*s, *t, km))
            next.links.emplace(n, n);
    }
    CheckResult r{std::move(next), {}};
    r.witness = witness_for(r.corr);
    return r;
}

SyncInitialResult demo_sync_fwd_initial(const DemoModel& ms, const KindMap& km, const std::string& target_domain)
{
    SyncInitialResult r{DemoCorr{ms, DemoModel(target_domain), {}}, DemoModel(target_domain)};
    for (const auto& e : ms.elements()) {
        r.produced.add(Element{e.name, km.primary(e.kind), e.attrs});
        r.corr.links.emplace(e.name, e.name);
    }
    r.corr.trg = r.produced;
    return r;
}

SyncInitialResult demo_sync_bwd_initial(const DemoModel& mt, const KindMap& km, const std::string& source_domain)
{
    SyncInitialResult r{DemoCorr{DemoModel(source_domain), mt, {}}, DemoModel(source_domain)};
    for (const auto& e : mt.elements()) {
        auto k = km.source_of(e.kind);
        if (!k)
            throw Error("untranslatable kind " + to_string(e.kind) + " of '" + e.name + "'");
        r.produced.add(Element{e.name, *k, e.attrs});
        r.corr.links.emplace(e.name, e.name);
    }
    r.corr.src = r.produced;
    return r;
}

namespace {

SyncIncrementalResult sync_incremental(const DemoDelta& delta, const DemoCorr& corr, const KindMap& km, bool forward)
{
    DemoModel from = forward ? corr.src : corr.trg;
    DemoModel to = forward ? corr.trg : corr.src;
    DemoCorr links_only{{}, {}, corr.links};
    SyncIncrementalResult r;

    auto linked = [&](const std::string& name) {
        return forward ? links_only.target_of(name) : links_only.source_of(name);
    };
    auto link = [&](const std::string& a, const std::string& b) {
        links_only.links.emplace(forward ? Link{a, b} : Link{b, a});
    };
    auto unlink = [&](const std::string& a, const std::string& b) {
        links_only.links.erase(forward ? Link{a, b} : Link{b, a});
    };

    for (const auto& op : delta.ops) {
        if (const auto* add = std::get_if<AddOp>(&op)) {
            apply_op(from, op);
            Element mapped = add->element;
            if (forward) {
                mapped.kind = km.primary(add->element.kind);
            } else {
                auto k = km.source_of(add->element.kind);
                if (!k)
                    throw Error("untranslatable kind " + to_string(add->element.kind) + " of '" + mapped.name + "'");
                mapped.kind = *k;
            }
            if (to.contains(mapped.name))
                inapplicable("'" + mapped.name + "' already exists on the other side");
            to.add(mapped);
            link(add->element.name, mapped.name);
            r.delta.ops.push_back(AddOp{mapped});
        } else if (const auto* rm = std::get_if<RemoveOp>(&op)) {
            apply_op(from, op);
            if (auto other = linked(rm->name)) {
                to.remove(*other);
                unlink(rm->name, *other);
                r.delta.ops.push_back(RemoveOp{*other});
            } else {
                r.warnings.push_back("removal of unlinked element '" + rm->name + "' not propagated");
            }
        } else {
            const auto& set = std::get<SetAttrOp>(op);
            apply_op(from, op);
            if (auto other = linked(set.name)) {
                SetAttrOp translated{*other, set.key, set.value};
                apply_op(to, translated);
                r.delta.ops.push_back(translated);
            } else {
                r.warnings.push_back("change of unlinked element '" + set.name + "' not propagated");
            }
        }
    }

    r.corr = forward ? DemoCorr{std::move(from), std::move(to), std::move(links_only.links)}
                     : DemoCorr{std::move(to), std::move(from), std::move(links_only.links)};
    return r;
}

} // namespace

SyncIncrementalResult demo_sync_fwd_incr(const DemoDelta& delta_s, const DemoCorr& corr, const KindMap& km)
{
    return sync_incremental(delta_s, corr, km, true);
}

SyncIncrementalResult demo_sync_bwd_incr(const DemoDelta& delta_t, const DemoCorr& corr, const KindMap& km)
{
    return sync_incremental(delta_t, corr, km, false);
}

namespace {

// Raw engine output only: std distributions are not portable across
// standard library implementations, the mt19937_64 sequence is.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(engine_() % n); }

private:
    std::mt19937_64 engine_;
};

const std::array<const char*, 3> kAttrKeys = {"len", "mat", "_note"};
const std::array<const char*, 4> kAttrValues = {"a", "b", "c", "d"};

Element random_element(Rng& rng, std::string name)
{
    Element e{std::move(name), kind_at(rng.below(kKindCount)), {}};
    const std::size_t n_attrs = rng.below(3);
    for (std::size_t i = 0; i < n_attrs; ++i)
        e.attrs[kAttrKeys[rng.below(kAttrKeys.size())]] = kAttrValues[rng.below(kAttrValues.size())];
    return e;
}

} // namespace

Triple demo_gen(std::uint64_t seed, std::size_t size, const KindMap& km)
{
    Rng rng(seed);
    Triple t{DemoCorr{DemoModel("S"), DemoModel("T"), {}}};
    for (std::size_t i = 0; i < size; ++i) {
        Element s = random_element(rng, "e" + std::to_string(i));
        auto targets = km.targets(s.kind);
        Element mapped{s.name, targets[rng.below(targets.size())], s.attrs};
        t.corr.src.add(std::move(s));
        t.corr.trg.add(std::move(mapped));
        t.corr.links.emplace("e" + std::to_string(i), "e" + std::to_string(i));
    }
    return t;
}

DemoDelta random_delta(std::uint64_t seed, const DemoModel& model)
{
    Rng rng(seed ^ 0xD1B54A32D192ED03ULL);
    DemoModel current = model;
    DemoDelta d;
    const std::size_t n_ops = 1 + rng.below(3);
    for (std::size_t j = 0; j < n_ops; ++j) {
        const std::size_t choice = current.empty() ? 0 : rng.below(3);
        if (choice == 0) {
            std::string name = "n" + std::to_string(seed % 100000) + "_" + std::to_string(j);
            while (current.contains(name))
                name += "x";
            d.ops.push_back(AddOp{random_element(rng, name)});
        } else {
            auto names = current.names();
            const std::string& victim = names[rng.below(names.size())];
            if (choice == 1)
                d.ops.push_back(RemoveOp{victim});
            else
                d.ops.push_back(SetAttrOp{victim, kAttrKeys[rng.below(kAttrKeys.size())],
                                          kAttrValues[rng.below(kAttrValues.size())]});
        }
        apply_op(current, d.ops.back());
    }
    return d;
}

GenIncrementResult demo_gen_incr(std::uint64_t seed, const DemoCorr& triple, const KindMap& km)
{
    DemoDelta ds = random_delta(seed, triple.src);
    SyncIncrementalResult r = demo_sync_fwd_incr(ds, triple, km);
    return {std::move(ds), std::move(r.corr), std::move(r.delta)};
}

std::uint64_t fingerprint(const DemoModel& m)
{
    std::ostringstream canon;
    canon << m.domain() << '|';
    for (const auto& e : m.elements()) {
        canon << e.name << ':' << to_string(e.kind) << '{';
        for (const auto& [k, v] : e.attrs)
            canon << k << '=' << v << ',';
        canon << "};";
    }
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canon.str()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string describe(const DemoModel& m)
{
    std::ostringstream out;
    out << "Model[" << m.domain() << "]{";
    bool first = true;
    for (const auto& e : m.elements()) {
        out << (first ? "" : ",") << e.name << ':' << to_string(e.kind);
        first = false;
    }
    out << '}';
    return out.str();
}

} // namespace conman::demo
