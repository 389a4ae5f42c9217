#include "conman/demo_bindings.hpp"

#include <cstdio>
#include <sstream>

namespace conman::demo {

DemoRelations::DemoRelations(Context context, std::shared_ptr<PayloadStore> store, KindMap km)
    : context_(std::move(context)), store_(std::move(store)), km_(std::move(km))
{
    if (!store_)
        store_ = std::make_shared<PayloadStore>();
    for (const auto& e : context_.graph->edges())
        is_merge_[context_.relation_name(e.id)] = e.src == e.trg;
}

const KindMap& DemoRelations::kind_map_for(const std::string& relation) const
{
    auto it = is_merge_.find(relation);
    return it != is_merge_.end() && it->second ? identity_ : km_;
}

CheckOutcome DemoRelations::check(const std::string& relation, const PayloadRef& src, const PayloadRef& trg) const
{
    auto s = store_->find(src);
    auto t = store_->find(trg);
    if (s == store_->end() || t == store_->end())
        return {EdgeStatus::Unknown, "unresolved payload '" + (s == store_->end() ? src : trg) + "'"};
    CheckResult r = demo_cc_initial(s->second, t->second, kind_map_for(relation));
    if (r.witness.empty())
        return {EdgeStatus::Consistent, {}};
    std::ostringstream w;
    w << "unmatched source [";
    for (std::size_t i = 0; i < r.witness.unmatched_src.size(); ++i)
        w << (i ? "," : "") << r.witness.unmatched_src[i];
    w << "], unmatched target [";
    for (std::size_t i = 0; i < r.witness.unmatched_trg.size(); ++i)
        w << (i ? "," : "") << r.witness.unmatched_trg[i];
    w << ']';
    return {EdgeStatus::Inconsistent, w.str()};
}

RelationRegistry DemoRelations::registry() const
{
    RelationRegistry reg;
    for (const auto& [relation, _] : is_merge_) {
        // Captures `this`: the registry must not outlive the relations object.
        reg.bind(relation, [this, relation](const PayloadRef& a, const PayloadRef& b) { return check(relation, a, b); });
    }
    return reg;
}

std::string store_payload(PayloadStore& store, const std::string& node, int version, const DemoModel& m)
{
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fingerprint(m)));
    std::string ref = node + "_v" + std::to_string(version) + "_" + std::string(hash, 8);
    store.emplace(ref, m);
    return ref;
}

MoveGenerator demo_sync_move(std::shared_ptr<const DemoRelations> relations, std::shared_ptr<const Schema> schema,
                             method::Direction direction)
{
    const bool forward = direction != method::Direction::Bwd;
    std::string name = forward ? "demo-sync-fwd" : "demo-sync-bwd";
    auto fn = [relations, schema, forward](const Network& n) {
        std::vector<Network> out;
        const Context& c = relations->context();
        PayloadStore& store = *relations->store();
        for (const auto& e : n.graph->edges()) {
            const std::string relation = relation_of(n, *schema, c, e.id);
            const PayloadRef* src_ref = n.payload(e.src);
            const PayloadRef* trg_ref = n.payload(e.trg);
            if (relation.empty() || src_ref == nullptr || trg_ref == nullptr)
                continue;
            if (relations->check(relation, *src_ref, *trg_ref).status != EdgeStatus::Inconsistent)
                continue;
            const Id& changed = forward ? e.trg : e.src;
            if (n.authoritative.contains(changed))
                continue;
            const KindMap& km = relations->kind_map_for(relation);
            const DemoModel& driver = store.at(forward ? *src_ref : *trg_ref);
            const DemoModel& old = store.at(forward ? *trg_ref : *src_ref);
            DemoModel produced = forward ? demo_sync_fwd_initial(driver, km, old.domain()).produced
                                         : demo_sync_bwd_initial(driver, km, old.domain()).produced;
            Network next = n;
            const int version = n.version(changed) + 1;
            next.versions[changed] = version;
            next.payloads[changed] = store_payload(store, changed, version, produced);
            out.push_back(std::move(next));
        }
        return out;
    };
    return {std::move(name), std::move(fn)};
}

std::vector<MoveGenerator> demo_moves(const std::string& spec, std::shared_ptr<const DemoRelations> relations,
                                      std::shared_ptr<const Schema> schema)
{
    std::vector<MoveGenerator> out;
    std::stringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item == "demo-sync") {
            out.push_back(demo_sync_move(relations, schema, method::Direction::Fwd));
            out.push_back(demo_sync_move(relations, schema, method::Direction::Bwd));
        } else if (item == "demo-sync-fwd") {
            out.push_back(demo_sync_move(relations, schema, method::Direction::Fwd));
        } else if (item == "demo-sync-bwd") {
            out.push_back(demo_sync_move(relations, schema, method::Direction::Bwd));
        } else {
            throw Error("unknown move generator '" + item + "'");
        }
    }
    if (out.empty())
        throw Error("no move generators given");
    return out;
}

namespace {

template <class T>
const T& as(const std::any& a, const char* what)
{
    const T* p = std::any_cast<T>(&a);
    if (p == nullptr)
        throw Error(std::string("demo implementation expects a ") + what + " payload");
    return *p;
}

std::string witness_note(const Witness& w)
{
    std::ostringstream out;
    out << "witness src=[";
    for (std::size_t i = 0; i < w.unmatched_src.size(); ++i)
        out << (i ? "," : "") << w.unmatched_src[i];
    out << "] trg=[";
    for (std::size_t i = 0; i < w.unmatched_trg.size(); ++i)
        out << (i ? "," : "") << w.unmatched_trg[i];
    out << ']';
    return out.str();
}

std::string describe_payload(const method::ArtefactKind& k, const std::any& payload)
{
    if (const auto* m = std::any_cast<DemoModel>(&payload))
        return describe(*m);
    if (const auto* c = std::any_cast<DemoCorr>(&payload))
        return "Corrs{" + std::to_string(c->links.size()) + " links, " + std::to_string(c->src.size()) + "/" +
               std::to_string(c->trg.size()) + " elements}";
    if (const auto* d = std::any_cast<DemoDelta>(&payload)) {
        std::string out = "Delta[" + k.domain + "]{";
        for (std::size_t i = 0; i < d->ops.size(); ++i)
            out += (i ? "," : "") + to_string(d->ops[i]);
        return out + "}";
    }
    return k.to_string();
}

} // namespace

method::ImplRegistry demo_impls(const DemoImplOptions& o)
{
    namespace n = method::names;
    using Inputs = std::vector<std::any>;
    using Ctx = method::StepContext;
    method::ImplRegistry r;
    r.set_describer(describe_payload);
    const KindMap km = o.km;

    r.bind(n::kGenInitial, [o](const Inputs&, Ctx&) -> Inputs {
        Triple t = demo_gen(o.seed, o.size, o.km);
        return {t.corr.src, t.corr, t.corr.trg};
    });
    r.bind(n::kGenIncremental, [o](const Inputs& in, Ctx& ctx) -> Inputs {
        const auto& corr = as<DemoCorr>(in[1], "Corrs");
        GenIncrementResult g = demo_gen_incr(o.seed * 1000003ULL + ctx.index, corr, o.km);
        return {g.delta_s, g.corr, g.delta_t};
    });
    r.bind(n::kCcInitial, [km](const Inputs& in, Ctx& ctx) -> Inputs {
        CheckResult c = demo_cc_initial(as<DemoModel>(in[0], "Model"), as<DemoModel>(in[1], "Model"), km);
        ctx.verdict = c.witness.empty();
        ctx.notes.push_back(witness_note(c.witness));
        return {c.corr};
    });
    r.bind(n::kCcIncremental, [km](const Inputs& in, Ctx& ctx) -> Inputs {
        CheckResult c = demo_cc_incremental(as<DemoCorr>(in[0], "Corrs"), as<DemoDelta>(in[1], "Delta"),
                                            as<DemoDelta>(in[2], "Delta"), km);
        ctx.verdict = c.witness.empty();
        ctx.notes.push_back(witness_note(c.witness));
        return {c.corr};
    });
    r.bind(n::kSyncFwdInitial, [km](const Inputs& in, Ctx&) -> Inputs {
        SyncInitialResult s = demo_sync_fwd_initial(as<DemoModel>(in[0], "Model"), km);
        return {s.corr, s.produced};
    });
    r.bind(n::kSyncBwdInitial, [km](const Inputs& in, Ctx&) -> Inputs {
        SyncInitialResult s = demo_sync_bwd_initial(as<DemoModel>(in[0], "Model"), km);
        return {s.corr, s.produced};
    });
    r.bind(n::kSyncFwdIncremental, [km](const Inputs& in, Ctx& ctx) -> Inputs {
        SyncIncrementalResult s = demo_sync_fwd_incr(as<DemoDelta>(in[0], "Delta"), as<DemoCorr>(in[1], "Corrs"), km);
        ctx.notes.insert(ctx.notes.end(), s.warnings.begin(), s.warnings.end());
        return {s.corr, s.delta};
    });
    r.bind(n::kSyncBwdIncremental, [km](const Inputs& in, Ctx& ctx) -> Inputs {
        SyncIncrementalResult s = demo_sync_bwd_incr(as<DemoDelta>(in[0], "Delta"), as<DemoCorr>(in[1], "Corrs"), km);
        ctx.notes.insert(ctx.notes.end(), s.warnings.begin(), s.warnings.end());
        return {s.corr, s.delta};
    });
    r.bind(n::kInt, [o](const Inputs& in, Ctx& ctx) -> Inputs {
        IntResult i = demo_int(as<DemoCorr>(in[0], "Corrs"), as<DemoDelta>(in[1], "Delta"),
                               as<DemoDelta>(in[2], "Delta"), o.policy, o.km, o.authority);
        for (const auto& c : i.conflicts)
            ctx.notes.push_back("conflict " + c.element + (c.key.empty() ? "" : "." + c.key) + ": " + c.detail);
        ctx.verdict = demo_consistent(i.corr.src, i.corr.trg, o.km);
        return {i.corr, i.delta_s, i.delta_t};
    });
    return r;
}

void bind_sut(method::ImplRegistry& impls, std::function<DemoModel(const DemoModel&)> transform)
{
    using Inputs = std::vector<std::any>;
    impls.bind(method::names::kSut, [transform](const Inputs& in, method::StepContext&) -> Inputs {
        return {transform(as<DemoModel>(in[0], "Model"))};
    });
    impls.bind(method::names::kSutIncremental, [transform](const Inputs& in, method::StepContext&) -> Inputs {
        const auto& delta = as<DemoDelta>(in[0], "Delta");
        const auto& corr = as<DemoCorr>(in[1], "Corrs");
        DemoModel produced = transform(apply_delta(corr.src, delta));
        return {diff_models(corr.trg, produced)};
    });
}

DemoModel reference_transform(const DemoModel& ms, const KindMap& km)
{
    return demo_sync_fwd_initial(ms, km).produced;
}

DemoModel mutant_transform(const DemoModel& ms, const KindMap& km)
{
    DemoModel out = reference_transform(ms, km);
    auto names = out.names();
    if (!names.empty())
        out.remove(names.back());
    return out;
}

} // namespace conman::demo
