#include "conman/method.hpp"

#include <set>

namespace conman::method {

const char* to_string(ArtefactType t)
{
    switch (t) {
    case ArtefactType::Model: return "Model";
    case ArtefactType::Corrs: return "Corrs";
    case ArtefactType::Delta: return "Delta";
    }
    return "?";
}

ArtefactKind ArtefactKind::model(std::string domain, bool empty_allowed)
{
    return {ArtefactType::Model, std::move(domain), {}, {}, empty_allowed};
}

ArtefactKind ArtefactKind::corrs(std::string src, std::string trg)
{
    return {ArtefactType::Corrs, {}, std::move(src), std::move(trg), true};
}

ArtefactKind ArtefactKind::delta(std::string domain)
{
    return {ArtefactType::Delta, domain, domain, domain, true};
}

std::string ArtefactKind::to_string() const
{
    switch (type) {
    case ArtefactType::Model: return "Model_" + domain;
    case ArtefactType::Corrs: return "Corrs_{" + src + "," + trg + "}";
    case ArtefactType::Delta: return "Delta_" + domain;
    }
    return "?";
}

bool operator==(const ArtefactKind& a, const ArtefactKind& b)
{
    return a.type == b.type && a.domain == b.domain && a.src == b.src && a.trg == b.trg;
}

ValidationReport validate_kind(const ArtefactKind& k)
{
    ValidationReport r;
    switch (k.type) {
    case ArtefactType::Model:
        if (k.domain.empty())
            r.add("missing-domain", k.to_string());
        break;
    case ArtefactType::Corrs:
        if (k.src == k.trg)
            r.add("corrs-same-domain", k.to_string(), "correspondences connect two different domains");
        break;
    case ArtefactType::Delta:
        if (k.src != k.trg || k.domain != k.src)
            r.add("delta-cross-domain", k.to_string(), "deltas stay within one domain");
        break;
    }
    return r;
}

const char* to_string(Activity a)
{
    switch (a) {
    case Activity::CC: return "CC";
    case Activity::GEN: return "GEN";
    case Activity::SYNC: return "SYNC";
    case Activity::INT: return "INT";
    case Activity::SUT: return "SUT";
    }
    return "?";
}

const char* to_string(Mode m) { return m == Mode::Initial ? "initial" : "incremental"; }

const char* to_string(Direction d)
{
    switch (d) {
    case Direction::Fwd: return "fwd";
    case Direction::Bwd: return "bwd";
    case Direction::None: return "none";
    }
    return "?";
}

bool operator==(const Fragment& a, const Fragment& b)
{
    return a.name == b.name && a.activity == b.activity && a.mode == b.mode &&
           a.direction == b.direction && a.inputs == b.inputs && a.outputs == b.outputs;
}

bool is_legal(Activity a, Mode m, Direction d)
{
    switch (a) {
    case Activity::GEN:
    case Activity::CC: return d == Direction::None;
    case Activity::SYNC: return d != Direction::None;
    case Activity::INT: return m == Mode::Incremental && d == Direction::None;
    case Activity::SUT: return false;
    }
    return false;
}

namespace {

const ArtefactKind kModelS = ArtefactKind::model("S", true);
const ArtefactKind kModelT = ArtefactKind::model("T", true);
const ArtefactKind kCorrs = ArtefactKind::corrs("S", "T");
const ArtefactKind kDeltaS = ArtefactKind::delta("S");
const ArtefactKind kDeltaT = ArtefactKind::delta("T");

} // namespace

const std::vector<Fragment>& catalogue()
{
    using A = Activity;
    using M = Mode;
    using D = Direction;
    static const std::vector<Fragment> fragments = {
        {names::kGenInitial, A::GEN, M::Initial, D::None, {}, {kModelS, kCorrs, kModelT}},
        {names::kGenIncremental, A::GEN, M::Incremental, D::None, {kModelS, kCorrs, kModelT}, {kDeltaS, kCorrs, kDeltaT}},
        {names::kCcInitial, A::CC, M::Initial, D::None, {kModelS, kModelT}, {kCorrs}},
        {names::kCcIncremental, A::CC, M::Incremental, D::None, {kCorrs, kDeltaS, kDeltaT}, {kCorrs}},
        {names::kSyncFwdInitial, A::SYNC, M::Initial, D::Fwd, {kModelS}, {kCorrs, kModelT}},
        {names::kSyncFwdIncremental, A::SYNC, M::Incremental, D::Fwd, {kDeltaS, kCorrs}, {kCorrs, kDeltaT}},
        {names::kSyncBwdInitial, A::SYNC, M::Initial, D::Bwd, {kModelT}, {kCorrs, kModelS}},
        {names::kSyncBwdIncremental, A::SYNC, M::Incremental, D::Bwd, {kDeltaT, kCorrs}, {kCorrs, kDeltaS}},
        {names::kInt, A::INT, M::Incremental, D::None, {kCorrs, kDeltaS, kDeltaT}, {kCorrs, kDeltaS, kDeltaT}},
    };
    return fragments;
}

const Fragment& fragment(const std::string& name)
{
    for (const auto& f : catalogue())
        if (f.name == name)
            return f;
    throw Error("unknown fragment '" + name + "'");
}

Fragment external_sut(Mode mode)
{
    if (mode == Mode::Initial)
        return {names::kSut, Activity::SUT, Mode::Initial, Direction::Fwd, {kModelS}, {kModelT}};
    return {names::kSutIncremental, Activity::SUT, Mode::Incremental, Direction::Fwd, {kDeltaS, kCorrs}, {kDeltaT}};
}

std::string WireSource::to_string() const
{
    if (external)
        return "ext:" + *external;
    return std::to_string(step) + "." + std::to_string(slot);
}

std::size_t Chain::add(Fragment f, std::vector<std::optional<WireSource>> inputs)
{
    steps.push_back({std::move(f), std::move(inputs)});
    return steps.size() - 1;
}

ValidationReport validate_chain(const Chain& chain)
{
    ValidationReport r;
    for (std::size_t i = 0; i < chain.steps.size(); ++i) {
        const ChainStep& step = chain.steps[i];
        const std::string where = "step " + std::to_string(i) + " (" + step.fragment.name + ")";
        for (const auto& k : step.fragment.inputs)
            r.append(validate_kind(k), where);
        for (const auto& k : step.fragment.outputs)
            r.append(validate_kind(k), where);
        if (step.inputs.size() != step.fragment.inputs.size())
            r.add("input-arity", where,
                  "wiring lists " + std::to_string(step.inputs.size()) + " inputs, fragment takes " +
                      std::to_string(step.fragment.inputs.size()));

        for (std::size_t slot = 0; slot < step.fragment.inputs.size(); ++slot) {
            const std::string subject = where + " input " + std::to_string(slot);
            if (slot >= step.inputs.size() || !step.inputs[slot]) {
                r.add("unsatisfied-input", subject);
                continue;
            }
            const WireSource& src = *step.inputs[slot];
            if (src.external)
                continue;
            if (src.step >= i) {
                r.add("wiring-not-acyclic", subject, "refers to step " + std::to_string(src.step));
                continue;
            }
            const Fragment& producer = chain.steps[src.step].fragment;
            if (src.slot >= producer.outputs.size()) {
                r.add("unknown-output-slot", subject, "step " + std::to_string(src.step) + " has no output " +
                                                          std::to_string(src.slot));
                continue;
            }
            const ArtefactKind& have = producer.outputs[src.slot];
            const ArtefactKind& want = step.fragment.inputs[slot];
            if (!(have == want))
                r.add("kind-mismatch", subject, "expects " + want.to_string() + ", wired to " + have.to_string());
        }
    }
    return r;
}

const char* to_string(PatternName p)
{
    switch (p) {
    case PatternName::DirectedStart: return "DirectedStart";
    case PatternName::ColdStart: return "ColdStart";
    case PatternName::GenerateAndCheck: return "GenerateAndCheck";
    }
    return "?";
}

std::optional<PatternName> parse_pattern_name(const std::string& s)
{
    for (auto p : {PatternName::DirectedStart, PatternName::ColdStart, PatternName::GenerateAndCheck})
        if (s == to_string(p))
            return p;
    return std::nullopt;
}

const std::vector<Pattern>& patterns()
{
    static const std::vector<Pattern> all = {
        {PatternName::DirectedStart, "Start a synchronisation process.",
         "Create one model, forward-synchronise it from scratch to obtain the other model and an "
         "initial correspondence, then propagate changes with incremental SYNC."},
        {PatternName::ColdStart, "Start a synchronisation process.",
         "Establish a correspondence between two existing models with initial CC, then propagate "
         "changes with incremental SYNC."},
        {PatternName::GenerateAndCheck, "Test a transformation implemented outside the bx.",
         "Use GEN as test generator and CC as oracle around the system under test; never compare "
         "the SUT output with the generated model for equality."},
    };
    return all;
}

std::string external_delta_name(Direction d, std::size_t increment)
{
    return std::string(d == Direction::Bwd ? "delta_T_" : "delta_S_") + std::to_string(increment);
}

namespace {

void append_sync_increments(Chain& ch, std::size_t corrs_step, std::size_t n,
                            const std::vector<Direction>& directions)
{
    for (std::size_t j = 1; j <= n; ++j) {
        const Direction d = j - 1 < directions.size() ? directions[j - 1] : Direction::Fwd;
        const Fragment& f = fragment(d == Direction::Bwd ? names::kSyncBwdIncremental
                                                         : names::kSyncFwdIncremental);
        corrs_step = ch.add(f, {WireSource::ext(external_delta_name(d, j)), WireSource::from(corrs_step, 0)});
    }
}

} // namespace

Chain expand_pattern(PatternName p, std::size_t n, const std::vector<Direction>& directions)
{
    Chain ch;
    switch (p) {
    case PatternName::DirectedStart: {
        const std::size_t start = ch.add(fragment(names::kSyncFwdInitial), {WireSource::ext("M_S")});
        append_sync_increments(ch, start, n, directions);
        break;
    }
    case PatternName::ColdStart: {
        const std::size_t start =
            ch.add(fragment(names::kCcInitial), {WireSource::ext("M_S"), WireSource::ext("M_T")});
        append_sync_increments(ch, start, n, directions);
        break;
    }
    case PatternName::GenerateAndCheck: {
        const std::size_t gen = ch.add(fragment(names::kGenInitial), {});
        const std::size_t sut = ch.add(external_sut(Mode::Initial), {WireSource::from(gen, 0)});
        std::size_t cc = ch.add(fragment(names::kCcInitial), {WireSource::from(gen, 0), WireSource::from(sut, 0)});
        std::size_t gen_corrs = gen;
        for (std::size_t j = 1; j <= n; ++j) {
            const std::size_t inc = ch.add(fragment(names::kGenIncremental),
                                           {WireSource::from(gen, 0), WireSource::from(gen_corrs, 1),
                                            WireSource::from(gen, 2)});
            const std::size_t sut_inc = ch.add(external_sut(Mode::Incremental),
                                               {WireSource::from(inc, 0), WireSource::from(cc, 0)});
            cc = ch.add(fragment(names::kCcIncremental),
                        {WireSource::from(cc, 0), WireSource::from(inc, 0), WireSource::from(sut_inc, 0)});
            gen_corrs = inc;
        }
        break;
    }
    }
    return ch;
}

void ImplRegistry::bind(std::string fragment_name, FragmentImpl impl)
{
    impls_[std::move(fragment_name)] = std::move(impl);
}

const FragmentImpl* ImplRegistry::find(const std::string& fragment_name) const
{
    auto it = impls_.find(fragment_name);
    return it == impls_.end() ? nullptr : &it->second;
}

std::string ImplRegistry::describe(const ArtefactKind& k, const std::any& payload) const
{
    if (describe_)
        return describe_(k, payload);
    return k.to_string();
}

bool StepRecord::same_as(const StepRecord& o) const
{
    return index == o.index && fragment == o.fragment && sources == o.sources && inputs == o.inputs &&
           outputs == o.outputs && notes == o.notes && verdict == o.verdict;
}

ChainError::ChainError(std::size_t step, std::string message, std::vector<StepRecord> partial)
    : Error("step " + std::to_string(step) + " failed: " + message), step_(step), cause_(std::move(message)),
      partial_(std::move(partial))
{
}

ChainResult run_chain(const Chain& chain, const std::map<std::string, Artefact>& external,
                      const ImplRegistry& impls)
{
    if (ValidationReport r = validate_chain(chain); !r.ok())
        throw Error("invalid chain: " + r.items().front().to_string());

    for (const auto& step : chain.steps)
        if (impls.find(step.fragment.name) == nullptr)
            throw Error("missing implementation for '" + step.fragment.name + "'");

    std::set<std::pair<std::size_t, std::size_t>> consumed;
    for (const auto& step : chain.steps) {
        for (std::size_t slot = 0; slot < step.inputs.size(); ++slot) {
            const WireSource& src = *step.inputs[slot];
            if (!src.external) {
                consumed.emplace(src.step, src.slot);
                continue;
            }
            auto it = external.find(*src.external);
            if (it == external.end())
                throw Error("missing external input '" + *src.external + "'");
            if (!(it->second.kind == step.fragment.inputs[slot]))
                throw Error("external input '" + *src.external + "' is " + it->second.kind.to_string() +
                            ", expected " + step.fragment.inputs[slot].to_string());
        }
    }

    ChainResult result;
    for (std::size_t i = 0; i < chain.steps.size(); ++i) {
        const ChainStep& step = chain.steps[i];
        StepRecord record;
        record.index = i;
        record.fragment = step.fragment.name;
        record.started = std::chrono::system_clock::now();

        std::vector<std::any> inputs;
        for (std::size_t slot = 0; slot < step.inputs.size(); ++slot) {
            const WireSource& src = *step.inputs[slot];
            const Artefact& a = src.external ? external.at(*src.external) : result.outputs[src.step][src.slot];
            inputs.push_back(a.payload);
            record.sources.push_back(src.to_string());
            record.inputs.push_back(impls.describe(step.fragment.inputs[slot], a.payload));
        }

        StepContext ctx;
        ctx.index = i;
        std::vector<std::any> outputs;
        try {
            outputs = (*impls.find(step.fragment.name))(inputs, ctx);
        } catch (const std::exception& e) {
            throw ChainError(i, e.what(), result.trace);
        }
        if (outputs.size() != step.fragment.outputs.size())
            throw ChainError(i, "implementation returned " + std::to_string(outputs.size()) + " outputs, expected " +
                                    std::to_string(step.fragment.outputs.size()),
                             result.trace);

        std::vector<Artefact> produced;
        for (std::size_t slot = 0; slot < outputs.size(); ++slot) {
            record.outputs.push_back(impls.describe(step.fragment.outputs[slot], outputs[slot]));
            produced.push_back({step.fragment.outputs[slot], std::move(outputs[slot])});
        }
        record.notes = std::move(ctx.notes);
        record.verdict = ctx.verdict;
        result.outputs.push_back(std::move(produced));
        result.trace.push_back(std::move(record));
    }

    for (std::size_t i = 0; i < result.outputs.size(); ++i)
        for (std::size_t slot = 0; slot < result.outputs[i].size(); ++slot)
            if (!consumed.contains({i, slot}))
                result.terminal.emplace(std::to_string(i) + "." + std::to_string(slot), result.outputs[i][slot]);
    return result;
}

} // namespace conman::method
