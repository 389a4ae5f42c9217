#pragma once

// A toy model domain giving every fragment an executable reference
// implementation. Models are sets of named, kinded elements with string
// attributes. Two models are consistent when their elements correspond
// one-to-one by name, kinds correspond under a KindMap, and all shared
// attributes agree. Attributes whose key starts with '_' are private to one
// side and ignored.

#include "conman/error.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace conman::demo {

enum class Kind : std::uint8_t { K1, K2, K3, K4, K5, K6 };
inline constexpr std::size_t kKindCount = 6;

std::string to_string(Kind k);
std::optional<Kind> parse_kind(std::string_view s);
Kind kind_at(std::size_t i);

bool is_private_attr(const std::string& key);

struct Element {
    std::string name;
    Kind kind = Kind::K1;
    std::map<std::string, std::string> attrs;

    std::map<std::string, std::string> shared_attrs() const;
    friend bool operator==(const Element&, const Element&) = default;
};

class DemoModel {
public:
    DemoModel() = default;
    explicit DemoModel(std::string domain) : domain_(std::move(domain)) {}

    const std::string& domain() const { return domain_; }
    void set_domain(std::string d) { domain_ = std::move(d); }

    /// Throws Error on a duplicate name.
    void add(Element e);
    bool remove(const std::string& name);
    const Element* find(const std::string& name) const;
    Element* find_mut(const std::string& name);
    bool contains(const std::string& name) const { return elements_.contains(name); }

    std::size_t size() const { return elements_.size(); }
    bool empty() const { return elements_.empty(); }
    std::vector<Element> elements() const;
    std::vector<std::string> names() const;

    friend bool operator==(const DemoModel&, const DemoModel&) = default;

private:
    std::string domain_;
    std::map<std::string, Element> elements_;
};

/// Total relation from source kinds to non-empty sets of acceptable target
/// kinds. The first target of each set is the one synchronisation picks.
class KindMap {
public:
    using Table = std::array<std::vector<Kind>, kKindCount>;

    /// Throws Error unless every source kind has at least one target.
    KindMap(Table table, std::string name);

    static KindMap identity();
    static KindMap shift();   // K_i -> K_{i+1}, cyclic
    static KindMap multi();   // K_i -> {K_i, K_{i+1}}, used by CC and GEN only
    static KindMap named(const std::string& name);

    const std::string& name() const { return name_; }
    bool accepts(Kind src, Kind trg) const;
    Kind primary(Kind src) const;
    std::span<const Kind> targets(Kind src) const;
    /// First source kind (in alphabet order) whose primary target is `trg`,
    /// falling back to any source accepting it.
    std::optional<Kind> source_of(Kind trg) const;
    bool deterministic() const;
    bool injective() const;
    /// Inverse of a deterministic injective map. Throws Error otherwise.
    KindMap inverse() const;

private:
    Table table_;
    std::string name_;
};

using Link = std::pair<std::string, std::string>;

struct DemoCorr {
    DemoModel src;
    DemoModel trg;
    std::set<Link> links;

    std::optional<std::string> target_of(const std::string& src_name) const;
    std::optional<std::string> source_of(const std::string& trg_name) const;

    friend bool operator==(const DemoCorr&, const DemoCorr&) = default;
};

/// Link endpoints exist and no name is linked twice on either side.
std::vector<std::string> corr_problems(const DemoCorr& c);

struct AddOp {
    Element element;
    friend bool operator==(const AddOp&, const AddOp&) = default;
};
struct RemoveOp {
    std::string name;
    friend bool operator==(const RemoveOp&, const RemoveOp&) = default;
};
struct SetAttrOp {
    std::string name;
    std::string key;
    std::string value;
    friend bool operator==(const SetAttrOp&, const SetAttrOp&) = default;
};
using DeltaOp = std::variant<AddOp, RemoveOp, SetAttrOp>;

struct DemoDelta {
    std::vector<DeltaOp> ops;

    bool empty() const { return ops.empty(); }
    friend bool operator==(const DemoDelta&, const DemoDelta&) = default;
};

std::string to_string(const DeltaOp& op);

/// Throws Error("inapplicable delta") when an op references a missing name
/// or adds an existing one at its point of application.
DemoModel apply_delta(const DemoModel& base, const DemoDelta& delta);

/// A delta taking `from` to `to`: removals, additions (also for kind
/// changes and dropped attributes), then attribute updates.
DemoDelta diff_models(const DemoModel& from, const DemoModel& to);

bool elements_correspond(const Element& s, const Element& t, const KindMap& km);

bool demo_consistent(const DemoModel& ms, const DemoModel& mt, const KindMap& km);

struct Witness {
    std::vector<std::string> unmatched_src;
    std::vector<std::string> unmatched_trg;

    bool empty() const { return unmatched_src.empty() && unmatched_trg.empty(); }
    std::size_t size() const { return unmatched_src.size() + unmatched_trg.size(); }
};

struct CheckResult {
    DemoCorr corr;
    Witness witness;
};

/// Links every corresponding name pair; the witness lists what is left over.
CheckResult demo_cc_initial(const DemoModel& ms, const DemoModel& mt, const KindMap& km);

/// Applies both deltas to the correspondence's models and re-checks only the
/// elements the deltas touch. Elements unlinked before stay unlinked unless
/// touched.
CheckResult demo_cc_incremental(const DemoCorr& corr, const DemoDelta& delta_s, const DemoDelta& delta_t,
                                const KindMap& km);

struct SyncInitialResult {
    DemoCorr corr;
    DemoModel produced;
};

SyncInitialResult demo_sync_fwd_initial(const DemoModel& ms, const KindMap& km, const std::string& target_domain = "T");
/// Throws Error("untranslatable kind") for a target kind no source maps to.
SyncInitialResult demo_sync_bwd_initial(const DemoModel& mt, const KindMap& km, const std::string& source_domain = "S");

struct SyncIncrementalResult {
    DemoCorr corr;
    DemoDelta delta;
    std::vector<std::string> warnings;
};

/// Translates the source delta op by op onto the linked target elements.
/// Removing or changing an unlinked element is ignored with a warning.
SyncIncrementalResult demo_sync_fwd_incr(const DemoDelta& delta_s, const DemoCorr& corr, const KindMap& km);
SyncIncrementalResult demo_sync_bwd_incr(const DemoDelta& delta_t, const DemoCorr& corr, const KindMap& km);

struct Triple {
    DemoCorr corr; // carries both models
    const DemoModel& src() const { return corr.src; }
    const DemoModel& trg() const { return corr.trg; }
};

/// Seeded consistent triple. With a multi-valued KindMap the target kinds are
/// picked at random among the acceptable ones.
Triple demo_gen(std::uint64_t seed, std::size_t size, const KindMap& km);

struct GenIncrementResult {
    DemoDelta delta_s;
    DemoCorr corr;
    DemoDelta delta_t;
};

/// Seeded consistency-preserving change: a random source delta and its
/// translation.
GenIncrementResult demo_gen_incr(std::uint64_t seed, const DemoCorr& triple, const KindMap& km);

/// Random applicable source delta for `model` (1 to 3 ops).
DemoDelta random_delta(std::uint64_t seed, const DemoModel& model);

enum class Side { Source, Target };
enum class IntPolicy { SourceWins, TargetWins, AuthoritativeWins };

std::optional<IntPolicy> parse_policy(const std::string& s);

struct Conflict {
    std::string element;
    std::string key; // empty for element-level conflicts
    std::string detail;
};

struct IntResult {
    DemoCorr corr;
    DemoDelta delta_s;
    DemoDelta delta_t;
    std::vector<Conflict> conflicts;
};

/// Three-way integration of concurrent deltas on both sides of a consistent
/// correspondence. The returned deltas apply to the original models and
/// start with the caller's ops verbatim. Throws Error("no authority") for
/// AuthoritativeWins without an authority.
IntResult demo_int(const DemoCorr& corr, const DemoDelta& delta_s, const DemoDelta& delta_t, IntPolicy policy,
                   const KindMap& km, std::optional<Side> authority = std::nullopt);

/// Content fingerprint (FNV-1a over the canonical rendering), stable across
/// platforms.
std::uint64_t fingerprint(const DemoModel& m);

std::string describe(const DemoModel& m);

} // namespace conman::demo
