#pragma once

// Solution-domain description language: artefact kinds, the fragment
// catalogue, chains of fragments, method patterns, and chain execution.

#include "conman/error.hpp"
#include "conman/report.hpp"

#include <any>
#include <chrono>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace conman::method {

enum class ArtefactType { Model, Corrs, Delta };

const char* to_string(ArtefactType t);

/// Structural kind of an artefact. Model kinds carry a domain label; Corrs
/// and Delta kinds carry (src, trg) endpoint labels. Deltas stay within one
/// domain, correspondences connect two different ones.
struct ArtefactKind {
    ArtefactType type = ArtefactType::Model;
    std::string domain;
    std::string src;
    std::string trg;
    bool empty_allowed = false;

    static ArtefactKind model(std::string domain, bool empty_allowed = false);
    static ArtefactKind corrs(std::string src, std::string trg);
    static ArtefactKind delta(std::string domain);

    std::string to_string() const;

    /// Wiring compatibility: type and endpoints/domain, ignoring empty_allowed.
    friend bool operator==(const ArtefactKind& a, const ArtefactKind& b);
};

ValidationReport validate_kind(const ArtefactKind& k);

enum class Activity { CC, GEN, SYNC, INT, SUT };
enum class Mode { Initial, Incremental };
enum class Direction { Fwd, Bwd, None };

const char* to_string(Activity a);
const char* to_string(Mode m);
const char* to_string(Direction d);

struct Fragment {
    std::string name;
    Activity activity = Activity::CC;
    Mode mode = Mode::Initial;
    Direction direction = Direction::None;
    std::vector<ArtefactKind> inputs;
    std::vector<ArtefactKind> outputs;

    friend bool operator==(const Fragment& a, const Fragment& b);
};

/// True for the nine catalogue combinations (GEN and CC in both modes, SYNC
/// fwd/bwd in both modes, incremental INT).
bool is_legal(Activity a, Mode m, Direction d);

/// The nine fragments: eight from the consistency-management base plus INT.
const std::vector<Fragment>& catalogue();
const Fragment& fragment(const std::string& name);

/// Pseudo-fragment standing for an external system under test. The initial
/// variant maps Model_S to Model_T; the incremental one takes the source
/// delta and the previous correspondence and yields a target delta.
Fragment external_sut(Mode mode);

namespace names {
inline constexpr const char* kGenInitial = "GEN-initial";
inline constexpr const char* kGenIncremental = "GEN-incremental";
inline constexpr const char* kCcInitial = "CC-initial";
inline constexpr const char* kCcIncremental = "CC-incremental";
inline constexpr const char* kSyncFwdInitial = "SYNC-fwd-initial";
inline constexpr const char* kSyncFwdIncremental = "SYNC-fwd-incremental";
inline constexpr const char* kSyncBwdInitial = "SYNC-bwd-initial";
inline constexpr const char* kSyncBwdIncremental = "SYNC-bwd-incremental";
inline constexpr const char* kInt = "INT";
inline constexpr const char* kSut = "SUT";
inline constexpr const char* kSutIncremental = "SUT-incremental";
} // namespace names

/// Where a step input comes from: a named external input or an output slot
/// of an earlier step.
struct WireSource {
    std::optional<std::string> external;
    std::size_t step = 0;
    std::size_t slot = 0;

    static WireSource ext(std::string name) { return {std::move(name), 0, 0}; }
    static WireSource from(std::size_t step, std::size_t slot) { return {std::nullopt, step, slot}; }

    std::string to_string() const;
    friend bool operator==(const WireSource&, const WireSource&) = default;
};

struct ChainStep {
    Fragment fragment;
    std::vector<std::optional<WireSource>> inputs; // one entry per input slot
};

struct Chain {
    std::vector<ChainStep> steps;

    std::size_t size() const { return steps.size(); }
    /// Appends a step and returns its index.
    std::size_t add(Fragment f, std::vector<std::optional<WireSource>> inputs);
};

/// Kind-compatible wiring, wiring only to earlier steps, every input slot
/// satisfied, well-formed artefact kinds.
ValidationReport validate_chain(const Chain& chain);

enum class PatternName { DirectedStart, ColdStart, GenerateAndCheck };

const char* to_string(PatternName p);
std::optional<PatternName> parse_pattern_name(const std::string& s);

struct Pattern {
    PatternName name;
    std::string intent;
    std::string strategy;
};

const std::vector<Pattern>& patterns();

/// Expands a pattern with n incremental rounds. `directions` picks fwd or bwd
/// per increment for the SYNC patterns (default: all fwd); it is ignored by
/// GenerateAndCheck, whose SUT is tested in forward direction. External
/// inputs are named "M_S", "M_T", "delta_S_<j>" and "delta_T_<j>" (j from 1).
Chain expand_pattern(PatternName p, std::size_t n_increments,
                     const std::vector<Direction>& directions = {});

std::string external_delta_name(Direction d, std::size_t increment);

struct Artefact {
    ArtefactKind kind;
    std::any payload;
};

struct StepContext {
    std::size_t index = 0;
    std::vector<std::string> notes;
    /// Set by checking fragments: true iff the checked pair is consistent.
    std::optional<bool> verdict;
};

using FragmentImpl = std::function<std::vector<std::any>(const std::vector<std::any>& inputs, StepContext& ctx)>;
using PayloadDescriber = std::function<std::string(const ArtefactKind&, const std::any&)>;

class ImplRegistry {
public:
    void bind(std::string fragment_name, FragmentImpl impl);
    const FragmentImpl* find(const std::string& fragment_name) const;
    void set_describer(PayloadDescriber d) { describe_ = std::move(d); }
    std::string describe(const ArtefactKind& k, const std::any& payload) const;

private:
    std::map<std::string, FragmentImpl> impls_;
    PayloadDescriber describe_;
};

struct StepRecord {
    std::size_t index = 0;
    std::string fragment;
    std::vector<std::string> sources;      // WireSource::to_string per input
    std::vector<std::string> inputs;       // payload descriptions
    std::vector<std::string> outputs;      // payload descriptions
    std::vector<std::string> notes;
    std::optional<bool> verdict;
    std::chrono::system_clock::time_point started;

    /// Compares everything except the timestamp.
    bool same_as(const StepRecord& other) const;
};

struct ChainResult {
    /// Outputs not consumed by any later step, keyed "<step>.<slot>".
    std::map<std::string, Artefact> terminal;
    /// Every output of every step, indexed [step][slot].
    std::vector<std::vector<Artefact>> outputs;
    std::vector<StepRecord> trace;
};

/// Raised when a step implementation fails. Carries the failing step index
/// and the trace of the steps that completed before it.
class ChainError : public Error {
public:
    ChainError(std::size_t step, std::string message, std::vector<StepRecord> partial);
    std::size_t step() const { return step_; }
    const std::vector<StepRecord>& partial_trace() const { return partial_; }
    const std::string& cause() const { return cause_; }

private:
    std::size_t step_;
    std::string cause_;
    std::vector<StepRecord> partial_;
};

/// Validates, checks that every step has an implementation and that external
/// inputs cover the unwired slots with matching kinds, then runs the steps in
/// order. Precondition failures throw Error before anything executes.
ChainResult run_chain(const Chain& chain, const std::map<std::string, Artefact>& external,
                      const ImplRegistry& impls);

} // namespace conman::method
