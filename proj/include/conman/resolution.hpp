#pragma once

// Resolution paths: sequences of networks over one schema, linked by partial
// step morphisms derived from (schema node, version) matching.

#include "conman/problem.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace conman {

struct ResolutionPath {
    std::shared_ptr<const Schema> schema;
    std::vector<Network> networks;
    /// Per network, optional expected status per edge. Either empty or the
    /// same length as `networks`.
    std::vector<std::map<Id, EdgeStatus>> expected;

    std::size_t length() const { return networks.empty() ? 0 : networks.size() - 1; }
};

struct StepMorphism {
    std::size_t index = 0; // 1-based: step i maps N_{i-1} to N_i
    GraphMorphism morphism;
    std::set<Id> created;
    std::set<Id> deleted;
    std::set<Id> preserved;
};

/// Throws Error("schema mismatch") when the two networks are typed over
/// different schema graphs.
StepMorphism derive_step(const Network& prev, const Network& next, std::size_t index = 1);

struct PathValidation {
    ValidationReport networks;           // each network against the schema
    std::vector<ValidationReport> steps; // steps[i] checks p_{i+1}

    bool ok() const;
    std::size_t violation_count() const;
    /// 1-based indices of steps that carry at least one violation.
    std::vector<std::size_t> failing_steps() const;
};

PathValidation validate_path(const ResolutionPath& p);

enum class ExpectationOutcome { Met, Mismatch, DeclaredOnly };

struct ExpectationCheck {
    std::size_t network = 0; // 0-based position in the path
    Id edge;
    EdgeStatus expected = EdgeStatus::Unknown;
    EdgeStatus actual = EdgeStatus::Unknown;
    ExpectationOutcome outcome = ExpectationOutcome::DeclaredOnly;
};

struct PathReport {
    std::vector<std::pair<StepMorphism, ValidationReport>> per_step;
    std::vector<ConsistencyReport> per_network;
    std::vector<ExpectationCheck> expectations;
    bool path_consistent = false;

    std::size_t mismatches() const;
};

/// Throws Error("invalid path") unless validate_path passes. Expectations
/// whose actual status is unknown are recorded as declared-only.
PathReport replay_path(const ResolutionPath& p, const Context& c, const RelationRegistry& registry);

/// Produces the successor networks reachable by one move. Successors must
/// preserve every authoritative model of the input.
struct MoveGenerator {
    std::string name;
    std::function<std::vector<Network>(const Network&)> successors;
};

struct SearchBudget {
    int max_depth = 0;
    std::size_t max_expansions = 0;
};

/// Breadth-first search for a shortest path ending in a consistent network.
/// Move generators are tried in the given order; each generator's successors
/// are ordered by the ids of the models they create. Throws
/// Error("empty budget") for a non-positive depth or expansion limit.
std::optional<ResolutionPath> search_consistent_path(const Network& start,
                                                     const std::shared_ptr<const Schema>& schema,
                                                     const Context& c,
                                                     const RelationRegistry& registry,
                                                     std::span<const MoveGenerator> moves,
                                                     SearchBudget budget);

} // namespace conman
