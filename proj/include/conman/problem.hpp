#pragma once

// Problem-domain description language: transformation contexts, schemas,
// networks with authoritative models, and edge-wise consistency evaluation.

#include "conman/graph.hpp"

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace conman {

struct Role {
    std::string name;
    std::vector<Id> types;

    friend bool operator==(const Role&, const Role&) = default;
};

/// Nodes are model types, edges are binary consistency relations. Roles are
/// the swimlanes of the visual notation and carry no formal meaning.
struct Context {
    GraphPtr graph = make_graph({}, {});
    std::map<Id, std::string> type_names;
    std::map<Id, std::string> relation_names;
    std::vector<Role> roles;

    std::string type_name(const Id& node) const;
    std::string relation_name(const Id& edge) const;
    const Role* role_of(const Id& node) const;

    friend bool operator==(const Context& a, const Context& b);
};

/// A graph S with a total typing morphism S -> C.graph.
struct Schema {
    GraphPtr graph;
    GraphMorphism typing;

    friend bool operator==(const Schema& a, const Schema& b) { return a.typing == b.typing; }
};

using PayloadRef = std::string;

/// A graph N with a mono typing N -> S.graph. The authoritative sub-network is
/// kept as a node subset; its edges are the induced ones.
struct Network {
    GraphPtr graph;
    GraphMorphism typing;
    std::map<Id, int> versions;
    std::set<Id> authoritative;
    std::map<Id, PayloadRef> payloads;

    int version(const Id& node) const;
    const PayloadRef* payload(const Id& node) const;

    friend bool operator==(const Network& a, const Network& b);
};

/// Network with no models over the given schema graph.
Network empty_network(const GraphPtr& schema_graph);

enum class EdgeStatus { Consistent, Inconsistent, Unknown };

const char* to_string(EdgeStatus s);

struct CheckOutcome {
    EdgeStatus status = EdgeStatus::Unknown;
    std::string witness;
};

/// Called with the payloads of the relation's source and target model, in
/// that order.
using ConsistencyChecker = std::function<CheckOutcome(const PayloadRef& src, const PayloadRef& trg)>;

class RelationRegistry {
public:
    void bind(std::string relation, ConsistencyChecker checker);
    const ConsistencyChecker* find(const std::string& relation) const;
    bool empty() const { return bindings_.empty(); }
    std::vector<std::string> names() const;

private:
    std::map<std::string, ConsistencyChecker> bindings_;
};

struct EdgeVerdict {
    EdgeStatus status = EdgeStatus::Unknown;
    std::string relation;
    std::string witness;
};

struct ConsistencyReport {
    std::map<Id, EdgeVerdict> per_edge;
    EdgeStatus network = EdgeStatus::Consistent;
    std::vector<std::string> warnings;

    EdgeStatus status(const Id& edge) const;
};

/// Consistent iff all statuses are consistent; unknown if any is unknown and
/// none is inconsistent; inconsistent otherwise.
EdgeStatus aggregate(const std::vector<EdgeStatus>& statuses);

ValidationReport validate_context(const Context& c);
ValidationReport validate_schema(const Schema& s, const Context& c);
ValidationReport validate_network(const Network& n, const Schema& s);

/// Relation name of a network edge, resolved through s_E;c_E. Empty when the
/// typing is undefined somewhere along the way.
std::string relation_of(const Network& n, const Schema& s, const Context& c, const Id& edge);

ConsistencyReport check_consistency(const Network& n, const Schema& s, const Context& c,
                                    const RelationRegistry& registry);

} // namespace conman
