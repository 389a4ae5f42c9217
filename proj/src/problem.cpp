#include "conman/problem.hpp"

#include "conman/error.hpp"

#include <algorithm>

namespace conman {

std::string Context::type_name(const Id& node) const
{
    auto it = type_names.find(node);
    return it == type_names.end() ? node : it->second;
}

std::string Context::relation_name(const Id& edge) const
{
    auto it = relation_names.find(edge);
    return it == relation_names.end() ? edge : it->second;
}

const Role* Context::role_of(const Id& node) const
{
    for (const auto& r : roles)
        if (std::find(r.types.begin(), r.types.end(), node) != r.types.end())
            return &r;
    return nullptr;
}

bool operator==(const Context& a, const Context& b)
{
    return *a.graph == *b.graph && a.type_names == b.type_names &&
           a.relation_names == b.relation_names && a.roles == b.roles;
}

int Network::version(const Id& node) const
{
    auto it = versions.find(node);
    return it == versions.end() ? 0 : it->second;
}

const PayloadRef* Network::payload(const Id& node) const
{
    auto it = payloads.find(node);
    return it == payloads.end() ? nullptr : &it->second;
}

bool operator==(const Network& a, const Network& b)
{
    return a.typing == b.typing && a.versions == b.versions &&
           a.authoritative == b.authoritative && a.payloads == b.payloads;
}

Network empty_network(const GraphPtr& schema_graph)
{
    auto g = make_graph({}, {});
    return Network{g, GraphMorphism(g, schema_graph, {}, {}, Totality::Total), {}, {}, {}};
}

const char* to_string(EdgeStatus s)
{
    switch (s) {
    case EdgeStatus::Consistent: return "consistent";
    case EdgeStatus::Inconsistent: return "inconsistent";
    case EdgeStatus::Unknown: return "unknown";
    }
    return "unknown";
}

void RelationRegistry::bind(std::string relation, ConsistencyChecker checker)
{
    bindings_[std::move(relation)] = std::move(checker);
}

const ConsistencyChecker* RelationRegistry::find(const std::string& relation) const
{
    auto it = bindings_.find(relation);
    return it == bindings_.end() ? nullptr : &it->second;
}

std::vector<std::string> RelationRegistry::names() const
{
    std::vector<std::string> out;
    for (const auto& [name, _] : bindings_)
        out.push_back(name);
    return out;
}

EdgeStatus ConsistencyReport::status(const Id& edge) const
{
    auto it = per_edge.find(edge);
    return it == per_edge.end() ? EdgeStatus::Unknown : it->second.status;
}

EdgeStatus aggregate(const std::vector<EdgeStatus>& statuses)
{
    bool unknown = false;
    for (auto s : statuses) {
        if (s == EdgeStatus::Inconsistent)
            return EdgeStatus::Inconsistent;
        if (s == EdgeStatus::Unknown)
            unknown = true;
    }
    return unknown ? EdgeStatus::Unknown : EdgeStatus::Consistent;
}

ValidationReport validate_context(const Context& c)
{
    ValidationReport report = validate_graph(*c.graph);

    std::map<std::string, Id> by_type_name;
    for (const auto& [node, name] : c.type_names) {
        if (!c.graph->has_node(node))
            report.add("unknown-type", node, "name '" + name + "' given to a missing node");
        auto [it, fresh] = by_type_name.emplace(name, node);
        if (!fresh)
            report.add("duplicate-type-name", node, "name '" + name + "' already used by '" + it->second + "'");
    }
    std::map<std::string, Id> by_relation_name;
    for (const auto& [edge, name] : c.relation_names) {
        if (c.graph->find_edge(edge) == nullptr)
            report.add("unknown-relation", edge, "name '" + name + "' given to a missing edge");
        auto [it, fresh] = by_relation_name.emplace(name, edge);
        if (!fresh)
            report.add("duplicate-relation-name", edge,
                       "name '" + name + "' already used by '" + it->second + "'");
    }

    std::map<Id, std::string> assigned;
    for (const auto& role : c.roles) {
        for (const auto& t : role.types) {
            if (!c.graph->has_node(t))
                report.add("unknown-type", t, "listed in role '" + role.name + "'");
            auto [it, fresh] = assigned.emplace(t, role.name);
            if (!fresh && it->second != role.name)
                report.add("type-in-several-roles", t, "roles '" + it->second + "' and '" + role.name + "'");
        }
    }
    return report;
}

ValidationReport validate_schema(const Schema& s, const Context& c)
{
    ValidationReport report = validate_graph(*s.graph);
    if (!(s.typing.domain() == *s.graph))
        report.add("typing-domain-mismatch", "", "typing is not defined on the schema graph");
    if (!(s.typing.codomain() == *c.graph))
        report.add("typing-codomain-mismatch", "", "typing does not target the context graph");
    if (s.typing.totality() != Totality::Total)
        report.add("not-total", "", "schema typing must be total");
    GraphMorphism total_claim(s.typing.domain_ptr(), s.typing.codomain_ptr(), s.typing.node_map(),
                              s.typing.edge_map(), Totality::Total);
    report.append(validate_morphism(total_claim, false));
    return report;
}

ValidationReport validate_network(const Network& n, const Schema& s)
{
    ValidationReport report = validate_graph(*n.graph);
    if (!(n.typing.domain() == *n.graph))
        report.add("typing-domain-mismatch", "", "typing is not defined on the network graph");
    if (!(n.typing.codomain() == *s.graph))
        report.add("typing-codomain-mismatch", "", "typing does not target the schema graph");
    GraphMorphism total_claim(n.typing.domain_ptr(), n.typing.codomain_ptr(), n.typing.node_map(),
                              n.typing.edge_map(), Totality::Total);
    report.append(validate_morphism(total_claim, true));

    for (const auto& a : n.authoritative)
        if (!n.graph->has_node(a))
            report.add("authoritative-not-in-network", a);
    for (const auto& node : n.graph->nodes()) {
        auto it = n.versions.find(node);
        if (it == n.versions.end())
            report.add("missing-version", node);
        else if (it->second < 1)
            report.add("non-positive-version", node, "version " + std::to_string(it->second));
    }
    for (const auto& [node, _] : n.versions)
        if (!n.graph->has_node(node))
            report.add("unknown-model", node, "version given for a missing model");
    for (const auto& [node, _] : n.payloads)
        if (!n.graph->has_node(node))
            report.add("unknown-model", node, "payload given for a missing model");
    return report;
}

std::string relation_of(const Network& n, const Schema& s, const Context& c, const Id& edge)
{
    auto schema_edge = n.typing.edge(edge);
    if (!schema_edge)
        return {};
    auto context_edge = s.typing.edge(*schema_edge);
    if (!context_edge)
        return {};
    return c.relation_name(*context_edge);
}

ConsistencyReport check_consistency(const Network& n, const Schema& s, const Context& c,
                                    const RelationRegistry& registry)
{
    ConsistencyReport report;
    std::vector<EdgeStatus> statuses;
    for (const auto& e : n.graph->edges()) {
        EdgeVerdict verdict;
        verdict.relation = relation_of(n, s, c, e.id);
        if (verdict.relation.empty()) {
            report.warnings.push_back("edge '" + e.id + "' has no relation type");
        } else if (const auto* checker = registry.find(verdict.relation); checker == nullptr) {
            report.warnings.push_back("relation '" + verdict.relation + "' is not bound; edge '" +
                                      e.id + "' left unknown");
        } else {
            const PayloadRef* src = n.payload(e.src);
            const PayloadRef* trg = n.payload(e.trg);
            if (src != nullptr && trg != nullptr) {
                CheckOutcome outcome = (*checker)(*src, *trg);
                verdict.status = outcome.status;
                verdict.witness = std::move(outcome.witness);
            }
        }
        statuses.push_back(verdict.status);
        report.per_edge[e.id] = std::move(verdict);
    }
    report.network = aggregate(statuses);
    return report;
}

} // namespace conman
