#include "conman/resolution.hpp"

#include "conman/error.hpp"

namespace conman {

StepMorphism derive_step(const Network& prev, const Network& next, std::size_t index)
{
    if (!(prev.typing.codomain() == next.typing.codomain()))
        throw Error("schema mismatch");

    // Typing into the schema is mono, so every schema node and schema edge
    // has at most one preimage in `next`.
    std::map<Id, Id> next_by_schema_node;
    for (const auto& [node, schema_node] : next.typing.node_map())
        next_by_schema_node.emplace(schema_node, node);
    std::map<Id, Id> next_by_schema_edge;
    for (const auto& [edge, schema_edge] : next.typing.edge_map())
        next_by_schema_edge.emplace(schema_edge, edge);

    StepMorphism step{index, GraphMorphism::empty(prev.graph, next.graph), {}, {}, {}};
    std::map<Id, Id> node_map;
    for (const auto& m : prev.graph->nodes()) {
        auto schema_node = prev.typing.node(m);
        if (schema_node) {
            auto it = next_by_schema_node.find(*schema_node);
            if (it != next_by_schema_node.end() && next.version(it->second) == prev.version(m)) {
                node_map.emplace(m, it->second);
                step.preserved.insert(m);
                continue;
            }
        }
        step.deleted.insert(m);
    }

    std::set<Id> image;
    for (const auto& [_, to] : node_map)
        image.insert(to);
    for (const auto& m : next.graph->nodes())
        if (!image.contains(m))
            step.created.insert(m);

    std::map<Id, Id> edge_map;
    for (const auto& e : prev.graph->edges()) {
        auto src = node_map.find(e.src);
        auto trg = node_map.find(e.trg);
        auto schema_edge = prev.typing.edge(e.id);
        if (src == node_map.end() || trg == node_map.end() || !schema_edge)
            continue;
        auto it = next_by_schema_edge.find(*schema_edge);
        if (it == next_by_schema_edge.end())
            continue;
        const Edge* target = next.graph->find_edge(it->second);
        if (target != nullptr && target->src == src->second && target->trg == trg->second)
            edge_map.emplace(e.id, it->second);
    }

    step.morphism = GraphMorphism(prev.graph, next.graph, std::move(node_map), std::move(edge_map),
                                  Totality::Partial);
    return step;
}

bool PathValidation::ok() const
{
    if (!networks.ok())
        return false;
    for (const auto& s : steps)
        if (!s.ok())
            return false;
    return true;
}

std::size_t PathValidation::violation_count() const
{
    std::size_t n = networks.size();
    for (const auto& s : steps)
        n += s.size();
    return n;
}

std::vector<std::size_t> PathValidation::failing_steps() const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < steps.size(); ++i)
        if (!steps[i].ok())
            out.push_back(i + 1);
    return out;
}

namespace {

ValidationReport check_step(const Network& prev, const Network& next, const StepMorphism& step)
{
    ValidationReport report = validate_morphism(step.morphism, false);

    // p_i;s_i = s_{i-1} wherever p_i is defined.
    for (const auto& [from, to] : step.morphism.node_map()) {
        if (next.typing.node(to) != prev.typing.node(from))
            report.add("type-not-preserved", from, "maps to '" + to + "' of a different schema node");
    }
    for (const auto& [from, to] : step.morphism.edge_map()) {
        if (next.typing.edge(to) != prev.typing.edge(from))
            report.add("type-not-preserved", from, "maps to edge '" + to + "' of a different schema edge");
    }

    for (const auto& a : prev.authoritative) {
        if (!step.preserved.contains(a))
            report.add("authoritative-not-preserved", a,
                       "authoritative model (v" + std::to_string(prev.version(a)) + ") is not preserved");
    }

    for (const auto& [from, to] : step.morphism.node_map()) {
        const PayloadRef* before = prev.payload(from);
        const PayloadRef* after = next.payload(to);
        if (before != nullptr && after != nullptr && *before != *after)
            report.add("payload-changed-without-version-bump", from,
                       "payload '" + *before + "' became '" + *after + "'");
    }
    return report;
}

} // namespace

PathValidation validate_path(const ResolutionPath& p)
{
    PathValidation result;
    if (!p.schema) {
        result.networks.add("missing-schema", "");
        return result;
    }
    if (p.networks.empty())
        result.networks.add("empty-path", "", "a path needs at least one network");
    if (!p.expected.empty() && p.expected.size() != p.networks.size())
        result.networks.add("expectation-count-mismatch", "");

    for (std::size_t i = 0; i < p.networks.size(); ++i)
        result.networks.append(validate_network(p.networks[i], *p.schema),
                               "network " + std::to_string(i));

    for (std::size_t i = 1; i < p.networks.size(); ++i) {
        const Network& prev = p.networks[i - 1];
        const Network& next = p.networks[i];
        try {
            StepMorphism step = derive_step(prev, next, i);
            result.steps.push_back(check_step(prev, next, step));
        } catch (const Error& e) {
            ValidationReport r;
            r.add("schema-mismatch", "", e.what());
            result.steps.push_back(std::move(r));
        }
    }
    return result;
}

std::size_t PathReport::mismatches() const
{
    std::size_t n = 0;
    for (const auto& e : expectations)
        if (e.outcome == ExpectationOutcome::Mismatch)
            ++n;
    return n;
}

PathReport replay_path(const ResolutionPath& p, const Context& c, const RelationRegistry& registry)
{
    if (!validate_path(p).ok())
        throw Error("invalid path");

    PathReport report;
    for (std::size_t i = 1; i < p.networks.size(); ++i) {
        StepMorphism step = derive_step(p.networks[i - 1], p.networks[i], i);
        ValidationReport checks = check_step(p.networks[i - 1], p.networks[i], step);
        report.per_step.emplace_back(std::move(step), std::move(checks));
    }
    for (std::size_t i = 0; i < p.networks.size(); ++i) {
        report.per_network.push_back(check_consistency(p.networks[i], *p.schema, c, registry));
        if (i >= p.expected.size())
            continue;
        for (const auto& [edge, expected] : p.expected[i]) {
            ExpectationCheck check{i, edge, expected, report.per_network.back().status(edge),
                                   ExpectationOutcome::DeclaredOnly};
            if (check.actual != EdgeStatus::Unknown)
                check.outcome = check.actual == expected ? ExpectationOutcome::Met
                                                         : ExpectationOutcome::Mismatch;
            report.expectations.push_back(check);
        }
    }
    report.path_consistent = !report.per_network.empty() &&
                             report.per_network.back().network == EdgeStatus::Consistent;
    return report;
}

} // namespace conman
