#include "conman/error.hpp"
#include "conman/resolution.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_set>

namespace conman {

namespace {

std::string state_key(const Network& n)
{
    std::ostringstream key;
    std::vector<std::string> parts;
    for (const auto& node : n.graph->nodes()) {
        std::ostringstream part;
        part << node << '@' << n.typing.node(node).value_or("?") << '#' << n.version(node) << '|'
             << (n.payload(node) ? *n.payload(node) : std::string()) << '|'
             << (n.authoritative.contains(node) ? 'A' : '-');
        parts.push_back(part.str());
    }
    std::sort(parts.begin(), parts.end());
    for (const auto& p : parts)
        key << p << ';';
    parts.clear();
    for (const auto& e : n.graph->edges())
        parts.push_back(e.id + ':' + e.src + '>' + e.trg);
    std::sort(parts.begin(), parts.end());
    for (const auto& p : parts)
        key << p << ';';
    return key.str();
}

std::vector<Id> created_ids(const Network& parent, const Network& child)
{
    const std::set<Id> created = derive_step(parent, child).created;
    return {created.begin(), created.end()};
}

struct SearchNode {
    Network network;
    std::size_t parent;
    int depth;
};

} // namespace

std::optional<ResolutionPath> search_consistent_path(const Network& start,
                                                     const std::shared_ptr<const Schema>& schema,
                                                     const Context& c,
                                                     const RelationRegistry& registry,
                                                     std::span<const MoveGenerator> moves,
                                                     SearchBudget budget)
{
    if (budget.max_depth <= 0 || budget.max_expansions == 0)
        throw Error("empty budget");
    if (!schema)
        throw Error("search needs a schema");

    auto is_goal = [&](const Network& n) {
        return check_consistency(n, *schema, c, registry).network == EdgeStatus::Consistent;
    };

    std::vector<SearchNode> nodes;
    nodes.push_back({start, 0, 0});

    auto build = [&](std::size_t leaf) {
        std::vector<Network> reversed;
        for (std::size_t i = leaf;; i = nodes[i].parent) {
            reversed.push_back(nodes[i].network);
            if (i == 0)
                break;
        }
        ResolutionPath path{schema, {reversed.rbegin(), reversed.rend()}, {}};
        if (!validate_path(path).ok())
            throw Error("search produced an invalid path; a move generator broke its contract");
        return path;
    };

    if (is_goal(start))
        return build(0);

    std::unordered_set<std::string> seen{state_key(start)};
    std::deque<std::size_t> frontier{0};
    std::size_t expansions = 0;

    while (!frontier.empty() && expansions < budget.max_expansions) {
        const std::size_t current = frontier.front();
        frontier.pop_front();
        if (nodes[current].depth >= budget.max_depth)
            continue;
        ++expansions;

        for (const auto& move : moves) {
            // Copy: `nodes` grows below.
            const Network parent = nodes[current].network;
            std::vector<Network> successors = move.successors(parent);
            std::vector<std::pair<std::vector<Id>, std::size_t>> order;
            for (std::size_t i = 0; i < successors.size(); ++i)
                order.emplace_back(created_ids(parent, successors[i]), i);
            std::stable_sort(order.begin(), order.end(),
                             [](const auto& a, const auto& b) { return a.first < b.first; });

            for (const auto& [_, i] : order) {
                if (!seen.insert(state_key(successors[i])).second)
                    continue;
                nodes.push_back({std::move(successors[i]), current, nodes[current].depth + 1});
                const std::size_t id = nodes.size() - 1;
                if (is_goal(nodes[id].network))
                    return build(id);
                frontier.push_back(id);
            }
        }
    }
    return std::nullopt;
}

} // namespace conman
