#include "conman/graph.hpp"

#include "conman/error.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace conman {

Graph::Graph(std::vector<Id> nodes, std::vector<Edge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges))
{
    // First occurrence wins; duplicates are left for validate_graph to report.
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        node_index_.emplace(nodes_[i], i);
    for (std::size_t i = 0; i < edges_.size(); ++i)
        edge_index_.emplace(edges_[i].id, i);
}

bool Graph::has_node(std::string_view id) const
{
    return node_index_.find(id) != node_index_.end();
}

const Edge* Graph::find_edge(std::string_view id) const
{
    auto it = edge_index_.find(id);
    return it == edge_index_.end() ? nullptr : &edges_[it->second];
}

bool operator==(const Graph& a, const Graph& b)
{
    if (&a == &b)
        return true;
    if (a.nodes_.size() != b.nodes_.size() || a.edges_.size() != b.edges_.size())
        return false;
    auto sorted_nodes = [](const Graph& g) {
        auto v = g.nodes_;
        std::sort(v.begin(), v.end());
        return v;
    };
    auto sorted_edges = [](const Graph& g) {
        std::vector<std::tuple<Id, Id, Id>> v;
        v.reserve(g.edges_.size());
        for (const auto& e : g.edges_)
            v.emplace_back(e.id, e.src, e.trg);
        std::sort(v.begin(), v.end());
        return v;
    };
    return sorted_nodes(a) == sorted_nodes(b) && sorted_edges(a) == sorted_edges(b);
}

GraphPtr make_graph(std::vector<Id> nodes, std::vector<Edge> edges)
{
    return std::make_shared<const Graph>(std::move(nodes), std::move(edges));
}

GraphMorphism::GraphMorphism(GraphPtr domain, GraphPtr codomain, std::map<Id, Id> node_map,
                             std::map<Id, Id> edge_map, Totality totality)
    : domain_(std::move(domain)), codomain_(std::move(codomain)),
      node_map_(std::move(node_map)), edge_map_(std::move(edge_map)), totality_(totality)
{
    if (!domain_ || !codomain_)
        throw Error("graph morphism needs a domain and a codomain");
}

GraphMorphism GraphMorphism::identity(const GraphPtr& g)
{
    std::map<Id, Id> nodes, edges;
    for (const auto& n : g->nodes())
        nodes.emplace(n, n);
    for (const auto& e : g->edges())
        edges.emplace(e.id, e.id);
    return GraphMorphism(g, g, std::move(nodes), std::move(edges), Totality::Total);
}

GraphMorphism GraphMorphism::empty(GraphPtr domain, GraphPtr codomain)
{
    return GraphMorphism(std::move(domain), std::move(codomain), {}, {}, Totality::Partial);
}

namespace {

std::optional<Id> lookup(const std::map<Id, Id>& m, std::string_view key)
{
    auto it = m.find(Id(key));
    if (it == m.end())
        return std::nullopt;
    return it->second;
}

} // namespace

std::optional<Id> GraphMorphism::node(std::string_view id) const { return lookup(node_map_, id); }
std::optional<Id> GraphMorphism::edge(std::string_view id) const { return lookup(edge_map_, id); }

bool operator==(const GraphMorphism& a, const GraphMorphism& b)
{
    return a.node_map_ == b.node_map_ && a.edge_map_ == b.edge_map_ &&
           *a.domain_ == *b.domain_ && *a.codomain_ == *b.codomain_;
}

ValidationReport validate_graph(const Graph& g)
{
    ValidationReport report;
    std::set<Id> seen_nodes;
    for (const auto& n : g.nodes()) {
        if (!seen_nodes.insert(n).second)
            report.add("duplicate-node", n);
    }
    std::set<Id> seen_edges;
    for (const auto& e : g.edges()) {
        if (!seen_edges.insert(e.id).second)
            report.add("duplicate-edge", e.id);
        if (!g.has_node(e.src))
            report.add("dangling-source", e.id, "source node '" + e.src + "' does not exist");
        if (!g.has_node(e.trg))
            report.add("dangling-target", e.id, "target node '" + e.trg + "' does not exist");
    }
    return report;
}

ValidationReport validate_morphism(const GraphMorphism& f, bool require_mono)
{
    ValidationReport report;
    const Graph& dom = f.domain();
    const Graph& cod = f.codomain();

    for (const auto& [from, to] : f.node_map()) {
        if (!dom.has_node(from))
            report.add("unknown-domain-node", from);
        if (!cod.has_node(to))
            report.add("unknown-codomain-node", from, "image '" + to + "' is not in the codomain");
    }

    for (const auto& [from, to] : f.edge_map()) {
        const Edge* e = dom.find_edge(from);
        const Edge* image = cod.find_edge(to);
        if (e == nullptr) {
            report.add("unknown-domain-edge", from);
            continue;
        }
        if (image == nullptr) {
            report.add("unknown-codomain-edge", from, "image '" + to + "' is not in the codomain");
            continue;
        }
        auto src_image = f.node(e->src);
        auto trg_image = f.node(e->trg);
        if (!src_image || !trg_image) {
            report.add("unmapped-endpoint", from, "edge is mapped but an endpoint is not");
            continue;
        }
        if (*src_image != image->src)
            report.add("source-not-preserved", from,
                       "src(f(e)) = '" + image->src + "' but f(src(e)) = '" + *src_image + "'");
        if (*trg_image != image->trg)
            report.add("target-not-preserved", from,
                       "trg(f(e)) = '" + image->trg + "' but f(trg(e)) = '" + *trg_image + "'");
    }

    if (f.totality() == Totality::Total) {
        for (const auto& n : dom.nodes())
            if (!f.node(n))
                report.add("not-total", n, "node is unmapped");
        for (const auto& e : dom.edges())
            if (!f.edge(e.id))
                report.add("not-total", e.id, "edge is unmapped");
    }

    if (require_mono) {
        std::map<Id, Id> node_preimage;
        for (const auto& [from, to] : f.node_map()) {
            auto [it, fresh] = node_preimage.emplace(to, from);
            if (!fresh)
                report.add("not-injective", from, "node shares image '" + to + "' with '" + it->second + "'");
        }
        std::map<Id, Id> edge_preimage;
        for (const auto& [from, to] : f.edge_map()) {
            auto [it, fresh] = edge_preimage.emplace(to, from);
            if (!fresh)
                report.add("not-injective", from, "edge shares image '" + to + "' with '" + it->second + "'");
        }
    }
    return report;
}

GraphMorphism compose(const GraphMorphism& f, const GraphMorphism& g)
{
    if (f.codomain_ptr() != g.domain_ptr() && !(f.codomain() == g.domain()))
        throw Error("non-composable pair");

    auto chain = [](const std::map<Id, Id>& first, const std::map<Id, Id>& second) {
        std::map<Id, Id> out;
        for (const auto& [x, y] : first) {
            auto it = second.find(y);
            if (it != second.end())
                out.emplace(x, it->second);
        }
        return out;
    };
    const Totality t = (f.totality() == Totality::Total && g.totality() == Totality::Total)
                           ? Totality::Total
                           : Totality::Partial;
    return GraphMorphism(f.domain_ptr(), g.codomain_ptr(), chain(f.node_map(), g.node_map()),
                         chain(f.edge_map(), g.edge_map()), t);
}

} // namespace conman
