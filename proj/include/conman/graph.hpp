#pragma once

// Finite directed multigraphs and (partial) graph morphisms between them.

#include "conman/report.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace conman {

using Id = std::string;

struct Edge {
    Id id;
    Id src;
    Id trg;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Immutable graph. Construction accepts arbitrary (possibly malformed) data;
/// validate_graph() reports what is wrong with it. Equality is extensional:
/// declaration order does not matter.
class Graph {
public:
    Graph() = default;
    Graph(std::vector<Id> nodes, std::vector<Edge> edges);

    const std::vector<Id>& nodes() const { return nodes_; }
    const std::vector<Edge>& edges() const { return edges_; }

    bool has_node(std::string_view id) const;
    const Edge* find_edge(std::string_view id) const;

    bool empty() const { return nodes_.empty() && edges_.empty(); }

    friend bool operator==(const Graph& a, const Graph& b);

private:
    std::vector<Id> nodes_;
    std::vector<Edge> edges_;
    std::map<Id, std::size_t, std::less<>> node_index_;
    std::map<Id, std::size_t, std::less<>> edge_index_;
};

using GraphPtr = std::shared_ptr<const Graph>;

GraphPtr make_graph(std::vector<Id> nodes, std::vector<Edge> edges);

enum class Totality { Total, Partial };

/// A pair of partial maps (nodes, edges) between two graphs. Absence of a key
/// means "undefined"; there are no sentinel values.
class GraphMorphism {
public:
    GraphMorphism(GraphPtr domain, GraphPtr codomain, std::map<Id, Id> node_map,
                  std::map<Id, Id> edge_map, Totality totality);

    static GraphMorphism identity(const GraphPtr& g);
    /// The everywhere-undefined morphism.
    static GraphMorphism empty(GraphPtr domain, GraphPtr codomain);

    const Graph& domain() const { return *domain_; }
    const Graph& codomain() const { return *codomain_; }
    const GraphPtr& domain_ptr() const { return domain_; }
    const GraphPtr& codomain_ptr() const { return codomain_; }

    const std::map<Id, Id>& node_map() const { return node_map_; }
    const std::map<Id, Id>& edge_map() const { return edge_map_; }
    Totality totality() const { return totality_; }

    std::optional<Id> node(std::string_view id) const;
    std::optional<Id> edge(std::string_view id) const;

    /// Extensional equality of both maps; domains and codomains must be
    /// equal graphs as well. The totality claim is not compared.
    friend bool operator==(const GraphMorphism& a, const GraphMorphism& b);

private:
    GraphPtr domain_;
    GraphPtr codomain_;
    std::map<Id, Id> node_map_;
    std::map<Id, Id> edge_map_;
    Totality totality_;
};

ValidationReport validate_graph(const Graph& g);

/// Checks that every mapped identifier exists on both sides, that the map is
/// structure preserving where defined, the totality claim, and (optionally)
/// injectivity of both component maps.
ValidationReport validate_morphism(const GraphMorphism& f, bool require_mono);

/// f;g, i.e. x -> g(f(x)). Throws Error("non-composable pair") when the
/// codomain of f is not the domain of g.
GraphMorphism compose(const GraphMorphism& f, const GraphMorphism& g);

} // namespace conman
