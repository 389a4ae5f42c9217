#pragma once

#include "conman/dsl.hpp"
#include "conman/resolution.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#ifndef CONMAN_CORPUS_DIR
#error "CONMAN_CORPUS_DIR must be defined"
#endif

namespace fixture {

inline std::string corpus(const std::string& file)
{
    return std::string(CONMAN_CORPUS_DIR) + "/" + file;
}

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline const std::vector<std::string>& corpus_files()
{
    static const std::vector<std::string> files = {corpus("cmdae.cml"), corpus("cme.cml"), corpus("gratram.cml"),
                                                   corpus("mbtt.cml"), corpus("search_demo.cml")};
    return files;
}

inline conman::dsl::Document load(const std::string& file)
{
    return conman::dsl::load_files({corpus(file)});
}

inline conman::GraphPtr graph(std::vector<conman::Id> nodes, std::vector<conman::Edge> edges = {})
{
    return conman::make_graph(std::move(nodes), std::move(edges));
}

/// Random well-formed multigraph with up to `max_nodes` nodes. Ids carry
/// `prefix` so that graphs drawn together stay distinguishable.
inline conman::GraphPtr random_graph(std::mt19937& rng, std::size_t max_nodes, std::size_t max_edges,
                                     const std::string& prefix)
{
    const std::size_t n = std::uniform_int_distribution<std::size_t>(0, max_nodes)(rng);
    std::vector<conman::Id> nodes;
    for (std::size_t i = 0; i < n; ++i)
        nodes.push_back(prefix + std::to_string(i));
    std::vector<conman::Edge> edges;
    if (n > 0) {
        const std::size_t m = std::uniform_int_distribution<std::size_t>(0, max_edges)(rng);
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        for (std::size_t i = 0; i < m; ++i)
            edges.push_back({prefix + "e" + std::to_string(i), nodes[pick(rng)], nodes[pick(rng)]});
    }
    return conman::make_graph(std::move(nodes), std::move(edges));
}

/// A schema over itself: the context graph is the schema graph and the
/// typing is the identity.
inline std::shared_ptr<const conman::Schema> self_schema(const conman::GraphPtr& g)
{
    return std::make_shared<conman::Schema>(conman::Schema{g, conman::GraphMorphism::identity(g)});
}

/// Random network over `s`: a subset of schema nodes, each realised by one
/// model, and a random subset of the induced schema edges.
inline conman::Network random_network(std::mt19937& rng, const conman::Schema& s, int max_version,
                                      const std::string& prefix)
{
    std::bernoulli_distribution coin(0.6);
    std::uniform_int_distribution<int> version(1, max_version);
    std::vector<conman::Id> nodes;
    std::map<conman::Id, conman::Id> typing, of_schema_node;
    std::map<conman::Id, int> versions;
    std::set<conman::Id> authoritative;
    for (const auto& sn : s.graph->nodes()) {
        if (!coin(rng))
            continue;
        const conman::Id id = prefix + sn;
        nodes.push_back(id);
        typing[id] = sn;
        of_schema_node[sn] = id;
        versions[id] = version(rng);
        if (std::bernoulli_distribution(0.3)(rng))
            authoritative.insert(id);
    }
    std::vector<conman::Edge> edges;
    std::map<conman::Id, conman::Id> edge_typing;
    for (const auto& se : s.graph->edges()) {
        auto a = of_schema_node.find(se.src);
        auto b = of_schema_node.find(se.trg);
        if (a == of_schema_node.end() || b == of_schema_node.end() || !coin(rng))
            continue;
        edges.push_back({prefix + se.id, a->second, b->second});
        edge_typing[prefix + se.id] = se.id;
    }
    auto g = conman::make_graph(std::move(nodes), std::move(edges));
    return conman::Network{g,
                           conman::GraphMorphism(g, s.graph, std::move(typing), std::move(edge_typing),
                                                 conman::Totality::Total),
                           std::move(versions),
                           std::move(authoritative),
                           {}};
}

/// Random path of 1..6 networks over a random schema with at most 5 nodes.
/// Small version ranges make preservation and deletion both frequent.
inline conman::ResolutionPath random_path(std::mt19937& rng)
{
    auto g = random_graph(rng, 5, 5, "s");
    conman::ResolutionPath p;
    p.schema = self_schema(g);
    const std::size_t len = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
    for (std::size_t i = 0; i < len; ++i)
        p.networks.push_back(random_network(rng, *p.schema, 2, "n" + std::to_string(i) + "_"));
    return p;
}

} // namespace fixture
