#pragma once

// Reference checks written from the definitions, deliberately naive and
// independent of the library code paths they are compared against.

#include "conman/demo.hpp"
#include "conman/graph.hpp"
#include "conman/resolution.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using conman::Edge;
using conman::Graph;
using conman::Id;

// ---------------------------------------------------------------- graphs

inline const Edge* edge_of(const Graph& g, const Id& id)
{
    for (const auto& e : g.edges())
        if (e.id == id)
            return &e;
    return nullptr;
}

inline bool contains_node(const Graph& g, const Id& id)
{
    return std::find(g.nodes().begin(), g.nodes().end(), id) != g.nodes().end();
}

/// Partial morphism: every mapped item exists on both sides, and a mapped
/// edge has mapped endpoints whose images are the image edge's endpoints.
inline bool is_partial_morphism(const Graph& dom, const Graph& cod, const std::map<Id, Id>& nodes,
                                const std::map<Id, Id>& edges)
{
    for (const auto& [x, y] : nodes)
        if (!contains_node(dom, x) || !contains_node(cod, y))
            return false;
    for (const auto& [x, y] : edges) {
        const Edge* e = edge_of(dom, x);
        const Edge* f = edge_of(cod, y);
        if (e == nullptr || f == nullptr)
            return false;
        auto s = nodes.find(e->src);
        auto t = nodes.find(e->trg);
        if (s == nodes.end() || t == nodes.end() || s->second != f->src || t->second != f->trg)
            return false;
    }
    return true;
}

template <class Map>
bool injective(const Map& m)
{
    std::set<typename Map::mapped_type> seen;
    for (const auto& [_, v] : m)
        if (!seen.insert(v).second)
            return false;
    return true;
}

/// All valid partial morphisms dom -> cod, by brute-force enumeration of
/// every partial assignment.
inline std::vector<std::pair<std::map<Id, Id>, std::map<Id, Id>>> all_partial_morphisms(const Graph& dom,
                                                                                      const Graph& cod)
{
    std::vector<std::pair<std::map<Id, Id>, std::map<Id, Id>>> out;
    const auto& dn = dom.nodes();
    const auto& de = dom.edges();
    const std::size_t cn = cod.nodes().size() + 1;
    const std::size_t ce = cod.edges().size() + 1;
    std::vector<std::size_t> choice(dn.size() + de.size(), 0);
    while (true) {
        std::map<Id, Id> nm, em;
        for (std::size_t i = 0; i < dn.size(); ++i)
            if (choice[i] > 0)
                nm[dn[i]] = cod.nodes()[choice[i] - 1];
        for (std::size_t i = 0; i < de.size(); ++i)
            if (choice[dn.size() + i] > 0)
                em[de[i].id] = cod.edges()[choice[dn.size() + i] - 1].id;
        if (is_partial_morphism(dom, cod, nm, em))
            out.emplace_back(std::move(nm), std::move(em));
        std::size_t k = 0;
        for (; k < choice.size(); ++k) {
            const std::size_t limit = k < dn.size() ? cn : ce;
            if (++choice[k] < limit)
                break;
            choice[k] = 0;
        }
        if (k == choice.size())
            break;
    }
    return out;
}

// ---------------------------------------------------------------- paths

/// Authoritative-preservation violations of a path as (1-based step, model):
/// a model authoritative in N_{i-1} needs a model of the same schema node and
/// version in N_i.
inline std::set<std::pair<std::size_t, Id>> authoritative_violations(const conman::ResolutionPath& p)
{
    std::set<std::pair<std::size_t, Id>> out;
    for (std::size_t i = 1; i < p.networks.size(); ++i) {
        const auto& prev = p.networks[i - 1];
        const auto& next = p.networks[i];
        for (const auto& a : prev.authoritative) {
            const Id type = prev.typing.node_map().at(a);
            const int version = prev.versions.at(a);
            bool kept = false;
            for (const auto& [m, t] : next.typing.node_map())
                if (t == type && next.versions.at(m) == version)
                    kept = true;
            if (!kept)
                out.emplace(i, a);
        }
    }
    return out;
}

// ---------------------------------------------------------------- demo relation

/// Kind acceptance of the named maps, written out by hand.
inline bool kind_ok(const std::string& map, int src, int trg)
{
    if (map == "identity")
        return src == trg;
    if (map == "shift")
        return trg == (src + 1) % 6;
    if (map == "multi")
        return trg == src || trg == (src + 1) % 6;
    return false;
}

inline std::map<std::string, std::string> public_attrs(const conman::demo::Element& e)
{
    std::map<std::string, std::string> out;
    for (const auto& [k, v] : e.attrs)
        if (k.empty() || k[0] != '_')
            out[k] = v;
    return out;
}

/// Tries every bijection between the two element lists.
inline bool bijection_exists(const conman::demo::DemoModel& ms, const conman::demo::DemoModel& mt,
                             const std::string& map)
{
    const auto s = ms.elements();
    const auto t = mt.elements();
    if (s.size() != t.size())
        return false;
    std::vector<std::size_t> perm(t.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool ok = true;
        for (std::size_t i = 0; i < s.size() && ok; ++i) {
            const auto& a = s[i];
            const auto& b = t[perm[i]];
            ok = a.name == b.name && kind_ok(map, static_cast<int>(a.kind), static_cast<int>(b.kind)) &&
                 public_attrs(a) == public_attrs(b);
        }
        if (ok)
            return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

} // namespace oracle
