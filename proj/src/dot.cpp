#include "conman/dot.hpp"

#include <set>
#include <sstream>

namespace conman::dsl {

namespace {

std::string q(const std::string& s)
{
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\')
            out += '\\';
        out += ch;
    }
    return out + "\"";
}

void header(std::ostream& out, const std::string& name)
{
    out << "graph " << q(name) << " {\n";
    out << "  node [shape=circle];\n";
}

void network_cluster(std::ostream& out, const Network& n, const ConsistencyReport* report, const std::string& label,
                     const std::string& prefix, std::size_t index)
{
    out << "  subgraph cluster_" << index << " {\n";
    out << "    label=" << q(label) << ";\n";
    for (const auto& m : n.graph->nodes()) {
        out << "    " << q(prefix + m) << " [label=" << q(m + " v" + std::to_string(n.version(m)));
        if (n.authoritative.contains(m))
            out << " style=filled fillcolor=black fontcolor=white";
        out << "];\n";
    }
    for (const auto& e : n.graph->edges()) {
        out << "    " << q(prefix + e.src) << " -- " << q(prefix + e.trg);
        const EdgeStatus st = report ? report->status(e.id) : EdgeStatus::Unknown;
        if (st == EdgeStatus::Inconsistent)
            out << " [style=\"dashed,bold\" color=red penwidth=2]";
        else if (report && st == EdgeStatus::Unknown)
            out << " [style=dotted color=gray]";
        out << ";\n";
    }
    out << "  }\n";
}

} // namespace

std::string export_dot(const Context& c, const std::string& name)
{
    std::ostringstream out;
    header(out, name);
    std::set<Id> placed;
    for (std::size_t i = 0; i < c.roles.size(); ++i) {
        out << "  subgraph cluster_" << i << " {\n";
        out << "    label=" << q(c.roles[i].name) << ";\n";
        for (const auto& t : c.roles[i].types) {
            out << "    " << q(t) << " [label=" << q(c.type_name(t)) << "];\n";
            placed.insert(t);
        }
        out << "  }\n";
    }
    for (const auto& t : c.graph->nodes())
        if (!placed.contains(t))
            out << "  " << q(t) << " [label=" << q(c.type_name(t)) << "];\n";
    for (const auto& e : c.graph->edges())
        out << "  " << q(e.src) << " -- " << q(e.trg) << " [label=" << q(c.relation_name(e.id)) << "];\n";
    out << "}\n";
    return out.str();
}

std::string export_dot(const Schema& s, const Context& c, const std::string& name)
{
    std::ostringstream out;
    header(out, name);
    std::set<Id> placed;
    auto node_line = [&](const Id& n) {
        return q(n) + " [label=" + q(n + " : " + c.type_name(s.typing.node(n).value_or(""))) + "];\n";
    };
    for (std::size_t i = 0; i < c.roles.size(); ++i) {
        out << "  subgraph cluster_" << i << " {\n";
        out << "    label=" << q(c.roles[i].name) << ";\n";
        for (const auto& n : s.graph->nodes()) {
            const Role* r = c.role_of(s.typing.node(n).value_or(""));
            if (r == &c.roles[i]) {
                out << "    " << node_line(n);
                placed.insert(n);
            }
        }
        out << "  }\n";
    }
    for (const auto& n : s.graph->nodes())
        if (!placed.contains(n))
            out << "  " << node_line(n);
    for (const auto& e : s.graph->edges())
        out << "  " << q(e.src) << " -- " << q(e.trg) << " [label="
            << q(c.relation_name(s.typing.edge(e.id).value_or(""))) << "];\n";
    out << "}\n";
    return out.str();
}

std::string export_dot(const Network& n, const ConsistencyReport* report, const std::string& name)
{
    std::ostringstream out;
    header(out, name);
    network_cluster(out, n, report, name, "", 0);
    out << "}\n";
    return out.str();
}

std::string export_dot(const ResolutionPath& p, const PathReport* report, const std::string& name)
{
    std::ostringstream out;
    header(out, name);
    out << "  rankdir=LR;\n";
    for (std::size_t i = 0; i < p.networks.size(); ++i) {
        const ConsistencyReport* r =
            report && i < report->per_network.size() ? &report->per_network[i] : nullptr;
        const std::string label = "N" + std::to_string(i + 1);
        network_cluster(out, p.networks[i], r, label, label + ":", i);
    }
    out << "}\n";
    return out.str();
}

} // namespace conman::dsl
