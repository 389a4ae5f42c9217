#include "conman/dsl.hpp"

#include <sstream>

namespace conman::dsl {

namespace {

// Repeated declarations get "#k" suffixed ids; the text carries the plain name.
std::string plain(const Id& id)
{
    const auto hash = id.find('#');
    return hash == Id::npos ? id : id.substr(0, hash);
}

void write_context(std::ostream& out, const ContextDecl& d)
{
    const Context& c = *d.context;
    out << "context " << d.name << " {\n";
    std::set<Id> in_role;
    for (const auto& r : c.roles) {
        out << "  role " << quote(r.name) << " {\n";
        for (const auto& t : r.types) {
            out << "    type " << c.type_name(t) << "\n";
            in_role.insert(t);
        }
        out << "  }\n";
    }
    for (const auto& t : c.graph->nodes())
        if (!in_role.contains(t))
            out << "  type " << c.type_name(t) << "\n";
    for (const auto& e : c.graph->edges())
        out << "  relation " << c.relation_name(e.id) << " : " << c.type_name(e.src) << " -- " << c.type_name(e.trg)
            << "\n";
    out << "}\n";
}

void write_schema(std::ostream& out, const SchemaDecl& d, const Context& c)
{
    const Schema& s = *d.schema;
    out << "schema " << d.name << " for " << d.context << " {\n";
    for (const auto& n : s.graph->nodes())
        out << "  node " << plain(n) << " : " << c.type_name(s.typing.node(n).value_or("")) << "\n";
    for (const auto& e : s.graph->edges())
        out << "  edge " << plain(e.id) << " : " << plain(e.src) << " -- " << plain(e.trg) << " via "
            << c.relation_name(s.typing.edge(e.id).value_or("")) << "\n";
    out << "}\n";
}

void write_body(std::ostream& out, const Network& n, const std::map<Id, EdgeStatus>& expected,
                const std::string& indent)
{
    for (const auto& m : n.graph->nodes()) {
        out << indent << "model " << plain(m) << " @ " << n.typing.node(m).value_or("") << " v" << n.version(m);
        if (n.authoritative.contains(m))
            out << " authoritative";
        if (const PayloadRef* p = n.payload(m))
            out << " payload " << quote(*p);
        out << "\n";
    }
    for (const auto& e : n.graph->edges()) {
        out << indent << "edge " << plain(e.src) << " -- " << plain(e.trg);
        if (auto it = expected.find(e.id); it != expected.end() && it->second != EdgeStatus::Unknown)
            out << " expect " << to_string(it->second);
        out << "\n";
    }
}

void write_store(std::ostream& out, const PayloadStoreDecl& d)
{
    out << "payloads " << d.name << " {\n";
    for (const auto& pm : d.models) {
        out << "  model " << quote(pm.ref);
        if (!pm.model.domain().empty())
            out << " domain " << pm.model.domain();
        out << " {\n";
        for (const auto& e : pm.model.elements()) {
            out << "    element " << e.name << " : " << demo::to_string(e.kind);
            for (const auto& [k, v] : e.attrs)
                out << " " << k << " = " << quote(v);
            out << "\n";
        }
        out << "  }\n";
    }
    out << "}\n";
}

} // namespace

std::string quote(std::string_view s)
{
    std::string out = "\"";
    for (char ch : s) {
        switch (ch) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += ch;
        }
    }
    return out + "\"";
}

std::string serialize(const Document& doc)
{
    std::ostringstream out;
    bool first = true;
    for (const auto& [kind, i] : doc.order) {
        if (!first)
            out << "\n";
        first = false;
        switch (kind) {
        case DeclKind::Context:
            write_context(out, doc.contexts[i]);
            break;
        case DeclKind::Schema: {
            const SchemaDecl& s = doc.schemas[i];
            write_schema(out, s, *doc.find_context(s.context)->context);
            break;
        }
        case DeclKind::Network: {
            const NetworkDecl& n = doc.networks[i];
            out << "network " << n.name << " on " << n.schema << " {\n";
            write_body(out, n.network, n.expected, "  ");
            out << "}\n";
            break;
        }
        case DeclKind::Path: {
            const PathDecl& p = doc.paths[i];
            out << "path " << p.name << " on " << p.schema << " {\n";
            for (std::size_t k = 0; k < p.path.networks.size(); ++k) {
                const int label = k < p.step_labels.size() ? p.step_labels[k] : static_cast<int>(k + 1);
                out << "  step " << label << " {\n";
                static const std::map<Id, EdgeStatus> none;
                write_body(out, p.path.networks[k], k < p.path.expected.size() ? p.path.expected[k] : none, "    ");
                out << "  }\n";
            }
            out << "}\n";
            break;
        }
        case DeclKind::Payloads:
            write_store(out, doc.payload_stores[i]);
            break;
        }
    }
    return out.str();
}

bool semantically_equal(const Document& a, const Document& b)
{
    if (a.order != b.order || a.contexts.size() != b.contexts.size() || a.schemas.size() != b.schemas.size() ||
        a.networks.size() != b.networks.size() || a.paths.size() != b.paths.size() ||
        a.payload_stores.size() != b.payload_stores.size())
        return false;
    for (std::size_t i = 0; i < a.contexts.size(); ++i)
        if (a.contexts[i].name != b.contexts[i].name || !(*a.contexts[i].context == *b.contexts[i].context))
            return false;
    for (std::size_t i = 0; i < a.schemas.size(); ++i)
        if (a.schemas[i].name != b.schemas[i].name || a.schemas[i].context != b.schemas[i].context ||
            !(*a.schemas[i].schema == *b.schemas[i].schema))
            return false;
    for (std::size_t i = 0; i < a.networks.size(); ++i)
        if (a.networks[i].name != b.networks[i].name || a.networks[i].schema != b.networks[i].schema ||
            !(a.networks[i].network == b.networks[i].network) || a.networks[i].expected != b.networks[i].expected)
            return false;
    for (std::size_t i = 0; i < a.paths.size(); ++i) {
        const PathDecl& x = a.paths[i];
        const PathDecl& y = b.paths[i];
        if (x.name != y.name || x.schema != y.schema || x.step_labels != y.step_labels ||
            x.path.networks.size() != y.path.networks.size() || x.path.expected != y.path.expected)
            return false;
        for (std::size_t k = 0; k < x.path.networks.size(); ++k)
            if (!(x.path.networks[k] == y.path.networks[k]))
                return false;
    }
    for (std::size_t i = 0; i < a.payload_stores.size(); ++i) {
        const auto& x = a.payload_stores[i];
        const auto& y = b.payload_stores[i];
        if (x.name != y.name || x.models.size() != y.models.size())
            return false;
        for (std::size_t k = 0; k < x.models.size(); ++k)
            if (x.models[k].ref != y.models[k].ref || !(x.models[k].model == y.models[k].model))
                return false;
    }
    return true;
}

std::string write_model_file(const demo::DemoModel& m, const std::string& ref)
{
    PayloadStoreDecl store{"file", {PayloadModelDecl{ref, m, {}}}, {}};
    std::ostringstream out;
    write_store(out, store);
    return out.str();
}

} // namespace conman::dsl
