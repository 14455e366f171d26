#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "parser.hpp"
#include "term.hpp"

namespace lpterm {

// Tags for the two copies compared when testing head(r) against body(r').
inline constexpr int head_copy_tag = 1;
inline constexpr int body_copy_tag = 2;

struct FiringEdge {
    std::size_t from = 0;
    std::size_t to = 0;
    // positions in body(to) whose atom unifies with head(from)
    std::vector<std::size_t> body_positions;
};

class FiringGraph {
public:
    FiringGraph() = default;
    FiringGraph(std::size_t nodes, std::vector<FiringEdge> edges)
        : nodes_(nodes), edges_(std::move(edges)), succ_(nodes) {
        std::sort(edges_.begin(), edges_.end(), [](const FiringEdge& a, const FiringEdge& b) {
            return std::pair(a.from, a.to) < std::pair(b.from, b.to);
        });
        for (std::size_t i = 0; i < edges_.size(); ++i) succ_[edges_[i].from].push_back(i);
    }

    std::size_t node_count() const { return nodes_; }
    const std::vector<FiringEdge>& edges() const { return edges_; }
    // indices into edges(), ordered by target
    const std::vector<std::size_t>& out_edges(std::size_t node) const { return succ_.at(node); }

    const FiringEdge* find(std::size_t from, std::size_t to) const {
        for (auto i : succ_.at(from))
            if (edges_[i].to == to) return &edges_[i];
        return nullptr;
    }
    bool has_edge(std::size_t from, std::size_t to) const { return find(from, to) != nullptr; }

private:
    std::size_t nodes_ = 0;
    std::vector<FiringEdge> edges_;
    std::vector<std::vector<std::size_t>> succ_;
};

inline void require_positive_normal(const Program& p) {
    if (!p.is_positive_normal())
        throw std::invalid_argument("program must be positive and normal (apply st_transform)");
}

// Edge <r, r'> iff head(r) unifies with a non-builtin atom of body(r'), the two
// rules renamed apart even when r = r'.
inline FiringGraph build_firing_graph(const Program& p) {
    require_positive_normal(p);
    std::vector<FiringEdge> edges;
    std::vector<Atom> heads;
    std::vector<Rule> bodies;
    for (const auto& r : p.rules()) {
        heads.push_back(retag(r.head_atom(), head_copy_tag));
        bodies.push_back(rename_apart(r, body_copy_tag));
    }
    for (std::size_t from = 0; from < p.size(); ++from) {
        for (std::size_t to = 0; to < p.size(); ++to) {
            FiringEdge e{from, to, {}};
            const auto& body = bodies[to].body;
            for (std::size_t i = 0; i < body.size(); ++i)
                if (!body[i].is_builtin() && mgu(heads[from], body[i])) e.body_positions.push_back(i);
            if (!e.body_positions.empty()) edges.push_back(std::move(e));
        }
    }
    return FiringGraph(p.size(), std::move(edges));
}

struct SccInfo {
    // components in topological order of the condensation: an edge C -> D
    // implies C precedes D
    std::vector<std::vector<std::size_t>> components;
    std::vector<bool> nontrivial;
    std::vector<std::size_t> component_of;
    std::vector<std::set<PredicateKey>> predicates;
};

namespace detail {
struct Tarjan {
    const FiringGraph& g;
    std::vector<int> index, low;
    std::vector<bool> on_stack;
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> out;
    int counter = 0;

    explicit Tarjan(const FiringGraph& graph)
        : g(graph), index(graph.node_count(), -1), low(graph.node_count(), 0),
          on_stack(graph.node_count(), false) {}

    void visit(std::size_t v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        for (auto ei : g.out_edges(v)) {
            std::size_t w = g.edges()[ei].to;
            if (index[w] < 0) {
                visit(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            std::vector<std::size_t> comp;
            std::size_t w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                comp.push_back(w);
            } while (w != v);
            std::sort(comp.begin(), comp.end());
            out.push_back(std::move(comp));
        }
    }
};
}  // namespace detail

inline SccInfo scc_info(const FiringGraph& g, const Program* p = nullptr) {
    detail::Tarjan t(g);
    for (std::size_t v = 0; v < g.node_count(); ++v)
        if (t.index[v] < 0) t.visit(v);
    // Tarjan emits components in reverse topological order
    std::reverse(t.out.begin(), t.out.end());

    SccInfo info;
    info.components = std::move(t.out);
    info.component_of.assign(g.node_count(), 0);
    for (std::size_t c = 0; c < info.components.size(); ++c)
        for (auto v : info.components[c]) info.component_of[v] = c;
    info.nontrivial.assign(info.components.size(), false);
    for (const auto& e : g.edges())
        if (info.component_of[e.from] == info.component_of[e.to])
            info.nontrivial[info.component_of[e.from]] = true;
    info.predicates.resize(info.components.size());
    if (p)
        for (std::size_t c = 0; c < info.components.size(); ++c)
            for (auto v : info.components[c]) info.predicates[c].insert((*p)[v].head_atom().key());
    return info;
}

struct BodyClass {
    std::vector<std::size_t> rbody;
    std::vector<std::size_t> sbody;
    std::vector<std::size_t> srbody;
    bool relevant = false;
};

using BodyClassification = std::vector<BodyClass>;

// rbody: body atoms unifying with the head of some rule in the rule's own SCC.
// sbody: non-builtin body atoms containing every head variable.
// relevant: not a fact, and the non-builtin atoms outside rbody miss a head
// variable.
inline BodyClassification classify_bodies(const Program& p, const FiringGraph& g,
                                          const SccInfo& s) {
    BodyClassification out(p.size());
    for (const auto& e : g.edges()) {
        if (s.component_of[e.from] != s.component_of[e.to]) continue;
        auto& rb = out[e.to].rbody;
        rb.insert(rb.end(), e.body_positions.begin(), e.body_positions.end());
    }
    for (std::size_t r = 0; r < p.size(); ++r) {
        const Rule& rule = p[r];
        BodyClass& bc = out[r];
        std::sort(bc.rbody.begin(), bc.rbody.end());
        bc.rbody.erase(std::unique(bc.rbody.begin(), bc.rbody.end()), bc.rbody.end());

        auto head_vars = variables_of(rule.head_atom());
        std::set<VarId> outside;
        for (std::size_t i = 0; i < rule.body.size(); ++i) {
            const Atom& b = rule.body[i];
            if (b.is_builtin()) continue;
            auto bv = variables_of(b);
            if (std::includes(bv.begin(), bv.end(), head_vars.begin(), head_vars.end()))
                bc.sbody.push_back(i);
            if (!std::binary_search(bc.rbody.begin(), bc.rbody.end(), i))
                outside.insert(bv.begin(), bv.end());
        }
        std::set_intersection(bc.rbody.begin(), bc.rbody.end(), bc.sbody.begin(), bc.sbody.end(),
                              std::back_inserter(bc.srbody));
        bc.relevant = !rule.is_fact() &&
                      !std::includes(outside.begin(), outside.end(), head_vars.begin(),
                                     head_vars.end());
    }
    return out;
}

// Bundles the three analyses every criterion starts from.
struct ProgramAnalysis {
    FiringGraph graph;
    SccInfo sccs;
    BodyClassification bodies;
};

inline ProgramAnalysis analyze_structure(const Program& p) {
    ProgramAnalysis a;
    a.graph = build_firing_graph(p);
    a.sccs = scc_info(a.graph, &p);
    a.bodies = classify_bodies(p, a.graph, a.sccs);
    return a;
}

namespace detail {
inline std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}
}  // namespace detail

// DOT digraph; one cluster per SCC, non-trivial ones drawn filled.
inline std::string to_dot(const Program& p, const FiringGraph& g, const SccInfo& s) {
    std::string out = "digraph firing_graph {\n  node [shape=box, fontname=\"monospace\"];\n";
    for (std::size_t c = 0; c < s.components.size(); ++c) {
        out += "  subgraph cluster_" + std::to_string(c) + " {\n";
        out += "    label=\"C" + std::to_string(c) +
               (s.nontrivial[c] ? " (non-trivial)\";\n    style=filled;\n    fillcolor=\"#e8eefc\";\n"
                                : " (trivial)\";\n    style=dashed;\n");
        for (auto v : s.components[c])
            out += "    r" + std::to_string(v) + " [label=\"r" + std::to_string(v) + ": " +
                   detail::dot_escape(render_rule(p[v])) + "\"];\n";
        out += "  }\n";
    }
    for (const auto& e : g.edges())
        out += "  r" + std::to_string(e.from) + " -> r" + std::to_string(e.to) + ";\n";
    out += "}\n";
    return out;
}

}  // namespace lpterm
