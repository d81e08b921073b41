#include "imdpp/knowledge_graph.hpp"

#include <algorithm>
#include <set>

namespace imdpp {

NodeId KnowledgeGraph::add_node(const std::string& name, const std::string& type) {
  if (nodes_.contains(name)) {
    NodeId id = nodes_.find(name);
    if (node_types_.name(node_type_[id]) != type)
      throw InputError("knowledge graph node declared twice with different types: " + name);
    return id;
  }
  NodeId id = nodes_.intern(name);
  node_type_.push_back(static_cast<std::uint16_t>(node_types_.intern(type)));
  finalized_ = false;
  return id;
}

void KnowledgeGraph::add_edge(const std::string& src, const std::string& dst,
                              const std::string& edge_type) {
  NodeId s = nodes_.find(src);
  NodeId d = nodes_.find(dst);
  if (s == kNoId) throw InputError("knowledge graph edge references unknown node: " + src);
  if (d == kNoId) throw InputError("knowledge graph edge references unknown node: " + dst);
  edges_.push_back({s, d, static_cast<std::uint16_t>(edge_types_.intern(edge_type))});
  finalized_ = false;
}

void KnowledgeGraph::finalize() {
  out_.assign(node_count(), {});
  in_.assign(node_count(), {});
  for (std::uint32_t e = 0; e < edges_.size(); ++e) {
    out_[edges_[e].src].push_back(e);
    in_[edges_[e].dst].push_back(e);
  }
  finalized_ = true;
}

bool KnowledgeGraph::has_edge(NodeId src, NodeId dst, std::uint16_t type) const {
  for (auto e : out_[src]) {
    if (edges_[e].dst == dst && edges_[e].type == type) return true;
  }
  return false;
}

void MetaGraph::validate(const KnowledgeGraph& kg) const {
  if (role_names.size() != role_types.size() || role_names.empty())
    throw SchemaError("meta-graph " + name + ": role list malformed");
  if (endpoint_a >= role_names.size() || endpoint_b >= role_names.size() ||
      endpoint_a == endpoint_b)
    throw SchemaError("meta-graph " + name + ": endpoints must be two distinct roles");
  for (const auto& t : role_types) {
    if (!kg.node_types().contains(t))
      throw SchemaError("meta-graph " + name + ": node type absent from knowledge graph: " + t);
  }
  for (const auto& e : edges) {
    if (e.from >= role_names.size() || e.to >= role_names.size())
      throw SchemaError("meta-graph " + name + ": edge references unknown role");
    if (!kg.edge_types().contains(e.edge_type))
      throw SchemaError("meta-graph " + name + ": edge type absent from knowledge graph: " +
                        e.edge_type);
  }
}

namespace {

// Backtracking embedder. Roles are assigned in a connectivity-first order;
// candidates come from typed adjacency of already-assigned neighbors.
struct Matcher {
  const KnowledgeGraph& kg;
  const MetaGraph& m;
  std::vector<std::uint16_t> role_type_id;
  std::vector<std::uint16_t> edge_type_id;
  std::vector<NodeId> assign;
  std::vector<bool> used;  // kg nodes already bound
  std::set<std::vector<NodeId>>* seen_sets;

  Matcher(const KnowledgeGraph& g, const MetaGraph& mg, std::set<std::vector<NodeId>>* seen)
      : kg(g), m(mg), seen_sets(seen) {
    for (const auto& t : m.role_types)
      role_type_id.push_back(static_cast<std::uint16_t>(kg.node_types().find(t)));
    for (const auto& e : m.edges)
      edge_type_id.push_back(static_cast<std::uint16_t>(kg.edge_types().find(e.edge_type)));
    assign.assign(m.role_names.size(), kNoId);
    used.assign(kg.node_count(), false);
  }

  bool edges_consistent(std::uint32_t role) const {
    for (std::size_t i = 0; i < m.edges.size(); ++i) {
      const auto& e = m.edges[i];
      if (assign[e.from] == kNoId || assign[e.to] == kNoId) continue;
      if (e.from != role && e.to != role) continue;
      if (!kg.has_edge(assign[e.from], assign[e.to], edge_type_id[i])) return false;
    }
    return true;
  }

  // Next unassigned role, preferring ones adjacent to assigned roles.
  std::uint32_t next_role() const {
    std::uint32_t fallback = kNoId;
    for (std::uint32_t r = 0; r < assign.size(); ++r) {
      if (assign[r] != kNoId) continue;
      if (fallback == kNoId) fallback = r;
      for (const auto& e : m.edges) {
        if ((e.from == r && assign[e.to] != kNoId) || (e.to == r && assign[e.from] != kNoId))
          return r;
      }
    }
    return fallback;
  }

  void record() {
    std::vector<NodeId> set(assign.begin(), assign.end());
    std::sort(set.begin(), set.end());
    seen_sets->insert(std::move(set));
  }

  void search() {
    std::uint32_t role = next_role();
    if (role == kNoId) {
      record();
      return;
    }
    // Candidates via any schema edge touching an assigned role.
    std::vector<NodeId> cands;
    bool narrowed = false;
    for (std::size_t i = 0; i < m.edges.size() && !narrowed; ++i) {
      const auto& e = m.edges[i];
      if (e.from == role && assign[e.to] != kNoId) {
        for (auto ke : kg.in_edges(assign[e.to]))
          if (kg.edge(ke).type == edge_type_id[i]) cands.push_back(kg.edge(ke).src);
        narrowed = true;
      } else if (e.to == role && assign[e.from] != kNoId) {
        for (auto ke : kg.out_edges(assign[e.from]))
          if (kg.edge(ke).type == edge_type_id[i]) cands.push_back(kg.edge(ke).dst);
        narrowed = true;
      }
    }
    if (!narrowed) {
      for (NodeId n = 0; n < kg.node_count(); ++n) cands.push_back(n);
    }
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    for (NodeId n : cands) {
      if (used[n] || kg.node_type(n) != role_type_id[role]) continue;
      assign[role] = n;
      used[n] = true;
      if (edges_consistent(role)) search();
      used[n] = false;
      assign[role] = kNoId;
    }
  }

  void run(NodeId a, NodeId b) {
    if (kg.node_type(a) != role_type_id[m.endpoint_a]) return;
    if (kg.node_type(b) != role_type_id[m.endpoint_b]) return;
    assign[m.endpoint_a] = a;
    assign[m.endpoint_b] = b;
    used[a] = used[b] = true;
    if (edges_consistent(m.endpoint_a) && edges_consistent(m.endpoint_b)) search();
    used[a] = used[b] = false;
    assign[m.endpoint_a] = assign[m.endpoint_b] = kNoId;
  }
};

}  // namespace

std::size_t count_meta_instances(const KnowledgeGraph& kg, const MetaGraph& m, NodeId x,
                                 NodeId y) {
  m.validate(kg);
  if (x >= kg.node_count() || y >= kg.node_count())
    throw InputError("count_meta_instances: node id out of range");
  if (x == y) return 0;
  std::set<std::vector<NodeId>> seen;
  Matcher ma(kg, m, &seen);
  ma.run(x, y);
  Matcher mb(kg, m, &seen);
  mb.run(y, x);
  return seen.size();
}

}  // namespace imdpp
