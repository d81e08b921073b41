#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "imdpp/common.hpp"

namespace imdpp {

// Typed directed knowledge graph over catalog entities (items, features,
// brands, ...). Node and edge types are interned strings so datasets can
// bring their own vocabulary.
class KnowledgeGraph {
 public:
  struct Edge {
    NodeId src;
    NodeId dst;
    std::uint16_t type;
  };

  NodeId add_node(const std::string& name, const std::string& type);
  void add_edge(const std::string& src, const std::string& dst, const std::string& edge_type);
  void finalize();

  std::uint32_t node_count() const { return nodes_.size(); }
  const Interner& nodes() const { return nodes_; }
  const Interner& node_types() const { return node_types_; }
  const Interner& edge_types() const { return edge_types_; }
  std::uint16_t node_type(NodeId n) const { return node_type_[n]; }
  const std::vector<Edge>& edges() const { return edges_; }

  // Edges indexed for the matcher: per node, (edge id) lists.
  const std::vector<std::uint32_t>& out_edges(NodeId n) const { return out_[n]; }
  const std::vector<std::uint32_t>& in_edges(NodeId n) const { return in_[n]; }
  const Edge& edge(std::uint32_t e) const { return edges_[e]; }

  bool has_edge(NodeId src, NodeId dst, std::uint16_t type) const;

 private:
  Interner nodes_, node_types_, edge_types_;
  std::vector<std::uint16_t> node_type_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::uint32_t>> out_, in_;
  bool finalized_ = false;
};

enum class Relationship : std::uint8_t { kComplementary = 0, kSubstitutable = 1 };

// Small typed schema graph. An instance in the knowledge graph is a
// type-respecting, direction-respecting, node-injective embedding; the two
// endpoint roles bind the item pair whose relationship the schema defines.
struct MetaGraph {
  struct SchemaEdge {
    std::uint32_t from;  // role index
    std::uint32_t to;
    std::string edge_type;
  };
  std::string name;
  Relationship relationship = Relationship::kComplementary;
  std::vector<std::string> role_names;
  std::vector<std::string> role_types;
  std::vector<SchemaEdge> edges;
  std::uint32_t endpoint_a = 0;  // role indices of the bound item pair
  std::uint32_t endpoint_b = 0;

  // Throws SchemaError when roles/edges are inconsistent or the graph lacks
  // a referenced type.
  void validate(const KnowledgeGraph& kg) const;
};

// Number of distinct instances of `m` whose endpoints bind {x, y}. Instances
// that bind the same node set (automorphic re-labelings) count once. Order of
// x and y does not matter.
std::size_t count_meta_instances(const KnowledgeGraph& kg, const MetaGraph& m, NodeId x, NodeId y);

}  // namespace imdpp
