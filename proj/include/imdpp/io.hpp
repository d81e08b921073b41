#pragma once

#include <string>
#include <vector>

#include "imdpp/diffusion.hpp"
#include "imdpp/world.hpp"

namespace imdpp {

// Plain-text dataset formats. TSV for graphs (one record per line), CSV for
// catalog tables, JSON for meta-graph schemas. Loaders throw InputError (or
// SchemaError for meta-graphs) naming file and line.

SocialNetwork load_social_tsv(const std::string& path);        // src dst strength
void write_social_tsv(const SocialNetwork& sn, const std::string& path);

void load_kg_nodes_tsv(KnowledgeGraph& kg, const std::string& path);  // id type
void load_kg_edges_tsv(KnowledgeGraph& kg, const std::string& path);  // src dst edge_type
void write_kg_nodes_tsv(const KnowledgeGraph& kg, const std::string& path);
void write_kg_edges_tsv(const KnowledgeGraph& kg, const std::string& path);

std::vector<MetaGraph> load_metas_json(const std::string& path);
void write_metas_json(const std::vector<MetaGraph>& metas, const std::string& path);

void load_items_csv(ItemCatalog& catalog, const std::string& path);  // item,importance
void write_items_csv(const ItemCatalog& catalog, const std::string& path);

// user,item,cost; users/items must already exist.
void load_costs_csv(ItemCatalog& catalog, const SocialNetwork& sn, const std::string& path);
void write_costs_csv(const ItemCatalog& catalog, const SocialNetwork& sn,
                     const std::string& path);

// user,item,preference; absent pairs default to 0.
std::vector<std::vector<double>> load_prefs_csv(const SocialNetwork& sn,
                                                const ItemCatalog& catalog,
                                                const std::string& path);
void write_prefs_csv(const std::vector<std::vector<double>>& pref, const SocialNetwork& sn,
                     const ItemCatalog& catalog, const std::string& path);

// user,item,t,cost
void write_seed_csv(const World& w, const SeedGroup& s, const std::string& path);
SeedGroup load_seed_csv(const World& w, const std::string& path);

// sigma,stderr,samples,seed
void write_estimate_csv(const Estimate& e, const std::string& path);

// Loads a dataset directory: social.tsv and items.csv are required;
// kg_nodes.tsv + kg_edges.tsv + metas.json, costs.csv and prefs.csv are
// picked up when present. Campaign parameters and finalize() are the
// caller's job.
World load_world_dir(const std::string& dir);

// Writes the dataset files of a world into a directory (created if needed).
void write_world_dir(const World& w, const std::string& dir);

}  // namespace imdpp
