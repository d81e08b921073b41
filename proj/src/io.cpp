#include "imdpp/io.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <functional>

#include "json.hpp"

namespace fs = std::filesystem;

namespace imdpp {

namespace {

std::string where(const std::string& path, std::size_t line) {
  return path + ":" + std::to_string(line);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

bool skippable(const std::string& line) {
  for (char c : line)
    if (!std::isspace(static_cast<unsigned char>(c))) return c == '#';
  return true;
}

double parse_double(const std::string& s, const std::string& ctx) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError(ctx + ": not a number: '" + s + "'");
  }
}

int parse_int(const std::string& s, const std::string& ctx) {
  try {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError(ctx + ": not an integer: '" + s + "'");
  }
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open file for writing: " + path);
  return out;
}

// Each line handed to fn with its field vector; blank and # lines skipped.
void for_each_record(const std::string& path, char sep, std::size_t fields,
                     const std::function<void(const std::vector<std::string>&,
                                              const std::string&)>& fn) {
  std::ifstream in = open_in(path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (skippable(line)) continue;
    auto parts = split(line, sep);
    if (parts.size() != fields)
      throw InputError(where(path, lineno) + ": expected " + std::to_string(fields) +
                       " fields, got " + std::to_string(parts.size()));
    fn(parts, where(path, lineno));
  }
}

}  // namespace

SocialNetwork load_social_tsv(const std::string& path) {
  SocialNetwork sn;
  for_each_record(path, '\t', 3, [&](const auto& f, const std::string& ctx) {
    sn.add_edge(f[0], f[1], parse_double(f[2], ctx));
  });
  sn.finalize();
  return sn;
}

void write_social_tsv(const SocialNetwork& sn, const std::string& path) {
  std::ofstream out = open_out(path);
  for (const auto& e : sn.edges())
    out << sn.users().name(e.src) << '\t' << sn.users().name(e.dst) << '\t' << fmt6(e.strength)
        << '\n';
}

void load_kg_nodes_tsv(KnowledgeGraph& kg, const std::string& path) {
  for_each_record(path, '\t', 2,
                  [&](const auto& f, const std::string&) { kg.add_node(f[0], f[1]); });
}

void load_kg_edges_tsv(KnowledgeGraph& kg, const std::string& path) {
  for_each_record(path, '\t', 3,
                  [&](const auto& f, const std::string&) { kg.add_edge(f[0], f[1], f[2]); });
  kg.finalize();
}

void write_kg_nodes_tsv(const KnowledgeGraph& kg, const std::string& path) {
  std::ofstream out = open_out(path);
  for (NodeId n = 0; n < kg.node_count(); ++n)
    out << kg.nodes().name(n) << '\t' << kg.node_types().name(kg.node_type(n)) << '\n';
}

void write_kg_edges_tsv(const KnowledgeGraph& kg, const std::string& path) {
  std::ofstream out = open_out(path);
  for (const auto& e : kg.edges())
    out << kg.nodes().name(e.src) << '\t' << kg.nodes().name(e.dst) << '\t'
        << kg.edge_types().name(e.type) << '\n';
}

std::vector<MetaGraph> load_metas_json(const std::string& path) {
  std::ifstream in = open_in(path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
  if (!doc.is_array()) throw SchemaError(path + ": expected a top-level array of meta-graphs");
  std::vector<MetaGraph> metas;
  for (const auto& jm : doc) {
    MetaGraph m;
    try {
      m.name = jm.at("name").get<std::string>();
      std::string rel = jm.at("relationship").get<std::string>();
      if (rel == "complementary") {
        m.relationship = Relationship::kComplementary;
      } else if (rel == "substitutable") {
        m.relationship = Relationship::kSubstitutable;
      } else {
        throw SchemaError(path + ": meta-graph '" + m.name + "': unknown relationship '" +
                          rel + "'");
      }
      for (const auto& jn : jm.at("nodes")) {
        m.role_names.push_back(jn.at("role").get<std::string>());
        m.role_types.push_back(jn.at("type").get<std::string>());
      }
      auto role_index = [&](const std::string& r) {
        auto it = std::find(m.role_names.begin(), m.role_names.end(), r);
        if (it == m.role_names.end())
          throw SchemaError(path + ": meta-graph '" + m.name + "': unknown role '" + r + "'");
        return static_cast<std::uint32_t>(it - m.role_names.begin());
      };
      for (const auto& je : jm.at("edges"))
        m.edges.push_back({role_index(je.at("from").get<std::string>()),
                           role_index(je.at("to").get<std::string>()),
                           je.at("edge_type").get<std::string>()});
      const auto& ep = jm.at("endpoints");
      if (!ep.is_array() || ep.size() != 2)
        throw SchemaError(path + ": meta-graph '" + m.name + "': endpoints must name 2 roles");
      m.endpoint_a = role_index(ep[0].get<std::string>());
      m.endpoint_b = role_index(ep[1].get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError(path + ": malformed meta-graph entry: " + e.what());
    }
    metas.push_back(std::move(m));
  }
  return metas;
}

void write_metas_json(const std::vector<MetaGraph>& metas, const std::string& path) {
  nlohmann::json doc = nlohmann::json::array();
  for (const MetaGraph& m : metas) {
    nlohmann::json jm;
    jm["name"] = m.name;
    jm["relationship"] =
        m.relationship == Relationship::kComplementary ? "complementary" : "substitutable";
    jm["nodes"] = nlohmann::json::array();
    for (std::size_t i = 0; i < m.role_names.size(); ++i)
      jm["nodes"].push_back({{"role", m.role_names[i]}, {"type", m.role_types[i]}});
    jm["edges"] = nlohmann::json::array();
    for (const auto& e : m.edges)
      jm["edges"].push_back({{"from", m.role_names[e.from]},
                             {"to", m.role_names[e.to]},
                             {"edge_type", e.edge_type}});
    jm["endpoints"] = {m.role_names[m.endpoint_a], m.role_names[m.endpoint_b]};
    doc.push_back(std::move(jm));
  }
  open_out(path) << doc.dump(2) << '\n';
}

void load_items_csv(ItemCatalog& catalog, const std::string& path) {
  for_each_record(path, ',', 2, [&](const auto& f, const std::string& ctx) {
    catalog.add_item(f[0], parse_double(f[1], ctx));
  });
}

void write_items_csv(const ItemCatalog& catalog, const std::string& path) {
  std::ofstream out = open_out(path);
  for (ItemId x = 0; x < catalog.item_count(); ++x)
    out << catalog.items().name(x) << ',' << fmt6(catalog.importance(x)) << '\n';
}

namespace {

UserId user_of(const SocialNetwork& sn, const std::string& name, const std::string& ctx) {
  UserId u = sn.users().find(name);
  if (u == kNoId) throw InputError(ctx + ": unknown user '" + name + "'");
  return u;
}

ItemId item_of(const ItemCatalog& catalog, const std::string& name, const std::string& ctx) {
  ItemId x = catalog.items().find(name);
  if (x == kNoId) throw InputError(ctx + ": unknown item '" + name + "'");
  return x;
}

}  // namespace

void load_costs_csv(ItemCatalog& catalog, const SocialNetwork& sn, const std::string& path) {
  for_each_record(path, ',', 3, [&](const auto& f, const std::string& ctx) {
    catalog.set_cost(user_of(sn, f[0], ctx), item_of(catalog, f[1], ctx),
                     parse_double(f[2], ctx));
  });
}

void write_costs_csv(const ItemCatalog& catalog, const SocialNetwork& sn,
                     const std::string& path) {
  std::ofstream out = open_out(path);
  for (UserId u = 0; u < sn.user_count(); ++u)
    for (ItemId x = 0; x < catalog.item_count(); ++x)
      if (catalog.has_cost(u, x))
        out << sn.users().name(u) << ',' << catalog.items().name(x) << ','
            << fmt6(catalog.cost(u, x)) << '\n';
}

std::vector<std::vector<double>> load_prefs_csv(const SocialNetwork& sn,
                                                const ItemCatalog& catalog,
                                                const std::string& path) {
  std::vector<std::vector<double>> pref(sn.user_count(),
                                        std::vector<double>(catalog.item_count(), 0.0));
  for_each_record(path, ',', 3, [&](const auto& f, const std::string& ctx) {
    double v = parse_double(f[2], ctx);
    if (v < 0.0 || v > 1.0) throw InputError(ctx + ": preference outside [0,1]: " + f[2]);
    pref[user_of(sn, f[0], ctx)][item_of(catalog, f[1], ctx)] = v;
  });
  return pref;
}

void write_prefs_csv(const std::vector<std::vector<double>>& pref, const SocialNetwork& sn,
                     const ItemCatalog& catalog, const std::string& path) {
  std::ofstream out = open_out(path);
  for (UserId u = 0; u < sn.user_count(); ++u)
    for (ItemId x = 0; x < catalog.item_count(); ++x)
      if (pref[u][x] != 0.0)
        out << sn.users().name(u) << ',' << catalog.items().name(x) << ',' << fmt6(pref[u][x])
            << '\n';
}

void write_seed_csv(const World& w, const SeedGroup& s, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "user,item,t,cost\n";
  for (const Seed& sd : s.seeds)
    out << w.sn.users().name(sd.u) << ',' << w.catalog.items().name(sd.x) << ',' << sd.t << ','
        << fmt6(w.catalog.cost(sd.u, sd.x)) << '\n';
}

SeedGroup load_seed_csv(const World& w, const std::string& path) {
  std::vector<Seed> seeds;
  std::ifstream in = open_in(path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (skippable(line) || (lineno == 1 && line.rfind("user,", 0) == 0)) continue;
    auto f = split(line, ',');
    if (f.size() != 4)
      throw InputError(where(path, lineno) + ": expected 4 fields, got " +
                       std::to_string(f.size()));
    std::string ctx = where(path, lineno);
    seeds.push_back({user_of(w.sn, f[0], ctx), item_of(w.catalog, f[1], ctx),
                     parse_int(f[2], ctx)});
  }
  return SeedGroup::of(w, std::move(seeds));
}

void write_estimate_csv(const Estimate& e, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "sigma,stderr,samples,seed\n";
  out << fmt6(e.sigma) << ',' << fmt6(e.stderr_) << ',' << e.samples << ',' << e.seed << '\n';
}

World load_world_dir(const std::string& dir) {
  fs::path base(dir);
  auto need = [&](const char* f) {
    fs::path p = base / f;
    if (!fs::exists(p)) throw InputError("dataset directory " + dir + " is missing " + f);
    return p.string();
  };
  auto maybe = [&](const char* f) -> std::string {
    fs::path p = base / f;
    return fs::exists(p) ? p.string() : std::string();
  };

  World w;
  w.sn = load_social_tsv(need("social.tsv"));
  load_items_csv(w.catalog, need("items.csv"));

  std::string nodes = maybe("kg_nodes.tsv"), edges = maybe("kg_edges.tsv"),
              metas = maybe("metas.json");
  if (!nodes.empty()) {
    load_kg_nodes_tsv(w.kg, nodes);
    if (edges.empty()) throw InputError("dataset directory " + dir + " has kg_nodes.tsv but no kg_edges.tsv");
    load_kg_edges_tsv(w.kg, edges);
    if (metas.empty()) throw InputError("dataset directory " + dir + " has a knowledge graph but no metas.json");
    w.metas = load_metas_json(metas);
  }

  std::string prefs = maybe("prefs.csv");
  if (!prefs.empty()) w.pref0 = load_prefs_csv(w.sn, w.catalog, prefs);

  std::string costs = maybe("costs.csv");
  if (!costs.empty()) load_costs_csv(w.catalog, w.sn, costs);
  return w;
}

void write_world_dir(const World& w, const std::string& dir) {
  fs::create_directories(dir);
  fs::path base(dir);
  write_social_tsv(w.sn, (base / "social.tsv").string());
  write_items_csv(w.catalog, (base / "items.csv").string());
  if (w.kg.node_count() > 0) {
    write_kg_nodes_tsv(w.kg, (base / "kg_nodes.tsv").string());
    write_kg_edges_tsv(w.kg, (base / "kg_edges.tsv").string());
    write_metas_json(w.metas, (base / "metas.json").string());
  }
  if (!w.pref0.empty()) write_prefs_csv(w.pref0, w.sn, w.catalog, (base / "prefs.csv").string());
  write_costs_csv(w.catalog, w.sn, (base / "costs.csv").string());
}

}  // namespace imdpp
