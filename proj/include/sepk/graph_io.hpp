#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <unordered_set>

#include <json.hpp>

#include "sepk/error.hpp"
#include "sepk/graph.hpp"

namespace sepk {

using ordered_json = nlohmann::ordered_json;

inline ordered_json to_json(const SeparatedGraph& g) {
    ordered_json out;
    out["vertices"] = g.vertices;
    auto edges = ordered_json::array();
    for (const auto& e : g.edges) {
        ordered_json je;
        je["id"] = e.id;
        je["src"] = e.src;
        je["dst"] = e.dst;
        edges.push_back(std::move(je));
    }
    out["edges"] = std::move(edges);
    ordered_json sep = ordered_json::object();
    auto write_groups = [](const std::vector<Group>& groups) {
        auto arr = ordered_json::array();
        for (const auto& grp : groups) {
            if (grp.name.empty()) {
                arr.push_back(grp.edges);
            } else {
                ordered_json jg;
                jg["name"] = grp.name;
                jg["edges"] = grp.edges;
                arr.push_back(std::move(jg));
            }
        }
        return arr;
    };
    std::unordered_set<std::string> written;
    for (const auto& v : g.vertices) {
        auto it = g.separation.find(v);
        if (it == g.separation.end() || it->second.empty()) continue;
        sep[v] = write_groups(it->second);
        written.insert(v);
    }
    // keys that do not name a vertex only occur in invalid graphs
    for (const auto& [v, groups] : g.separation)
        if (!written.count(v) && !groups.empty()) sep[v] = write_groups(groups);
    out["separation"] = std::move(sep);
    if (g.bipartite) {
        ordered_json b;
        b["layer0"] = g.bipartite->layer0;
        b["layer1"] = g.bipartite->layer1;
        out["bipartite"] = std::move(b);
    }
    return out;
}

inline std::string serialize(const SeparatedGraph& g) { return to_json(g).dump(2) + "\n"; }

namespace detail {

inline std::vector<std::string> string_list(const ordered_json& j, const std::string& where) {
    if (!j.is_array()) throw Error(ErrorKind::Parse, where + ": expected a list of strings");
    std::vector<std::string> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_string())
            throw Error(ErrorKind::Parse, where + "[" + std::to_string(i) + "]: expected a string");
        out.push_back(j[i].get<std::string>());
    }
    return out;
}

inline std::string string_field(const ordered_json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string())
        throw Error(ErrorKind::Parse, where + ": missing string field '" + key + "'");
    return it->get<std::string>();
}

} // namespace detail

inline SeparatedGraph from_json(const ordered_json& j) {
    using detail::string_field;
    using detail::string_list;
    if (!j.is_object()) throw Error(ErrorKind::Parse, "top level: expected a map");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto& k = it.key();
        if (k != "vertices" && k != "edges" && k != "separation" && k != "bipartite")
            throw Error(ErrorKind::Parse, "top level: unknown key '" + k + "'");
    }
    if (!j.contains("vertices")) throw Error(ErrorKind::Parse, "top level: missing 'vertices'");
    if (!j.contains("edges")) throw Error(ErrorKind::Parse, "top level: missing 'edges'");

    SeparatedGraph g;
    g.vertices = string_list(j["vertices"], "vertices");
    std::unordered_set<std::string> vset;
    for (std::size_t i = 0; i < g.vertices.size(); ++i)
        if (!vset.insert(g.vertices[i]).second)
            throw Error(ErrorKind::DuplicateId, "vertices[" + std::to_string(i) + "]: '" + g.vertices[i] + "'");

    const auto& je = j["edges"];
    if (!je.is_array()) throw Error(ErrorKind::Parse, "edges: expected a list");
    std::unordered_set<std::string> eset;
    for (std::size_t i = 0; i < je.size(); ++i) {
        const std::string where = "edges[" + std::to_string(i) + "]";
        if (!je[i].is_object()) throw Error(ErrorKind::Parse, where + ": expected a map");
        Edge e{string_field(je[i], "id", where), string_field(je[i], "src", where), string_field(je[i], "dst", where)};
        if (!eset.insert(e.id).second) throw Error(ErrorKind::DuplicateId, where + ": edge '" + e.id + "'");
        if (!vset.count(e.src))
            throw Error(ErrorKind::DanglingEndpoint, where + ": source '" + e.src + "' is not a vertex");
        if (!vset.count(e.dst))
            throw Error(ErrorKind::DanglingEndpoint, where + ": range '" + e.dst + "' is not a vertex");
        g.edges.push_back(std::move(e));
    }

    if (j.contains("separation")) {
        const auto& js = j["separation"];
        if (!js.is_object()) throw Error(ErrorKind::Parse, "separation: expected a map");
        for (auto it = js.begin(); it != js.end(); ++it) {
            const std::string where = "separation." + it.key();
            if (!vset.count(it.key())) throw Error(ErrorKind::DanglingEndpoint, where + ": not a vertex");
            if (!it->is_array()) throw Error(ErrorKind::Parse, where + ": expected a list of groups");
            std::vector<Group> groups;
            for (std::size_t k = 0; k < it->size(); ++k) {
                const auto& jg = (*it)[k];
                const std::string gw = where + "[" + std::to_string(k) + "]";
                Group grp;
                if (jg.is_object()) {
                    grp.name = string_field(jg, "name", gw);
                    if (!jg.contains("edges")) throw Error(ErrorKind::Parse, gw + ": missing 'edges'");
                    grp.edges = string_list(jg["edges"], gw + ".edges");
                } else {
                    grp.edges = string_list(jg, gw);
                }
                for (const auto& id : grp.edges)
                    if (!eset.count(id)) throw Error(ErrorKind::DanglingEndpoint, gw + ": unknown edge '" + id + "'");
                groups.push_back(std::move(grp));
            }
            if (!groups.empty()) g.separation[it.key()] = std::move(groups);
        }
    }

    if (j.contains("bipartite")) {
        const auto& jb = j["bipartite"];
        if (!jb.is_object() || !jb.contains("layer0") || !jb.contains("layer1"))
            throw Error(ErrorKind::Parse, "bipartite: expected {layer0, layer1}");
        BipartiteSplit split{string_list(jb["layer0"], "bipartite.layer0"),
                             string_list(jb["layer1"], "bipartite.layer1")};
        for (const auto* layer : {&split.layer0, &split.layer1})
            for (const auto& v : *layer)
                if (!vset.count(v)) throw Error(ErrorKind::DanglingEndpoint, "bipartite: unknown vertex '" + v + "'");
        g.bipartite = std::move(split);
    }
    return g;
}

inline SeparatedGraph parse(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::Parse, "byte " + std::to_string(e.byte) + ": " + e.what());
    }
    return from_json(j);
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Parse, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline SeparatedGraph load_graph(const std::string& path) { return parse(read_file(path)); }

} // namespace sepk
