#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "contcalc/container.hpp"

namespace contcalc {

using Json = nlohmann::ordered_json;

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), 1, static_cast<int>(e.byte));
  }
}

// ---------------------------------------------------------------------------
// Groupoids
//
// {"objects": [...], "morphisms": [{"id","src","dst"}], "identity": {obj: mor},
//  "inverse": {mor: mor}, "compose": {g: {f: g∘f}}}

inline Json groupoid_to_json(const FinGroupoid& g) {
  Json j;
  j["objects"] = g.object_names();
  Json mors = Json::array();
  for (int m = 0; m < g.morphism_count(); ++m)
    mors.push_back({{"id", g.morphism_name(m)}, {"src", g.object_name(g.src(m))}, {"dst", g.object_name(g.dst(m))}});
  j["morphisms"] = std::move(mors);
  Json ids = Json::object();
  for (int a = 0; a < g.object_count(); ++a) ids[g.object_name(a)] = g.morphism_name(g.identity(a));
  j["identity"] = std::move(ids);
  Json compose = Json::object();
  for (int h = 0; h < g.morphism_count(); ++h) {
    Json row = Json::object();
    for (int f = 0; f < g.morphism_count(); ++f)
      if (g.dst(f) == g.src(h)) row[g.morphism_name(f)] = g.morphism_name(g.compose(h, f));
    compose[g.morphism_name(h)] = std::move(row);
  }
  j["compose"] = std::move(compose);
  Json inv = Json::object();
  for (int m = 0; m < g.morphism_count(); ++m) inv[g.morphism_name(m)] = g.morphism_name(g.inverse(m));
  j["inverse"] = std::move(inv);
  return j;
}

namespace detail {

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline int lookup(const std::map<std::string, int>& ids, const Json& name, const char* what) {
  if (!name.is_string()) throw Error(std::string(what) + " must be named by a string");
  auto it = ids.find(name.get<std::string>());
  if (it == ids.end()) throw UnknownId(std::string("unknown ") + what + " '" + name.get<std::string>() + "'");
  return it->second;
}

} // namespace detail

inline FinGroupoid groupoid_from_json(const Json& j, const Limits& limits = default_limits()) {
  using detail::field;
  using detail::lookup;
  GroupoidBuilder b;
  std::map<std::string, int> objs, mors;
  for (const auto& o : field(j, "objects")) {
    const auto name = o.get<std::string>();
    if (!objs.emplace(name, b.add_object(name)).second) throw Error("duplicate object '" + name + "'");
  }
  for (const auto& m : field(j, "morphisms")) {
    const auto name = field(m, "id").get<std::string>();
    const int k = b.add_morphism(name, lookup(objs, field(m, "src"), "object"), lookup(objs, field(m, "dst"), "object"));
    if (!mors.emplace(name, k).second) throw Error("duplicate morphism '" + name + "'");
  }
  for (const auto& [o, m] : field(j, "identity").items())
    b.set_identity(lookup(objs, Json(o), "object"), lookup(mors, m, "morphism"));
  for (const auto& [m, inv] : field(j, "inverse").items())
    b.set_inverse(lookup(mors, Json(m), "morphism"), lookup(mors, inv, "morphism"));
  for (const auto& [h, row] : field(j, "compose").items())
    for (const auto& [f, hf] : row.items())
      b.set_compose(lookup(mors, Json(h), "morphism"), lookup(mors, Json(f), "morphism"), lookup(mors, hf, "morphism"));
  auto g = b.build();
  check_size(g, limits);
  auto v = validate_groupoid(g);
  if (!v.ok()) throw PreconditionError("invalid groupoid: " + v.violations.front());
  return g;
}

inline FinGroupoid load_groupoid(const std::filesystem::path& path, const Limits& limits = default_limits()) {
  return groupoid_from_json(parse_json(read_text(path)), limits);
}

// ---------------------------------------------------------------------------
// Containers
//
// {"indices": [...], "shapes": <groupoid>, "positions": {index: {"fibers": {shape: <groupoid>},
//  "transport": {morphism: {"objects": [...], "morphisms": [...]}}}}}
// Any groupoid may instead be {"file": "path"}, resolved against the containing file.

inline Json functor_tables(const GFunctor& f) { return {{"objects", f.object_map}, {"morphisms", f.morphism_map}}; }

inline Json container_to_json(const Container& c) {
  Json j;
  j["indices"] = c.indices;
  j["shapes"] = groupoid_to_json(*c.shapes);
  Json pos = Json::object();
  for (int i = 0; i < c.index_count(); ++i) {
    Json fibers = Json::object(), transport = Json::object();
    for (int s = 0; s < c.shape_count(); ++s) fibers[c.shapes->object_name(s)] = groupoid_to_json(c.fiber(i, s));
    for (int m = 0; m < c.shapes->morphism_count(); ++m)
      transport[c.shapes->morphism_name(m)] = functor_tables(c.positions[i].along(m));
    pos[c.indices[i]] = {{"fibers", std::move(fibers)}, {"transport", std::move(transport)}};
  }
  j["positions"] = std::move(pos);
  return j;
}

inline GroupoidRef groupoid_or_file(const Json& j, const std::filesystem::path& dir, const Limits& limits) {
  if (j.is_object() && j.contains("file")) return share(load_groupoid(dir / j.at("file").get<std::string>(), limits));
  return share(groupoid_from_json(j, limits));
}

inline Container container_from_json(const Json& j, const std::filesystem::path& dir = ".",
                                      const Limits& limits = default_limits()) {
  using detail::field;
  Container c{field(j, "indices").get<std::vector<std::string>>(), groupoid_or_file(field(j, "shapes"), dir, limits), {}};
  const auto& sh = *c.shapes;
  const auto& pos = field(j, "positions");
  for (const auto& index : c.indices) {
    const auto& entry = field(pos, index.c_str());
    const auto& fj = field(entry, "fibers");
    const auto& tj = field(entry, "transport");
    std::vector<GroupoidRef> fibers;
    for (int s = 0; s < sh.object_count(); ++s) fibers.push_back(groupoid_or_file(field(fj, sh.object_name(s).c_str()), dir, limits));
    GFamily fam{c.shapes, fibers, {}};
    for (int m = 0; m < sh.morphism_count(); ++m) {
      const auto& t = field(tj, sh.morphism_name(m).c_str());
      fam.transport.push_back(GFunctor{fibers[sh.src(m)], fibers[sh.dst(m)], field(t, "objects").get<std::vector<int>>(),
                                       field(t, "morphisms").get<std::vector<int>>()});
    }
    c.positions.push_back(std::move(fam));
  }
  auto v = validate_container(c);
  if (!v.ok()) throw PreconditionError("invalid container: " + v.violations.front());
  return c;
}

inline Container load_container(const std::filesystem::path& path, const Limits& limits = default_limits()) {
  return container_from_json(parse_json(read_text(path)), path.parent_path(), limits);
}

} // namespace contcalc
