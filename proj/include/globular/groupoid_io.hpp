#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "globular/error.hpp"
#include "globular/groupoid.hpp"

namespace globular {

using json = nlohmann::ordered_json;

namespace io_detail {

inline const json& member(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  require(it != j.end(), ErrorKind::MalformedInput,
          where + ": missing key '" + key + "'");
  return *it;
}

inline std::string as_string(const json& j, const std::string& where) {
  require(j.is_string(), ErrorKind::MalformedInput, where + ": expected a string");
  return j.get<std::string>();
}

}  // namespace io_detail

// Parse the groupoid interchange format:
//   {objects: [names], arrows: [{name, src, tgt}],
//    compose: [[left, right, result]], identities: {object: arrow}}
// compose triples mean result = left∘right with the right factor applied
// first; inverses are inferred and validated. Errors name the offending
// entry and carry kind MalformedInput.
inline DensePtr parse_groupoid(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::MalformedInput, std::string("invalid JSON: ") + e.what());
  }
  require(j.is_object(), ErrorKind::MalformedInput,
          "groupoid document: expected a JSON object");
  for (const auto& [key, val] : j.items()) {
    (void)val;
    require(key == "objects" || key == "arrows" || key == "compose" ||
                key == "identities",
            ErrorKind::MalformedInput,
            "groupoid document: unknown key '" + key + "'");
  }

  using io_detail::as_string;
  using io_detail::member;
  DenseData d;

  const json& jobjects = member(j, "objects", "groupoid document");
  require(jobjects.is_array(), ErrorKind::MalformedInput,
          "objects: expected an array");
  std::map<std::string, std::uint32_t> obj_id;
  for (std::size_t i = 0; i < jobjects.size(); ++i) {
    const std::string name =
        as_string(jobjects[i], "objects[" + std::to_string(i) + "]");
    require(!name.empty(), ErrorKind::MalformedInput,
            "objects[" + std::to_string(i) + "]: empty name");
    require(obj_id.emplace(name, static_cast<std::uint32_t>(i)).second,
            ErrorKind::MalformedInput,
            "objects[" + std::to_string(i) + "]: duplicate object name '" +
                name + "'");
    d.objects.push_back(name);
  }
  auto resolve_obj = [&](const json& v, const std::string& where) {
    const std::string name = as_string(v, where);
    const auto it = obj_id.find(name);
    require(it != obj_id.end(), ErrorKind::MalformedInput,
            where + ": unknown object '" + name + "'");
    return it->second;
  };

  const json& jarrows = member(j, "arrows", "groupoid document");
  require(jarrows.is_array(), ErrorKind::MalformedInput,
          "arrows: expected an array");
  std::map<std::string, std::uint32_t> arr_id;
  for (std::size_t i = 0; i < jarrows.size(); ++i) {
    const std::string where = "arrows[" + std::to_string(i) + "]";
    const json& ja = jarrows[i];
    require(ja.is_object(), ErrorKind::MalformedInput,
            where + ": expected an object");
    for (const auto& [key, val] : ja.items()) {
      (void)val;
      require(key == "name" || key == "src" || key == "tgt",
              ErrorKind::MalformedInput, where + ": unknown key '" + key + "'");
    }
    DenseData::ArrowSpec spec;
    spec.name = as_string(member(ja, "name", where), where + ".name");
    require(!spec.name.empty(), ErrorKind::MalformedInput,
            where + ".name: empty name");
    spec.src = resolve_obj(member(ja, "src", where), where + ".src");
    spec.tgt = resolve_obj(member(ja, "tgt", where), where + ".tgt");
    require(arr_id.emplace(spec.name, static_cast<std::uint32_t>(i)).second,
            ErrorKind::MalformedInput,
            where + ".name: duplicate arrow name '" + spec.name + "'");
    d.arrows.push_back(std::move(spec));
  }
  auto resolve_arr = [&](const json& v, const std::string& where) {
    const std::string name = as_string(v, where);
    const auto it = arr_id.find(name);
    require(it != arr_id.end(), ErrorKind::MalformedInput,
            where + ": unknown arrow '" + name + "'");
    return it->second;
  };

  const json& jcompose = member(j, "compose", "groupoid document");
  require(jcompose.is_array(), ErrorKind::MalformedInput,
          "compose: expected an array");
  for (std::size_t i = 0; i < jcompose.size(); ++i) {
    const std::string where = "compose[" + std::to_string(i) + "]";
    const json& jt = jcompose[i];
    require(jt.is_array() && jt.size() == 3, ErrorKind::MalformedInput,
            where + ": expected a [left, right, result] triple");
    d.compose.push_back({resolve_arr(jt[0], where + "[0]"),
                         resolve_arr(jt[1], where + "[1]"),
                         resolve_arr(jt[2], where + "[2]")});
  }

  const json& jid = member(j, "identities", "groupoid document");
  require(jid.is_object(), ErrorKind::MalformedInput,
          "identities: expected an object");
  d.identities.assign(d.objects.size(), DenseGroupoid::kNone);
  for (const auto& [key, val] : jid.items()) {
    const std::string where = "identities['" + key + "']";
    const auto it = obj_id.find(key);
    require(it != obj_id.end(), ErrorKind::MalformedInput,
            where + ": unknown object '" + key + "'");
    require(d.identities[it->second] == DenseGroupoid::kNone,
            ErrorKind::MalformedInput, where + ": duplicate identity entry");
    d.identities[it->second] = resolve_arr(val, where);
  }
  for (std::size_t o = 0; o < d.objects.size(); ++o)
    require(d.identities[o] != DenseGroupoid::kNone, ErrorKind::MalformedInput,
            "identities: missing entry for object '" + d.objects[o] + "'");

  return std::make_shared<const DenseGroupoid>(std::move(d));
}

// Canonical serialization: objects and arrows sorted by name, compose
// regenerated over every composable pair and sorted by (left, right), and
// identities keyed in object order. serialize∘parse is idempotent byte for
// byte, which is what the round-trip guarantee means here.
inline json groupoid_to_json(const DenseGroupoid& g) {
  const DenseData& d = g.data();
  const std::uint32_t narr = static_cast<std::uint32_t>(d.arrows.size());

  std::vector<std::uint32_t> obj_order(d.objects.size());
  for (std::uint32_t i = 0; i < obj_order.size(); ++i) obj_order[i] = i;
  std::sort(obj_order.begin(), obj_order.end(),
            [&](std::uint32_t a, std::uint32_t b) {
              return d.objects[a] < d.objects[b];
            });
  std::vector<std::uint32_t> arr_order(narr);
  for (std::uint32_t i = 0; i < narr; ++i) arr_order[i] = i;
  std::sort(arr_order.begin(), arr_order.end(),
            [&](std::uint32_t a, std::uint32_t b) {
              return d.arrows[a].name < d.arrows[b].name;
            });

  json out = json::object();
  out["objects"] = json::array();
  for (const std::uint32_t o : obj_order) out["objects"].push_back(d.objects[o]);

  out["arrows"] = json::array();
  for (const std::uint32_t a : arr_order)
    out["arrows"].push_back({{"name", d.arrows[a].name},
                             {"src", d.objects[d.arrows[a].src]},
                             {"tgt", d.objects[d.arrows[a].tgt]}});

  std::vector<std::array<std::uint32_t, 3>> triples;
  for (std::uint32_t l = 0; l < narr; ++l)
    for (std::uint32_t r = 0; r < narr; ++r) {
      if (d.arrows[r].tgt != d.arrows[l].src) continue;
      const Arrow res =
          g.compose(g.arrow_from_id(l), g.arrow_from_id(r));
      triples.push_back({l, r, g.arrow_id(res)});
    }
  std::sort(triples.begin(), triples.end(),
            [&](const auto& x, const auto& y) {
              return std::make_pair(d.arrows[x[0]].name, d.arrows[x[1]].name) <
                     std::make_pair(d.arrows[y[0]].name, d.arrows[y[1]].name);
            });
  out["compose"] = json::array();
  for (const auto& t : triples)
    out["compose"].push_back({d.arrows[t[0]].name, d.arrows[t[1]].name,
                              d.arrows[t[2]].name});

  out["identities"] = json::object();
  for (const std::uint32_t o : obj_order)
    out["identities"][d.objects[o]] = d.arrows[d.identities[o]].name;
  return out;
}

inline std::string serialize_groupoid(const DenseGroupoid& g) {
  return groupoid_to_json(g).dump(2) + "\n";
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::MalformedInput,
          "cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline DensePtr load_groupoid_file(const std::string& path) {
  return parse_groupoid(read_text_file(path));
}

}  // namespace globular
