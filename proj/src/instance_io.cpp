#include "reconf/instance_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "reconf/error.hpp"

namespace reconf {
namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& where, const std::string& what) { throw Error(where + ": " + what); }

const Json& require(const Json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

std::int64_t as_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "malformed field, expected integer");
  return j.get<std::int64_t>();
}

std::uint32_t as_alphabet(const Json& j, const std::string& where) {
  const std::int64_t a = as_int(j, where);
  if (a <= 0 || a > std::int64_t{1} << 31) fail(where, "malformed field, alphabet must be positive");
  return static_cast<std::uint32_t>(a);
}

std::size_t vertex_ref(const ConstraintGraph& g, const Json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "malformed field, expected vertex id string");
  const auto v = g.find_vertex(j.get<std::string>());
  if (!v) fail(where, "unknown vertex id '" + j.get<std::string>() + "'");
  return *v;
}

Assignment read_assignment(const ConstraintGraph& g, const Json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "malformed field, expected object of vertex -> symbol");
  Assignment psi(g.vertex_count());
  for (const auto& [id, sym] : j.items()) {
    const auto v = g.find_vertex(id);
    if (!v) fail(where, "unknown vertex id '" + id + "'");
    const std::int64_t s = as_int(sym, where + "." + id);
    if (s < 0 || s >= static_cast<std::int64_t>(g.alphabet_of(*v))) {
      fail(where + "." + id, "symbol out of range: " + std::to_string(s));
    }
    psi[*v] = static_cast<Symbol>(s);
  }
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (psi[v] == kUnassigned) fail(where, "incomplete assignment, no value for '" + g.vertex_id(v) + "'");
  }
  return psi;
}

OrderedJson write_assignment(const ConstraintGraph& g, const Assignment& psi) {
  OrderedJson out = OrderedJson::object();
  for (std::size_t v = 0; v < g.vertex_count(); ++v) out[g.vertex_id(v)] = psi[v];
  return out;
}

}  // namespace

std::string serialize(const ReconfInstance& instance) {
  const ConstraintGraph& g = instance.graph;
  OrderedJson out;
  out["arity"] = g.arity();
  out["alphabet"] = g.alphabet();
  OrderedJson vertices = OrderedJson::array();
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (const auto a = g.alphabet_override(v)) {
      vertices.push_back(OrderedJson{{"id", g.vertex_id(v)}, {"alphabet", *a}});
    } else {
      vertices.push_back(g.vertex_id(v));
    }
  }
  out["vertices"] = std::move(vertices);
  OrderedJson edges = OrderedJson::array();
  for (const Hyperedge& h : g.edges()) {
    OrderedJson ids = OrderedJson::array();
    for (const std::size_t v : h.vertices) ids.push_back(g.vertex_id(v));
    OrderedJson accept = OrderedJson::array();
    for (const auto& t : h.constraint->tuples()) accept.push_back(t);
    edges.push_back(OrderedJson{{"vertices", std::move(ids)}, {"accept", std::move(accept)}});
  }
  out["edges"] = std::move(edges);
  out["psi_ini"] = write_assignment(g, instance.psi_ini);
  out["psi_tar"] = write_assignment(g, instance.psi_tar);
  return out.dump(1) + "\n";
}

ReconfInstance deserialize(std::string_view text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(std::string("malformed instance: ") + e.what());
  }
  if (!root.is_object()) fail("instance", "malformed field, expected object");

  const std::int64_t arity = as_int(require(root, "arity", "instance"), "arity");
  if (arity <= 0) fail("arity", "malformed field, must be positive");
  ConstraintGraph g(static_cast<std::size_t>(arity), as_alphabet(require(root, "alphabet", "instance"), "alphabet"));

  const Json& vertices = require(root, "vertices", "instance");
  if (!vertices.is_array()) fail("vertices", "malformed field, expected list");
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const std::string where = "vertices[" + std::to_string(i) + "]";
    const Json& vj = vertices[i];
    try {
      if (vj.is_string()) {
        g.add_vertex(vj.get<std::string>());
      } else if (vj.is_object()) {
        const Json& id = require(vj, "id", where);
        if (!id.is_string()) fail(where + ".id", "malformed field, expected string");
        std::optional<std::uint32_t> alpha;
        if (vj.contains("alphabet")) alpha = as_alphabet(vj["alphabet"], where + ".alphabet");
        g.add_vertex(id.get<std::string>(), alpha);
      } else {
        fail(where, "malformed field, expected id or {id, alphabet}");
      }
    } catch (const Error& e) {
      if (std::string(e.what()).rfind(where, 0) == 0) throw;
      fail(where, e.what());
    }
  }

  const Json& edges = require(root, "edges", "instance");
  if (!edges.is_array()) fail("edges", "malformed field, expected list");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string where = "edges[" + std::to_string(i) + "]";
    const Json& ej = edges[i];
    if (!ej.is_object()) fail(where, "malformed field, expected object");
    const Json& ids = require(ej, "vertices", where);
    if (!ids.is_array()) fail(where + ".vertices", "malformed field, expected list");
    if (ids.size() != g.arity()) fail(where + ".vertices", "arity mismatch");
    std::vector<std::size_t> vs;
    for (std::size_t k = 0; k < ids.size(); ++k) {
      vs.push_back(vertex_ref(g, ids[k], where + ".vertices[" + std::to_string(k) + "]"));
    }
    const Json& accept = require(ej, "accept", where);
    if (!accept.is_array()) fail(where + ".accept", "malformed field, expected list");
    std::vector<std::vector<Symbol>> tuples;
    tuples.reserve(accept.size());
    for (std::size_t k = 0; k < accept.size(); ++k) {
      const std::string tw = where + ".accept[" + std::to_string(k) + "]";
      const Json& tj = accept[k];
      if (!tj.is_array()) fail(tw, "malformed field, expected tuple");
      if (tj.size() != g.arity()) fail(tw, "arity mismatch");
      std::vector<Symbol> t;
      for (std::size_t c = 0; c < tj.size(); ++c) {
        const std::int64_t s = as_int(tj[c], tw);
        if (s < 0 || s >= static_cast<std::int64_t>(g.alphabet_of(vs[c]))) {
          fail(tw, "symbol out of range: " + std::to_string(s));
        }
        t.push_back(static_cast<Symbol>(s));
      }
      tuples.push_back(std::move(t));
    }
    g.add_edge(std::move(vs), tuples);
  }

  for (const char* key : {"psi_ini", "psi_tar"}) {
    if (!root.contains(key)) fail(key, "missing endpoint");
  }
  Assignment ini = read_assignment(g, root["psi_ini"], "psi_ini");
  Assignment tar = read_assignment(g, root["psi_tar"], "psi_tar");
  return ReconfInstance{std::move(g), std::move(ini), std::move(tar)};
}

std::string serialize_sequence(const ConstraintGraph& graph, const ReconfigSequence& seq) {
  OrderedJson out;
  OrderedJson ids = OrderedJson::array();
  for (std::size_t v = 0; v < graph.vertex_count(); ++v) ids.push_back(graph.vertex_id(v));
  out["vertices"] = std::move(ids);
  OrderedJson steps = OrderedJson::array();
  for (const Assignment& a : seq.steps) {
    steps.push_back(std::vector<Symbol>(a.values().begin(), a.values().end()));
  }
  out["steps"] = std::move(steps);
  return out.dump() + "\n";
}

ReconfigSequence deserialize_sequence(const ConstraintGraph& graph, std::string_view text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(std::string("malformed sequence: ") + e.what());
  }
  const Json& ids = require(root, "vertices", "sequence");
  if (!ids.is_array()) fail("vertices", "malformed field, expected list");
  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < ids.size(); ++k) order.push_back(vertex_ref(graph, ids[k], "vertices[" + std::to_string(k) + "]"));
  if (order.size() != graph.vertex_count()) fail("vertices", "incomplete assignment");
  const Json& steps = require(root, "steps", "sequence");
  if (!steps.is_array()) fail("steps", "malformed field, expected list");
  ReconfigSequence seq;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const std::string where = "steps[" + std::to_string(i) + "]";
    if (!steps[i].is_array() || steps[i].size() != order.size()) fail(where, "incomplete assignment");
    Assignment a(graph.vertex_count());
    for (std::size_t k = 0; k < order.size(); ++k) {
      const std::int64_t s = as_int(steps[i][k], where);
      if (s < 0 || s >= static_cast<std::int64_t>(graph.alphabet_of(order[k]))) fail(where, "symbol out of range");
      a[order[k]] = static_cast<Symbol>(s);
    }
    seq.steps.push_back(std::move(a));
  }
  return seq;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

ReconfInstance read_instance(const std::filesystem::path& path) { return deserialize(read_file(path)); }

void write_instance(const std::filesystem::path& path, const ReconfInstance& instance) {
  write_file_atomic(path, serialize(instance));
}

}  // namespace reconf
