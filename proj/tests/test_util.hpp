#pragma once

#include <functional>
#include <string>
#include <vector>

#include "reconf/constraint_graph.hpp"
#include "reconf/error.hpp"

namespace reconf::testing {

// The message of the reconf::Error thrown by f, or "" if none was thrown.
inline std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

inline bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

inline Assignment A(std::vector<Symbol> v) { return Assignment(std::move(v)); }

// Triangle with equality constraints over {0,1}.
inline ConstraintGraph triangle() {
  ConstraintGraph g(2, 2);
  for (const char* id : {"v0", "v1", "v2"}) g.add_vertex(id);
  const std::vector<std::vector<Symbol>> eq{{0, 0}, {1, 1}};
  g.add_edge({0, 1}, eq);
  g.add_edge({1, 2}, eq);
  g.add_edge({0, 2}, eq);
  return g;
}

inline ReconfInstance triangle_instance() { return ReconfInstance{triangle(), A({0, 0, 0}), A({1, 1, 1})}; }

}  // namespace reconf::testing
