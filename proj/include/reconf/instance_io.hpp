#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "reconf/constraint_graph.hpp"

namespace reconf {

// Instance files are JSON objects:
//
//   {"arity": 2, "alphabet": 4,
//    "vertices": ["a", {"id": "b", "alphabet": 8}],
//    "edges": [{"vertices": ["a", "b"], "accept": [[0, 0], [1, 1]]}],
//    "psi_ini": {"a": 0, "b": 0},
//    "psi_tar": {"a": 1, "b": 1}}
//
// Lists and assignment maps are written in vertex/edge declaration order.

std::string serialize(const ReconfInstance& instance);

/// Errors name the offending field, e.g. "edges[3].accept[0]: arity mismatch".
ReconfInstance deserialize(std::string_view text);

/// {"vertices": [...ids], "steps": [[symbols in vertex order], ...]}
std::string serialize_sequence(const ConstraintGraph& graph, const ReconfigSequence& seq);
ReconfigSequence deserialize_sequence(const ConstraintGraph& graph, std::string_view text);

std::string read_file(const std::filesystem::path& path);
/// Writes to a sibling temporary and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

ReconfInstance read_instance(const std::filesystem::path& path);
void write_instance(const std::filesystem::path& path, const ReconfInstance& instance);

}  // namespace reconf
