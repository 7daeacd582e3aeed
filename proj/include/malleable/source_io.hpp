#pragma once

#include <string>

#include <json.hpp>

#include "malleable/prob_core.hpp"

namespace malleable {

/// Source file: {"alphabet": [...], "joint": [[...]], "storage_alphabet_size": k}.
/// Entries are "p/q" strings, integers (exact) or decimals (floating).
/// Errors are InputError naming the offending line or matrix cell.
JointSource parse_source(const std::string& text, const std::string& origin = "<source>");
JointSource load_source(const std::string& path);

nlohmann::ordered_json source_to_json(const JointSource& src);

}  // namespace malleable
