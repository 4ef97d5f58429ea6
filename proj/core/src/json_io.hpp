#pragma once

// Internal JSON helpers shared by the serialization units.

#include <filesystem>
#include <string>

#include "avbench/taxonomy.hpp"
#include "json.hpp"

namespace avbench::detail {

using Json = nlohmann::ordered_json;

Json to_json(const Combo& combo);
Combo combo_from_json(const Json& j);
Json to_json(const Taxonomy& taxonomy);
Taxonomy taxonomy_from_json(const Json& j);

Json read_json_file(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& j);
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

/// Shortest round-trip decimal form.
std::string shortest(double value);

}  // namespace avbench::detail
