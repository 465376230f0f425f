// Canonical JSON plumbing.  Every artifact is produced through json_canon so
// identical data serializes byte-identically.
#pragma once

#include <string>

#include <json.hpp>

namespace bpkcnm {

// Insertion-ordered so artifact field order is authoring order, not
// alphabetical shuffle.
using json = nlohmann::ordered_json;

std::string json_canon(const json& j);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace bpkcnm
