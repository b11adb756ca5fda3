#pragma once

#include <string>

#include "jsr.hpp"
#include "model.hpp"

namespace cksvar {

// JSON model documents; matrices are arrays of rows.
CksvarModel model_from_json_text(const std::string& text);
std::string model_to_json_text(const CksvarModel& model);
CksvarModel load_model(const std::string& path);

CompanionSet matrix_set_from_json_text(const std::string& text);

std::string read_file(const std::string& path);
// Write via a temporary sibling and rename, so readers never see a partial file.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace cksvar
