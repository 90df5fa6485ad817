// JSON serialization of problem instances. See README for the file format.
#pragma once

#include <string>

#include "chanflow/model.hpp"

namespace chanflow {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parses and finalizes an instance; throws ParseError on malformed input.
// Does not run semantic validation, call ProblemInstance::validate for that.
ProblemInstance parse_instance(const std::string& json_text);
ProblemInstance load_instance(const std::string& path);

std::string serialize_instance(const ProblemInstance& inst);
void save_instance(const ProblemInstance& inst, const std::string& path);

// FNV-1a over the raw bytes; stable digest used in run reports
std::string digest_bytes(const std::string& bytes);
std::string digest_file(const std::string& path);

}  // namespace chanflow
