#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "stirlab/flows.hpp"

namespace stirlab {

using json = nlohmann::json;

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flow block {family, A, nu, sign, d}; nu > 1 or sign = -1 rescales the
/// base family. Also parses the CLI short form "family:A=..,nu=..,sign=..".
VelocityField flow_from_json(const json& spec);
VelocityField flow_from_string(const std::string& spec);
json flow_spec_to_json(const std::string& spec);

json load_config_file(const std::string& path);

/// Validates an experiment config against the published schema: unknown
/// keys are rejected, required keys and types enforced.
void validate_config(const json& cfg);

/// FNV-1a hash of the canonical (sorted-key) serialization.
std::uint64_t config_hash(const json& cfg);

std::string version_string();

}  // namespace stirlab
