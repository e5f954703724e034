#pragma once

#include <filesystem>

#include <json.hpp>

#include "v2n/neural/lstm.hpp"
#include "v2n/neural/mlp.hpp"

namespace v2n::neural {

// Self-describing JSON containers: {"kind", "spec", "parameters": [{rows,
// cols, data}]}. Doubles are written in shortest round-trip form, so
// save/load reproduces every parameter bit-exactly.

nlohmann::json to_json(const MlpSpec& spec);
MlpSpec mlp_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const LstmSpec& spec);
LstmSpec lstm_spec_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Mlp& net);
Mlp mlp_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Lstm& net);
Lstm lstm_from_json(const nlohmann::json& j);

void save_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json load_json(const std::filesystem::path& path);

}  // namespace v2n::neural
