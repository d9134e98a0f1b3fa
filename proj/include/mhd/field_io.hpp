#pragma once

// JSON (de)serialization of fields and pairs:
//   {"d":3, "cutoff":2, "modes":[{"k":[0,0,1], "re":[...], "im":[...]}]}
// Only canonical representatives are written. The loader accepts either
// member of a +-k pair and re-derives the partner.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "mhd/spectral.hpp"

namespace mhd {

nlohmann::json field_to_json(const SpectralField& field);
/// Throws InputError on malformed documents, zero modes, conflicting
/// duplicates or a divergence residual above `tolerance`.
SpectralField field_from_json(const nlohmann::json& doc, double tolerance = 1e-12);

nlohmann::json pair_to_json(const FieldPair& pair);
FieldPair pair_from_json(const nlohmann::json& doc, double tolerance = 1e-12);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace mhd
