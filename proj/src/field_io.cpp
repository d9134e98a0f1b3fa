#include "mhd/field_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "mhd/errors.hpp"

namespace mhd {

using nlohmann::json;

json field_to_json(const SpectralField& field) {
  json modes = json::array();
  const auto d = static_cast<std::size_t>(field.dim());
  for (std::size_t i = 0; i < field.mode_count(); ++i) {
    const auto c = field.mode_coefficients(i);
    bool nonzero = false;
    for (const auto& z : c) nonzero = nonzero || z != Complex{};
    if (!nonzero) continue;
    json re = json::array();
    json im = json::array();
    for (std::size_t r = 0; r < d; ++r) {
      re.push_back(c[r].real());
      im.push_back(c[r].imag());
    }
    modes.push_back({{"k", field.layout().mode(i).components()}, {"re", re}, {"im", im}});
  }
  return {{"d", field.dim()}, {"cutoff", field.cutoff()}, {"modes", modes}};
}

SpectralField field_from_json(const json& doc, double tolerance) {
  try {
    const int d = doc.at("d").get<int>();
    const int cutoff = doc.at("cutoff").get<int>();
    SpectralField field(d, cutoff);
    std::vector<bool> seen(field.mode_count(), false);
    for (const auto& entry : doc.at("modes")) {
      WaveVector k(entry.at("k").get<std::vector<int>>());
      const auto re = entry.at("re").get<std::vector<double>>();
      const auto im = entry.at("im").get<std::vector<double>>();
      if (k.dim() != d || re.size() != static_cast<std::size_t>(d) ||
          im.size() != static_cast<std::size_t>(d)) {
        throw InputError("mode entry has wrong length");
      }
      if (k.is_zero()) throw InputError("zero mode present: field must have mean zero");
      std::vector<Complex> value(static_cast<std::size_t>(d));
      for (std::size_t r = 0; r < value.size(); ++r) {
        if (!std::isfinite(re[r]) || !std::isfinite(im[r])) throw InputError("nonfinite coefficient");
        value[r] = {re[r], im[r]};
      }
      const auto slot = field.layout().locate(k);
      if (slot.index < 0) throw InputError("mode " + k.to_string() + " outside cutoff");
      const auto idx = static_cast<std::size_t>(slot.index);
      if (seen[idx]) {
        // both k and -k listed: accept only if Hermitian consistent
        const auto stored = field.coefficient(k);
        for (std::size_t r = 0; r < value.size(); ++r) {
          if (std::abs(stored[r] - value[r]) > 1e-14 * (1.0 + std::abs(value[r]))) {
            throw InputError("mode " + k.to_string() + " conflicts with its Hermitian partner");
          }
        }
        continue;
      }
      seen[idx] = true;
      field.set_coefficient(k, value);
    }
    const auto report = validate(field, tolerance);
    if (!report.ok()) throw InputError("invalid field: " + report.findings.front());
    field.mark_solenoidal(true);
    return field;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed field document: ") + e.what());
  }
}

json pair_to_json(const FieldPair& pair) {
  return {{"velocity", field_to_json(pair.velocity)}, {"magnetic", field_to_json(pair.magnetic)}};
}

FieldPair pair_from_json(const json& doc, double tolerance) {
  if (!doc.is_object() || !doc.contains("velocity") || !doc.contains("magnetic")) {
    throw InputError("pair document needs \"velocity\" and \"magnetic\"");
  }
  return {field_from_json(doc["velocity"], tolerance), field_from_json(doc["magnetic"], tolerance)};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError("cannot parse " + path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

}  // namespace mhd
