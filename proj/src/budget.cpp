#include "mhd/budget.hpp"

#include <cmath>

#include "mhd/digest.hpp"
#include "mhd/errors.hpp"

namespace mhd {

namespace {

bool same(double a, double b) { return std::abs(a - b) < 1e-12; }

}  // namespace

void DecayBudget::set(double p, double J, const std::string& provenance) {
  if (!(J >= 0.0) || !std::isfinite(J)) throw InputError("decay budget must be finite and nonnegative");
  for (auto& e : entries) {
    if (same(e.p, p)) {
      e = {p, J, provenance};
      return;
    }
  }
  entries.push_back({p, J, provenance});
}

bool DecayBudget::contains(double p) const {
  for (const auto& e : entries) {
    if (same(e.p, p)) return true;
  }
  return false;
}

double DecayBudget::J(double p) const {
  for (const auto& e : entries) {
    if (same(e.p, p)) return e.J;
  }
  throw InputError("decay budget lacks order " + format_double(p));
}

const std::string& DecayBudget::provenance(double p) const {
  for (const auto& e : entries) {
    if (same(e.p, p)) return e.provenance;
  }
  throw InputError("decay budget lacks order " + format_double(p));
}

nlohmann::json DecayBudget::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : entries) out.push_back({{"p", e.p}, {"J", e.J}, {"provenance", e.provenance}});
  return out;
}

}  // namespace mhd
