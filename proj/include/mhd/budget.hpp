#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace mhd {

/// Upper bounds J_p on int_0^inf ||v(t)||_p dt for a decaying base flow.
struct DecayBudget {
  struct Entry {
    double p = 0.0;
    double J = 0.0;
    std::string provenance;  ///< "analytic-beltrami", "quadrature+tail" or "user"
  };
  std::vector<Entry> entries;

  /// Adds or replaces; throws InputError for negative or nonfinite J.
  void set(double p, double J, const std::string& provenance);
  bool contains(double p) const;
  /// Throws InputError if p is missing.
  double J(double p) const;
  const std::string& provenance(double p) const;
  nlohmann::json to_json() const;
};

}  // namespace mhd
