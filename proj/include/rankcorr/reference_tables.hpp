#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "rankcorr/copulas.hpp"

// Published values of the four comparison tables, as printed. Simulated
// rows come from an unknown RNG and serve only for side-by-side display.
namespace rankcorr::reference {

enum class Row {
  SamplePearson,   // S^2 of rho_n
  SampleSpearman,  // S^2 of rho_{n,S}
  SampleKendall,   // S^2 of tau_n
  VarKendall,      // leading Var(tau_n) at n = 1000
  SampleRnew,      // S^2 of r_n
  VarRnew,         // leading Var(r_n) at n = 1000
  Rho,
  RhoS,
  Tau,
  R,
};

std::string_view row_label(Row row) noexcept;

struct PublishedRow {
  Row row;
  std::vector<std::optional<double>> values;  // one per column; empty cells absent
};

struct PublishedTable {
  std::string_view id;  // "2.1" .. "2.4"
  Family family;
  bool simulated;
  std::vector<double> t;
  std::vector<PublishedRow> rows;

  /// Throws ParameterOutOfRange when the row is not part of the table.
  const PublishedRow& row(Row r) const;
};

const std::vector<PublishedTable>& tables();
/// Throws ParameterOutOfRange for an unknown id.
const PublishedTable& table(std::string_view id);

}  // namespace rankcorr::reference
