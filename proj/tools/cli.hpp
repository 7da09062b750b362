#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rankcorr::cli {

/// Entry point shared by the executable and the tests. Returns the process
/// exit status: 0 success, 2 input parse, 3 data policy, 4 parameter,
/// 5 convergence.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Comma-separated numeric data. A first row with any non-numeric field is a
/// header. `cols` holds 1-based column indices.
struct CsvColumns {
  std::vector<double> x;
  std::vector<double> y;
  bool had_header = false;
};
CsvColumns read_csv(std::istream& in, std::pair<std::size_t, std::size_t> cols = {1, 2});

/// 4 significant digits, scientific: 4.444e-04.
std::string sci4(double value);

std::uint64_t fnv1a64(std::string_view bytes) noexcept;

}  // namespace rankcorr::cli
