#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "kerrscope/sweep.hpp"

namespace kerrscope {

// Shortest decimal form that round-trips a double (%.15g is always enough
// here; values are compared back at 1e-12).
std::string format_double(double value);

// Header `axis,mean_n,g2,phi_plus,phi_minus,engine` followed by one row per
// grid point; optional fields render as empty cells. Returns the row count
// (excluding the header). Set with_header = false to append a second
// engine's rows under an existing header.
int write_csv(const SweepResult& result, std::ostream& out, bool with_header = true);

// Side-by-side engine comparison:
// `axis,mean_n_analytic,g2_analytic,mean_n_numeric,g2_numeric,phi_plus,phi_minus`.
// Both results must share the same axis. Returns the row count and, if
// max_abs_diff_mean_n is non-null, stores the largest |mean_n| discrepancy.
int write_compare_csv(const SweepResult& analytic, const SweepResult& numeric,
                      std::ostream& out, double* max_abs_diff_mean_n = nullptr);

// `# key=value` trailer line; CSV consumers skip the `#` prefix.
void write_summary_line(std::ostream& out, std::string_view key, std::string_view value);
void write_summary_line(std::ostream& out, std::string_view key, double value);

} // namespace kerrscope
