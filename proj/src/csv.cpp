#include "kerrscope/csv.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace kerrscope {

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", value);
    return buf;
}

namespace {

std::string cell(const std::optional<double>& value) {
    return value.has_value() ? format_double(*value) : std::string();
}

} // namespace

int write_csv(const SweepResult& result, std::ostream& out, bool with_header) {
    if (result.rows.size() != result.axis.size()) {
        throw std::invalid_argument("sweep result has mismatched axis/row lengths");
    }
    if (with_header) {
        out << "axis,mean_n,g2,phi_plus,phi_minus,engine\n";
    }
    const char* engine = to_string(result.engine);
    for (size_t i = 0; i < result.rows.size(); ++i) {
        const SweepRow& row = result.rows[i];
        out << format_double(result.axis[i]) << ',' << format_double(row.mean_n) << ','
            << cell(row.g2) << ',' << cell(row.phi_plus) << ',' << cell(row.phi_minus)
            << ',' << engine << '\n';
    }
    return static_cast<int>(result.rows.size());
}

int write_compare_csv(const SweepResult& analytic, const SweepResult& numeric,
                      std::ostream& out, double* max_abs_diff_mean_n) {
    if (analytic.axis != numeric.axis) {
        throw std::invalid_argument("engine comparison requires identical grids");
    }
    if (analytic.rows.size() != analytic.axis.size() ||
        numeric.rows.size() != numeric.axis.size()) {
        throw std::invalid_argument("sweep result has mismatched axis/row lengths");
    }

    out << "axis,mean_n_analytic,g2_analytic,mean_n_numeric,g2_numeric,phi_plus,phi_minus\n";
    double max_diff = 0.0;
    for (size_t i = 0; i < analytic.axis.size(); ++i) {
        const SweepRow& a = analytic.rows[i];
        const SweepRow& n = numeric.rows[i];
        max_diff = std::max(max_diff, std::abs(a.mean_n - n.mean_n));
        out << format_double(analytic.axis[i]) << ',' << format_double(a.mean_n) << ','
            << cell(a.g2) << ',' << format_double(n.mean_n) << ',' << cell(n.g2) << ','
            << cell(n.phi_plus) << ',' << cell(n.phi_minus) << '\n';
    }
    if (max_abs_diff_mean_n != nullptr) {
        *max_abs_diff_mean_n = max_diff;
    }
    return static_cast<int>(analytic.axis.size());
}

void write_summary_line(std::ostream& out, std::string_view key, std::string_view value) {
    out << "# " << key << '=' << value << '\n';
}

void write_summary_line(std::ostream& out, std::string_view key, double value) {
    write_summary_line(out, key, std::string_view(format_double(value)));
}

} // namespace kerrscope
