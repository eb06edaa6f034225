#include <algorithm>
#include <cmath>
#include <sstream>

#include "memstefan/diagnostics/report.hpp"

namespace memstefan::diag {

double CheckReport::worst_residual() const noexcept {
    double w = 0.0;
    for (const auto& level : levels) {
        w = std::max(w, level.residual);
    }
    return w;
}

std::optional<double> observed_order(std::span<const double> residuals, double refinement) {
    const std::size_t n = residuals.size();
    if (n < 2) {
        return std::nullopt;
    }
    double sx = 0.0;
    double sy = 0.0;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(residuals[i] > 0.0) || !std::isfinite(residuals[i])) {
            return std::nullopt;
        }
        const double x = -static_cast<double>(i) * std::log(refinement);
        const double y = std::log(residuals[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double dn = static_cast<double>(n);
    return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

void finalize(CheckReport& report) {
    std::vector<double> residuals;
    bool ok = !report.levels.empty();
    for (auto& level : report.levels) {
        level.passed = level.residual < level.tolerance;
        ok = ok && level.passed;
        residuals.push_back(level.residual);
    }
    report.order = observed_order(residuals);
    report.passed = ok;
}

std::string summary_line(const CheckReport& report) {
    std::ostringstream os;
    os.precision(3);
    os << (report.passed ? "PASS " : "FAIL ") << report.name;
    if (!report.levels.empty()) {
        const auto& last = report.levels.back();
        os << "  residual=" << std::scientific << last.residual << " tol=" << last.tolerance;
    }
    if (report.order) {
        os << std::fixed << " order=" << *report.order;
    }
    if (!report.note.empty()) {
        os << "  (" << report.note << ")";
    }
    return os.str();
}

bool all_passed(std::span<const CheckReport> reports) noexcept {
    return std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.passed; });
}

} // namespace memstefan::diag
