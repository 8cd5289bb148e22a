#include "drcn/hdc.hpp"

#include <algorithm>
#include <string>

#include "drcn/errors.hpp"

namespace drcn {

void DilationPattern::validate() const {
    if (rates.empty()) {
        throw ConfigError("dilation pattern must contain at least one rate");
    }
    for (int r : rates) {
        if (r < 1) throw ConfigError("dilation rates must be >= 1");
    }
    if (kernel < 3 || kernel % 2 == 0) {
        throw ConfigError("HDC kernel size must be odd and >= 3, got " +
                          std::to_string(kernel));
    }
}

std::vector<int> hdc_max_gap(const DilationPattern& pattern) {
    pattern.validate();
    const auto& r = pattern.rates;
    const int n = static_cast<int>(r.size());
    std::vector<int> gaps(n);
    gaps[n - 1] = r[n - 1];
    for (int i = n - 2; i >= 0; --i) {
        const int upper = gaps[i + 1];
        gaps[i] = std::max({upper - 2 * r[i], 2 * r[i] - upper, r[i]});
    }
    return gaps;
}

HdcReport hdc_validate(const DilationPattern& pattern) {
    HdcReport report;
    report.gaps = hdc_max_gap(pattern);
    // The checked gap is M_2 for stacks of two or more layers; a lone layer
    // is judged by its own tap spacing M_1 = r_1.
    const int checked = report.gaps.size() >= 2 ? 1 : 0;
    report.valid = report.gaps[checked] <= pattern.kernel;
    if (!report.valid) report.failing_index = checked + 1;
    return report;
}

int receptive_field(const std::vector<std::pair<int, int>>& layers) {
    if (layers.empty()) {
        throw ConfigError("receptive field of an empty layer stack is undefined");
    }
    int field = 1;
    for (const auto& [kernel, dilation] : layers) {
        if (kernel < 3 || kernel % 2 == 0) {
            throw ConfigError("layer kernel sizes must be odd and >= 3, got " +
                              std::to_string(kernel));
        }
        if (dilation < 1) throw ConfigError("layer dilations must be >= 1");
        field += (kernel - 1) * dilation;
    }
    return field;
}

}  // namespace drcn
