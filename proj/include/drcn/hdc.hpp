#pragma once

#include <optional>
#include <utility>
#include <vector>

// Hybrid-dilated-convolution analysis: the max-gap recurrence over a stack
// of dilation rates, the validity check that the composed receptive field has
// no holes a K-sized kernel cannot bridge, and receptive-field arithmetic
// for stride-1 stacks.

namespace drcn {

struct DilationPattern {
    std::vector<int> rates;  // bottom layer first
    int kernel = 3;          // odd, >= 3

    void validate() const;
};

struct HdcReport {
    std::vector<int> gaps;  // M_1 .. M_n
    bool valid = false;
    std::optional<int> failing_index;  // 1-based index of the checked gap when invalid
};

/// The max-gap recurrence, evaluated top-down:
///   M_n = r_n
///   M_i = max(M_{i+1} - 2 r_i, 2 r_i - M_{i+1}, r_i)
/// Returns [M_1 .. M_n]. The middle term is the simplified form of
/// M_{i+1} - 2 (M_{i+1} - r_i); a unit test pins the two as identical.
std::vector<int> hdc_max_gap(const DilationPattern& pattern);

/// A pattern is valid when M_2 <= kernel (for a single layer: r_1 <= kernel),
/// i.e. the bottom kernel can bridge every gap the upper stack leaves.
HdcReport hdc_validate(const DilationPattern& pattern);

/// Side length of the square input region influencing one output pixel for a
/// stride-1 stack of (kernel, dilation) layers: 1 + sum (K_i - 1) * r_i.
int receptive_field(const std::vector<std::pair<int, int>>& layers);

}  // namespace drcn
