#include "drcn/tensor.hpp"

#include <utility>

namespace drcn {

std::string Shape4::str() const {
    return "(" + std::to_string(n) + ", " + std::to_string(c) + ", " +
           std::to_string(h) + ", " + std::to_string(w) + ")";
}

namespace {
void check_dims(const Shape4& s) {
    if (s.n < 1 || s.c < 1 || s.h < 1 || s.w < 1) {
        throw ShapeError("tensor dimensions must all be >= 1, got " + s.str());
    }
}
}  // namespace

Tensor4 Tensor4::zeros(Shape4 shape) { return filled(shape, 0.0); }

Tensor4 Tensor4::uninit(Shape4 shape) {
    check_dims(shape);
    Tensor4 t;
    t.shape_ = shape;
    t.data_.resize(static_cast<std::size_t>(shape.size()));
    return t;
}

Tensor4 Tensor4::filled(Shape4 shape, double value) {
    check_dims(shape);
    Tensor4 t;
    t.shape_ = shape;
    t.data_.assign(static_cast<std::size_t>(shape.size()), value);
    return t;
}

Tensor4 Tensor4::from_values(Shape4 shape, std::vector<double> values) {
    check_dims(shape);
    if (static_cast<std::int64_t>(values.size()) != shape.size()) {
        throw ShapeError("value list length " + std::to_string(values.size()) +
                         " does not match shape " + shape.str() + " (" +
                         std::to_string(shape.size()) + " elements)");
    }
    Tensor4 t;
    t.shape_ = shape;
    t.data_.assign(values.begin(), values.end());
    return t;
}

void ConvSpec::validate() const {
    if (in_channels < 1 || out_channels < 1) {
        throw ShapeError("conv channel counts must be positive");
    }
    if (kernel < 1 || kernel % 2 == 0) {
        throw ShapeError("conv kernel size must be odd and positive, got " +
                         std::to_string(kernel));
    }
    if (dilation < 1) {
        throw ShapeError("conv dilation must be >= 1, got " + std::to_string(dilation));
    }
    if (padding < 0) {
        throw ShapeError("conv padding must be >= 0, got " + std::to_string(padding));
    }
}

int conv_output_extent(int in, const ConvSpec& spec) {
    return in + 2 * spec.padding - spec.dilation * (spec.kernel - 1);
}

Tensor4 conv2d_naive(const Tensor4& input, const Tensor4& weights,
                     const std::vector<double>& bias, const ConvSpec& spec) {
    spec.validate();
    const Shape4 in = input.shape();
    const Shape4 ws = weights.shape();
    if (in.c != spec.in_channels) {
        throw ShapeError("conv input has " + std::to_string(in.c) +
                         " channels, spec expects " + std::to_string(spec.in_channels));
    }
    if (ws.n != spec.out_channels || ws.c != spec.in_channels ||
        ws.h != spec.kernel || ws.w != spec.kernel) {
        throw ShapeError("conv weight shape " + ws.str() + " does not match spec");
    }
    if (static_cast<int>(bias.size()) != spec.out_channels) {
        throw ShapeError("conv bias length does not match out_channels");
    }
    const int out_h = conv_output_extent(in.h, spec);
    const int out_w = conv_output_extent(in.w, spec);
    if (out_h < 1 || out_w < 1) {
        throw ShapeError("conv output would be empty for input " + in.str());
    }

    Tensor4 out = Tensor4::zeros({in.n, spec.out_channels, out_h, out_w});
    const int r = spec.dilation;
    const int p = spec.padding;
    for (int n = 0; n < in.n; ++n) {
        for (int o = 0; o < spec.out_channels; ++o) {
            for (int i = 0; i < out_h; ++i) {
                for (int j = 0; j < out_w; ++j) {
                    double acc = bias[o];
                    for (int c = 0; c < spec.in_channels; ++c) {
                        for (int u = 0; u < spec.kernel; ++u) {
                            const int y = i + r * u - p;
                            if (y < 0 || y >= in.h) continue;
                            for (int v = 0; v < spec.kernel; ++v) {
                                const int x = j + r * v - p;
                                if (x < 0 || x >= in.w) continue;
                                acc += input.at(n, c, y, x) * weights.at(o, c, u, v);
                            }
                        }
                    }
                    out.at(n, o, i, j) = acc;
                }
            }
        }
    }
    return out;
}

}  // namespace drcn
