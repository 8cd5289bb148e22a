#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "drcn/errors.hpp"

namespace drcn {

namespace detail {
// std::vector buffer that skips value-initialization on resize; used for
// tensors whose every element is written before being read.
template <class T>
class DefaultInitAllocator : public std::allocator<T> {
public:
    template <class U>
    struct rebind {
        using other = DefaultInitAllocator<U>;
    };
    using std::allocator<T>::allocator;

    template <class U>
    void construct(U* ptr) noexcept(std::is_nothrow_default_constructible_v<U>) {
        ::new (static_cast<void*>(ptr)) U;
    }
    template <class U, class... Args>
    void construct(U* ptr, Args&&... args) {
        std::construct_at(ptr, std::forward<Args>(args)...);
    }
};
}  // namespace detail

using TensorBuffer = std::vector<double, detail::DefaultInitAllocator<double>>;

/// (batch, channel, row, col) dimensions of a rank-4 tensor.
struct Shape4 {
    int n = 0, c = 0, h = 0, w = 0;

    std::int64_t size() const {
        return static_cast<std::int64_t>(n) * c * h * w;
    }
    bool operator==(const Shape4&) const = default;
    std::string str() const;
};

/// Dense rank-4 array of doubles, contiguous in row-major (n, c, h, w)
/// order. This layout is a contract: the checkpoint format and the im2col
/// convolution path both rely on it.
class Tensor4 {
public:
    Tensor4() = default;
    static Tensor4 zeros(Shape4 shape);
    static Tensor4 filled(Shape4 shape, double value);
    static Tensor4 from_values(Shape4 shape, std::vector<double> values);
    /// Unspecified contents; for internal buffers whose every element is
    /// written before being read.
    static Tensor4 uninit(Shape4 shape);

    const Shape4& shape() const { return shape_; }
    std::int64_t size() const { return static_cast<std::int64_t>(data_.size()); }
    bool empty() const { return data_.empty(); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    double& at(int n, int c, int y, int x) {
        return data_[index(n, c, y, x)];
    }
    double at(int n, int c, int y, int x) const {
        return data_[index(n, c, y, x)];
    }
    double& operator[](std::int64_t i) { return data_[i]; }
    double operator[](std::int64_t i) const { return data_[i]; }

    /// Pointer to the contiguous (h, w) plane of one (batch, channel) pair.
    double* plane(int n, int c) { return data_.data() + index(n, c, 0, 0); }
    const double* plane(int n, int c) const { return data_.data() + index(n, c, 0, 0); }

    bool same_shape(const Tensor4& other) const { return shape_ == other.shape_; }

private:
    std::int64_t index(int n, int c, int y, int x) const {
        return ((static_cast<std::int64_t>(n) * shape_.c + c) * shape_.h + y) * shape_.w + x;
    }

    Shape4 shape_{};
    TensorBuffer data_;
};

/// Static description of one convolution. All kernels in this project are
/// odd-sized and stride 1; "same" padding is p = dilation * (kernel - 1) / 2.
struct ConvSpec {
    int in_channels = 1;
    int out_channels = 1;
    int kernel = 3;
    int dilation = 1;
    int padding = 0;

    static int same_padding(int kernel, int dilation) {
        return dilation * (kernel - 1) / 2;
    }
    static ConvSpec same(int in_c, int out_c, int kernel, int dilation = 1) {
        return {in_c, out_c, kernel, dilation, same_padding(kernel, dilation)};
    }

    /// Effective footprint side of the dilated kernel.
    int extent() const { return dilation * (kernel - 1) + 1; }

    void validate() const;
};

/// Reference direct-loop dilated convolution with zero padding:
///   out[n,o,i,j] = bias[o] + sum_{c,u,v} in_pad[n,c, i + r*u, j + r*v] * w[o,c,u,v]
/// Taps falling outside the padded input read as zero. Every optimized
/// convolution path in the library must match this function elementwise.
Tensor4 conv2d_naive(const Tensor4& input, const Tensor4& weights,
                     const std::vector<double>& bias, const ConvSpec& spec);

/// Output spatial extent of a convolution over an input of extent `in`.
int conv_output_extent(int in, const ConvSpec& spec);

}  // namespace drcn
