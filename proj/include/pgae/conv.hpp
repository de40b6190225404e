#pragma once
// Strided 2-D convolution and transposed convolution with exact backward
// passes, sized for the small feature-extractor autoencoder.

#include <string>
#include <vector>

#include "pgae/adam.hpp"
#include "pgae/rng.hpp"
#include "pgae/tensor.hpp"

namespace pgae {

struct Tensor3 {
    int c = 0, h = 0, w = 0;
    Vec a;

    Tensor3() = default;
    Tensor3(int c_, int h_, int w_) : c(c_), h(h_), w(w_), a(static_cast<std::size_t>(c_ * h_ * w_), 0.0) {}
    double& at(int ci, int y, int x) { return a[static_cast<std::size_t>((ci * h + y) * w + x)]; }
    double at(int ci, int y, int x) const { return a[static_cast<std::size_t>((ci * h + y) * w + x)]; }
    std::size_t size() const { return a.size(); }
};

struct Conv2d {
    int in_c = 0, out_c = 0, k = 3, stride = 2, pad = 1;
    Vec w;  // [out_c][in_c][k][k]
    Vec b;  // [out_c]

    void init(RngStream& rng);
    void zero_like(const Conv2d& other);
    void collect(const std::string& prefix, std::vector<ParamRef>& out);
    int out_h(int in_h) const { return (in_h + 2 * pad - k) / stride + 1; }
    int out_w(int in_w) const { return (in_w + 2 * pad - k) / stride + 1; }
};

Tensor3 conv_forward(const Conv2d& c, const Tensor3& in);
// din is overwritten; parameter gradients accumulate into `grads`
void conv_backward(const Conv2d& c, const Tensor3& in, const Tensor3& dout, Conv2d& grads,
                   Tensor3& din);

struct Deconv2d {
    int in_c = 0, out_c = 0, k = 3, stride = 2, pad = 1, out_pad = 1;
    Vec w;  // [in_c][out_c][k][k]
    Vec b;  // [out_c]

    void init(RngStream& rng);
    void zero_like(const Deconv2d& other);
    void collect(const std::string& prefix, std::vector<ParamRef>& out);
    int out_h(int in_h) const { return (in_h - 1) * stride - 2 * pad + k + out_pad; }
    int out_w(int in_w) const { return (in_w - 1) * stride - 2 * pad + k + out_pad; }
};

Tensor3 deconv_forward(const Deconv2d& d, const Tensor3& in);
void deconv_backward(const Deconv2d& d, const Tensor3& in, const Tensor3& dout, Deconv2d& grads,
                     Tensor3& din);

}  // namespace pgae
