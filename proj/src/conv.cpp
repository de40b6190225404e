#include "pgae/conv.hpp"

#include <cmath>
#include <sstream>

namespace pgae {

namespace {
void check_input(int c, int expected, const char* who) {
    if (c != expected) {
        std::ostringstream os;
        os << who << ": input has " << c << " channels, expected " << expected;
        shape_error(os.str());
    }
}
}  // namespace

void Conv2d::init(RngStream& rng) {
    const std::size_t fan_in = static_cast<std::size_t>(in_c * k * k);
    const std::size_t fan_out = static_cast<std::size_t>(out_c * k * k);
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    w = init_uniform_vec(rng, static_cast<std::size_t>(out_c * in_c * k * k), bound);
    b.assign(static_cast<std::size_t>(out_c), 0.0);
}

void Conv2d::zero_like(const Conv2d& other) {
    *this = other;
    w.assign(other.w.size(), 0.0);
    b.assign(other.b.size(), 0.0);
}

void Conv2d::collect(const std::string& prefix, std::vector<ParamRef>& out) {
    out.push_back({prefix + ".w",
                   {static_cast<std::size_t>(out_c), static_cast<std::size_t>(in_c),
                    static_cast<std::size_t>(k), static_cast<std::size_t>(k)},
                   &w});
    out.push_back({prefix + ".b", {b.size()}, &b});
}

Tensor3 conv_forward(const Conv2d& c, const Tensor3& in) {
    check_input(in.c, c.in_c, "conv_forward");
    Tensor3 out(c.out_c, c.out_h(in.h), c.out_w(in.w));
    for (int oc = 0; oc < c.out_c; ++oc) {
        for (int oy = 0; oy < out.h; ++oy) {
            for (int ox = 0; ox < out.w; ++ox) {
                double s = c.b[static_cast<std::size_t>(oc)];
                for (int ic = 0; ic < c.in_c; ++ic) {
                    for (int ky = 0; ky < c.k; ++ky) {
                        const int iy = oy * c.stride - c.pad + ky;
                        if (iy < 0 || iy >= in.h) continue;
                        for (int kx = 0; kx < c.k; ++kx) {
                            const int ix = ox * c.stride - c.pad + kx;
                            if (ix < 0 || ix >= in.w) continue;
                            s += in.at(ic, iy, ix) *
                                 c.w[static_cast<std::size_t>(((oc * c.in_c + ic) * c.k + ky) * c.k + kx)];
                        }
                    }
                }
                out.at(oc, oy, ox) = quantize(s);
            }
        }
    }
    return out;
}

void conv_backward(const Conv2d& c, const Tensor3& in, const Tensor3& dout, Conv2d& grads,
                   Tensor3& din) {
    check_input(in.c, c.in_c, "conv_backward");
    if (dout.c != c.out_c || dout.h != c.out_h(in.h) || dout.w != c.out_w(in.w))
        shape_error("conv_backward: dout shape does not match forward output");
    din = Tensor3(in.c, in.h, in.w);
    for (int oc = 0; oc < c.out_c; ++oc) {
        for (int oy = 0; oy < dout.h; ++oy) {
            for (int ox = 0; ox < dout.w; ++ox) {
                const double g = dout.at(oc, oy, ox);
                grads.b[static_cast<std::size_t>(oc)] += g;
                for (int ic = 0; ic < c.in_c; ++ic) {
                    for (int ky = 0; ky < c.k; ++ky) {
                        const int iy = oy * c.stride - c.pad + ky;
                        if (iy < 0 || iy >= in.h) continue;
                        for (int kx = 0; kx < c.k; ++kx) {
                            const int ix = ox * c.stride - c.pad + kx;
                            if (ix < 0 || ix >= in.w) continue;
                            const std::size_t wi =
                                static_cast<std::size_t>(((oc * c.in_c + ic) * c.k + ky) * c.k + kx);
                            grads.w[wi] += g * in.at(ic, iy, ix);
                            din.at(ic, iy, ix) += g * c.w[wi];
                        }
                    }
                }
            }
        }
    }
}

void Deconv2d::init(RngStream& rng) {
    const std::size_t fan_in = static_cast<std::size_t>(in_c * k * k);
    const std::size_t fan_out = static_cast<std::size_t>(out_c * k * k);
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    w = init_uniform_vec(rng, static_cast<std::size_t>(in_c * out_c * k * k), bound);
    b.assign(static_cast<std::size_t>(out_c), 0.0);
}

void Deconv2d::zero_like(const Deconv2d& other) {
    *this = other;
    w.assign(other.w.size(), 0.0);
    b.assign(other.b.size(), 0.0);
}

void Deconv2d::collect(const std::string& prefix, std::vector<ParamRef>& out) {
    out.push_back({prefix + ".w",
                   {static_cast<std::size_t>(in_c), static_cast<std::size_t>(out_c),
                    static_cast<std::size_t>(k), static_cast<std::size_t>(k)},
                   &w});
    out.push_back({prefix + ".b", {b.size()}, &b});
}

Tensor3 deconv_forward(const Deconv2d& d, const Tensor3& in) {
    check_input(in.c, d.in_c, "deconv_forward");
    Tensor3 out(d.out_c, d.out_h(in.h), d.out_w(in.w));
    for (int oc = 0; oc < d.out_c; ++oc)
        for (int oy = 0; oy < out.h; ++oy)
            for (int ox = 0; ox < out.w; ++ox) out.at(oc, oy, ox) = d.b[static_cast<std::size_t>(oc)];
    for (int ic = 0; ic < d.in_c; ++ic) {
        for (int iy = 0; iy < in.h; ++iy) {
            for (int ix = 0; ix < in.w; ++ix) {
                const double v = in.at(ic, iy, ix);
                for (int oc = 0; oc < d.out_c; ++oc) {
                    for (int ky = 0; ky < d.k; ++ky) {
                        const int oy = iy * d.stride - d.pad + ky;
                        if (oy < 0 || oy >= out.h) continue;
                        for (int kx = 0; kx < d.k; ++kx) {
                            const int ox = ix * d.stride - d.pad + kx;
                            if (ox < 0 || ox >= out.w) continue;
                            out.at(oc, oy, ox) +=
                                v * d.w[static_cast<std::size_t>(((ic * d.out_c + oc) * d.k + ky) * d.k + kx)];
                        }
                    }
                }
            }
        }
    }
    quantize(out.a);
    return out;
}

void deconv_backward(const Deconv2d& d, const Tensor3& in, const Tensor3& dout, Deconv2d& grads,
                     Tensor3& din) {
    check_input(in.c, d.in_c, "deconv_backward");
    if (dout.c != d.out_c || dout.h != d.out_h(in.h) || dout.w != d.out_w(in.w))
        shape_error("deconv_backward: dout shape does not match forward output");
    din = Tensor3(in.c, in.h, in.w);
    for (int oc = 0; oc < d.out_c; ++oc)
        for (int oy = 0; oy < dout.h; ++oy)
            for (int ox = 0; ox < dout.w; ++ox) grads.b[static_cast<std::size_t>(oc)] += dout.at(oc, oy, ox);
    for (int ic = 0; ic < d.in_c; ++ic) {
        for (int iy = 0; iy < in.h; ++iy) {
            for (int ix = 0; ix < in.w; ++ix) {
                const double v = in.at(ic, iy, ix);
                double acc = 0.0;
                for (int oc = 0; oc < d.out_c; ++oc) {
                    for (int ky = 0; ky < d.k; ++ky) {
                        const int oy = iy * d.stride - d.pad + ky;
                        if (oy < 0 || oy >= dout.h) continue;
                        for (int kx = 0; kx < d.k; ++kx) {
                            const int ox = ix * d.stride - d.pad + kx;
                            if (ox < 0 || ox >= dout.w) continue;
                            const std::size_t wi =
                                static_cast<std::size_t>(((ic * d.out_c + oc) * d.k + ky) * d.k + kx);
                            const double g = dout.at(oc, oy, ox);
                            grads.w[wi] += g * v;
                            acc += g * d.w[wi];
                        }
                    }
                }
                din.at(ic, iy, ix) = acc;
            }
        }
    }
}

}  // namespace pgae
