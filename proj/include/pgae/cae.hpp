#pragma once
// Channel-separated convolutional autoencoder: one independent instance
// per colour channel (R, G, B). Encoder: two stride-2 tanh conv layers and
// a 10-unit tanh bottleneck; the decoder mirrors it with a sigmoid output.

#include <cstdint>
#include <string>
#include <vector>

#include "pgae/conv.hpp"
#include "pgae/synthset.hpp"

namespace pgae {

constexpr int kCaeBottleneck = 10;
constexpr int kVisFeatDim = 3 * kCaeBottleneck;

struct CaeChannelParams {
    int in_h = 0, in_w = 0;
    Conv2d conv1, conv2;
    Mat fc_enc;  // bottleneck x flat
    Vec fc_enc_b;
    Mat fc_dec;  // flat x bottleneck
    Vec fc_dec_b;
    Deconv2d deconv1, deconv2;

    int h1() const { return conv1.out_h(in_h); }
    int w1() const { return conv1.out_w(in_w); }
    int h2() const { return conv2.out_h(h1()); }
    int w2() const { return conv2.out_w(w1()); }
    int flat() const { return conv2.out_c * h2() * w2(); }

    void init(RngStream& rng, int h, int w);
    void zero_like(const CaeChannelParams& other);
    void collect(const std::string& prefix, std::vector<ParamRef>& out);
};

struct CaeParams {
    CaeChannelParams ch[3];  // R, G, B

    void init(std::uint64_t seed, int h, int w);
    void collect(std::vector<ParamRef>& out);
};

struct CaeCache {
    Tensor3 in, a1, t1, a2, t2;  // conv pre/post activations
    Vec flat_in, z_pre, z;       // bottleneck
    Vec d_pre, d_post;           // decoder fc
    Tensor3 d3, u1, t3, u2, recon;
};

// Input values are expected in [0, 1]; reconstruction is sigmoid-bounded.
Vec cae_forward(const CaeChannelParams& p, const Tensor3& img, Tensor3* recon_out = nullptr,
                CaeCache* cache = nullptr);

// Backward of the mean-squared reconstruction error against `target`
// (usually the input itself). Returns the loss; accumulates into grads.
double cae_loss_backward(const CaeChannelParams& p, const CaeCache& cache, const Tensor3& target,
                         CaeChannelParams& grads);

double cae_recon_mse(const Tensor3& recon, const Tensor3& target);

struct CaeTrainConfig {
    int epochs = 3;
    double lr = 1e-3;
    std::uint64_t seed = 1;
    int batch = 16;
    int stride = 5;  // train on every stride-th frame of each sequence
    int threads = 0;
    int log_every = 0;
};

// Channel image in [0, 1] extracted from an RGB frame.
Tensor3 channel_plane(const Image& img, int channel);

// Trains one channel instance on the strided frame subsample; deterministic
// per seed. `frames` are full RGB images; the channel plane is extracted
// internally.
void cae_train(CaeChannelParams& p, const std::vector<const Image*>& frames, int channel,
               const CaeTrainConfig& cfg);

// R || G || B bottleneck concatenation for one RGB frame.
Vec extract_features(const CaeParams& cae, const Image& img);

}  // namespace pgae
