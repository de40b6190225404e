#include "pgae/cae.hpp"

#include <cmath>
#include <cstdio>
#include <thread>

namespace pgae {

void CaeChannelParams::init(RngStream& rng, int h, int w) {
    in_h = h;
    in_w = w;
    conv1 = {1, 8, 3, 2, 1, {}, {}};
    conv1.init(rng);
    conv2 = {8, 16, 3, 2, 1, {}, {}};
    conv2.init(rng);
    fc_enc = init_uniform(rng, static_cast<std::size_t>(flat()), kCaeBottleneck);
    fc_enc_b.assign(kCaeBottleneck, 0.0);
    fc_dec = init_uniform(rng, kCaeBottleneck, static_cast<std::size_t>(flat()));
    fc_dec_b.assign(static_cast<std::size_t>(flat()), 0.0);
    deconv1 = {16, 8, 3, 2, 1, 1, {}, {}};
    deconv1.init(rng);
    deconv2 = {8, 1, 3, 2, 1, 1, {}, {}};
    deconv2.init(rng);
}

void CaeChannelParams::zero_like(const CaeChannelParams& other) {
    *this = other;
    conv1.zero_like(other.conv1);
    conv2.zero_like(other.conv2);
    fc_enc.a.assign(other.fc_enc.a.size(), 0.0);
    fc_enc_b.assign(other.fc_enc_b.size(), 0.0);
    fc_dec.a.assign(other.fc_dec.a.size(), 0.0);
    fc_dec_b.assign(other.fc_dec_b.size(), 0.0);
    deconv1.zero_like(other.deconv1);
    deconv2.zero_like(other.deconv2);
}

void CaeChannelParams::collect(const std::string& prefix, std::vector<ParamRef>& out) {
    conv1.collect(prefix + ".conv1", out);
    conv2.collect(prefix + ".conv2", out);
    out.push_back({prefix + ".fc_enc.w", {fc_enc.rows, fc_enc.cols}, &fc_enc.a});
    out.push_back({prefix + ".fc_enc.b", {fc_enc_b.size()}, &fc_enc_b});
    out.push_back({prefix + ".fc_dec.w", {fc_dec.rows, fc_dec.cols}, &fc_dec.a});
    out.push_back({prefix + ".fc_dec.b", {fc_dec_b.size()}, &fc_dec_b});
    deconv1.collect(prefix + ".deconv1", out);
    deconv2.collect(prefix + ".deconv2", out);
}

void CaeParams::init(std::uint64_t seed, int h, int w) {
    static const char* names[3] = {"r", "g", "b"};
    for (int c = 0; c < 3; ++c) {
        // independent stream per channel so retraining one leaves the others be
        RngStream rng(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(c + 1)));
        ch[c].init(rng, h, w);
        (void)names;
    }
}

void CaeParams::collect(std::vector<ParamRef>& out) {
    static const char* names[3] = {"cae.r", "cae.g", "cae.b"};
    for (int c = 0; c < 3; ++c) ch[c].collect(names[c], out);
}

namespace {

Tensor3 tanh_t(const Tensor3& in) {
    Tensor3 out = in;
    for (double& x : out.a) x = std::tanh(x);
    quantize(out.a);
    return out;
}

Tensor3 sigmoid_t(const Tensor3& in) {
    Tensor3 out = in;
    for (double& x : out.a) x = 1.0 / (1.0 + std::exp(-x));
    quantize(out.a);
    return out;
}

}  // namespace

Vec cae_forward(const CaeChannelParams& p, const Tensor3& img, Tensor3* recon_out, CaeCache* cache) {
    if (img.c != 1 || img.h != p.in_h || img.w != p.in_w) {
        shape_error("cae_forward: image dims do not match configuration");
    }
    Tensor3 a1 = conv_forward(p.conv1, img);
    Tensor3 t1 = tanh_t(a1);
    Tensor3 a2 = conv_forward(p.conv2, t1);
    Tensor3 t2 = tanh_t(a2);
    Vec flat = t2.a;
    Vec z_pre = vadd(matvec(p.fc_enc, flat), p.fc_enc_b);
    Vec z = tanh_v(z_pre);

    Vec d_pre = vadd(matvec(p.fc_dec, z), p.fc_dec_b);
    Vec d_post = tanh_v(d_pre);
    Tensor3 d3(p.conv2.out_c, p.h2(), p.w2());
    d3.a = d_post;
    Tensor3 u1 = deconv_forward(p.deconv1, d3);
    Tensor3 t3 = tanh_t(u1);
    Tensor3 u2 = deconv_forward(p.deconv2, t3);
    Tensor3 recon = sigmoid_t(u2);

    if (cache) {
        cache->in = img;
        cache->a1 = a1;
        cache->t1 = t1;
        cache->a2 = a2;
        cache->t2 = t2;
        cache->flat_in = flat;
        cache->z_pre = z_pre;
        cache->z = z;
        cache->d_pre = d_pre;
        cache->d_post = d_post;
        cache->d3 = d3;
        cache->u1 = u1;
        cache->t3 = t3;
        cache->u2 = u2;
        cache->recon = recon;
    }
    if (recon_out) *recon_out = std::move(recon);
    return z;
}

double cae_recon_mse(const Tensor3& recon, const Tensor3& target) {
    if (recon.size() != target.size()) shape_error("cae_recon_mse: shape mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < recon.a.size(); ++i) {
        const double d = recon.a[i] - target.a[i];
        s += d * d;
    }
    return s / static_cast<double>(recon.a.size());
}

double cae_loss_backward(const CaeChannelParams& p, const CaeCache& cache, const Tensor3& target,
                         CaeChannelParams& grads) {
    const double loss = cae_recon_mse(cache.recon, target);
    const double n = static_cast<double>(cache.recon.a.size());

    // d MSE / d u2 through the sigmoid
    Tensor3 du2 = cache.u2;
    for (std::size_t i = 0; i < du2.a.size(); ++i) {
        const double y = cache.recon.a[i];
        du2.a[i] = 2.0 * (y - target.a[i]) / n * y * (1.0 - y);
    }

    Tensor3 dt3;
    deconv_backward(p.deconv2, cache.t3, du2, grads.deconv2, dt3);
    for (std::size_t i = 0; i < dt3.a.size(); ++i)
        dt3.a[i] *= 1.0 - cache.t3.a[i] * cache.t3.a[i];
    Tensor3 dd3;
    deconv_backward(p.deconv1, cache.d3, dt3, grads.deconv1, dd3);

    Vec dd_post = dd3.a;
    Vec dd_pre(dd_post.size());
    for (std::size_t i = 0; i < dd_pre.size(); ++i)
        dd_pre[i] = dd_post[i] * (1.0 - cache.d_post[i] * cache.d_post[i]);
    add_outer(grads.fc_dec, dd_pre, cache.z);
    axpy(grads.fc_dec_b, 1.0, dd_pre);
    Vec dz = matvec_t(p.fc_dec, dd_pre);
    for (std::size_t i = 0; i < dz.size(); ++i) dz[i] *= 1.0 - cache.z[i] * cache.z[i];
    add_outer(grads.fc_enc, dz, cache.flat_in);
    axpy(grads.fc_enc_b, 1.0, dz);
    Vec dflat = matvec_t(p.fc_enc, dz);

    Tensor3 dt2(cache.t2.c, cache.t2.h, cache.t2.w);
    dt2.a = dflat;
    for (std::size_t i = 0; i < dt2.a.size(); ++i)
        dt2.a[i] *= 1.0 - cache.t2.a[i] * cache.t2.a[i];
    Tensor3 dt1;
    conv_backward(p.conv2, cache.t1, dt2, grads.conv2, dt1);
    for (std::size_t i = 0; i < dt1.a.size(); ++i)
        dt1.a[i] *= 1.0 - cache.t1.a[i] * cache.t1.a[i];
    Tensor3 din;
    conv_backward(p.conv1, cache.in, dt1, grads.conv1, din);
    return loss;
}

Tensor3 channel_plane(const Image& img, int channel) {
    Tensor3 t(1, img.h, img.w);
    const std::uint8_t* src = img.rgb.data() + channel;
    for (int i = 0; i < img.h * img.w; ++i)
        t.a[static_cast<std::size_t>(i)] = static_cast<double>(src[3 * i]) / 255.0;
    return t;
}

void cae_train(CaeChannelParams& p, const std::vector<const Image*>& frames, int channel,
               const CaeTrainConfig& cfg) {
    if (frames.empty()) throw std::runtime_error("cae_train: no frames");
    RngStream rng(cfg.seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(channel + 1)));

    std::vector<ParamRef> refs;
    p.collect("cae", refs);
    AdamConfig adam_cfg;
    adam_cfg.lr = cfg.lr;
    AdamState state;
    state.init(refs);

    std::vector<int> order(frames.size());
    for (std::size_t i = 0; i < frames.size(); ++i) order[i] = static_cast<int>(i);

    unsigned hw = std::thread::hardware_concurrency();
    const int threads = cfg.threads > 0 ? cfg.threads : static_cast<int>(hw ? hw : 1);

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        for (std::size_t i = order.size() - 1; i > 0; --i) {
            const auto j = rng.uniform_int(i + 1);
            std::swap(order[i], order[static_cast<std::size_t>(j)]);
        }
        double epoch_loss = 0.0;
        int count = 0;
        for (std::size_t begin = 0; begin < order.size(); begin += static_cast<std::size_t>(cfg.batch)) {
            const std::size_t bsz = std::min(static_cast<std::size_t>(cfg.batch), order.size() - begin);
            std::vector<CaeChannelParams> slot_grads(bsz);
            std::vector<double> slot_loss(bsz, 0.0);
            auto work = [&](std::size_t b) {
                slot_grads[b].zero_like(p);
                Tensor3 img = channel_plane(*frames[static_cast<std::size_t>(order[begin + b])], channel);
                CaeCache cache;
                cae_forward(p, img, nullptr, &cache);
                slot_loss[b] = cae_loss_backward(p, cache, img, slot_grads[b]);
            };
            if (threads <= 1 || bsz == 1) {
                for (std::size_t b = 0; b < bsz; ++b) work(b);
            } else {
                const std::size_t nt = static_cast<std::size_t>(std::min<std::size_t>(
                    static_cast<std::size_t>(threads), bsz));
                std::vector<std::thread> pool;
                for (std::size_t t = 0; t < nt; ++t)
                    pool.emplace_back([&, t] {
                        for (std::size_t b = t; b < bsz; b += nt) work(b);
                    });
                for (auto& th : pool) th.join();
            }
            CaeChannelParams batch_grads;
            batch_grads.zero_like(p);
            std::vector<ParamRef> acc;
            batch_grads.collect("cae", acc);
            for (std::size_t b = 0; b < bsz; ++b) {
                std::vector<ParamRef> gr;
                slot_grads[b].collect("cae", gr);
                for (std::size_t k = 0; k < acc.size(); ++k) axpy(*acc[k].data, 1.0, *gr[k].data);
                epoch_loss += slot_loss[b];
                ++count;
            }
            for (auto& r : acc)
                for (double& x : *r.data) x /= static_cast<double>(bsz);
            adam_step(refs, acc, state, adam_cfg);
        }
        if (cfg.log_every > 0 && (epoch % cfg.log_every == 0 || epoch == 1))
            std::printf("cae channel %d epoch %d mse %.6f\n", channel, epoch, epoch_loss / count);
    }
}

Vec extract_features(const CaeParams& cae, const Image& img) {
    Vec out;
    out.reserve(kVisFeatDim);
    for (int c = 0; c < 3; ++c) {
        Vec z = cae_forward(cae.ch[c], channel_plane(img, c));
        out.insert(out.end(), z.begin(), z.end());
    }
    return out;
}

}  // namespace pgae
