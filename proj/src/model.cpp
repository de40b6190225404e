#include "pgae/model.hpp"

namespace pgae {

void PgaeModel::init(std::uint64_t seed) {
    RngStream rng(seed);
    lang.init(rng, static_cast<std::size_t>(cfg.vocab), static_cast<std::size_t>(cfg.hidden));
    act.init(rng, static_cast<std::size_t>(cfg.vis_dim), static_cast<std::size_t>(cfg.joint_dim),
             static_cast<std::size_t>(cfg.hidden));
    gmu.init(rng, static_cast<std::size_t>(cfg.hidden));
}

std::vector<ParamRef> PgaeModel::collect() {
    std::vector<ParamRef> out;
    lang.collect("lang", out);
    act.collect("act", out);
    gmu.collect("gmu", out);
    return out;
}

std::vector<const Vec*> PgaeModel::collect_const() const {
    auto refs = const_cast<PgaeModel*>(this)->collect();
    std::vector<const Vec*> out;
    out.reserve(refs.size());
    for (const auto& r : refs) out.push_back(r.data);
    return out;
}

void PgaeGrads::zero(const ModelConfig& c) {
    cfg = c;
    lang.zero(static_cast<std::size_t>(c.vocab), static_cast<std::size_t>(c.hidden));
    act.zero(static_cast<std::size_t>(c.vis_dim), static_cast<std::size_t>(c.joint_dim),
             static_cast<std::size_t>(c.hidden));
    gmu.zero(static_cast<std::size_t>(c.hidden));
}

std::vector<ParamRef> PgaeGrads::collect() {
    std::vector<ParamRef> out;
    lang.collect("lang", out);
    act.collect("act", out);
    gmu.collect("gmu", out);
    return out;
}

std::vector<const Vec*> PgaeGrads::collect_const() const {
    auto refs = const_cast<PgaeGrads*>(this)->collect();
    std::vector<const Vec*> out;
    out.reserve(refs.size());
    for (const auto& r : refs) out.push_back(r.data);
    return out;
}

void PgaeGrads::accumulate(PgaeGrads& into) const {
    auto src = const_cast<PgaeGrads*>(this)->collect();
    auto dst = into.collect();
    if (src.size() != dst.size()) shape_error("PgaeGrads::accumulate: layout mismatch");
    for (std::size_t i = 0; i < src.size(); ++i) axpy(*dst[i].data, 1.0, *src[i].data);
}

void PgaeGrads::scale(double s) {
    for (auto& r : collect())
        for (double& x : *r.data) x *= s;
}

ForwardResult forward_train(const PgaeModel& m, const TaskIO& io, const Vec& word_w, double alpha,
                            double beta, ForwardCache& cache) {
    Vec l_feats = lang_encode(m.lang, io.lang_in, &cache.lang_enc);
    Vec a_feats = act_encode(m.act, io.enc_v, io.enc_j, &cache.act_enc);
    cache.latent = gmu_fuse(m.gmu, l_feats, a_feats);
    lang_decode_teacher(m.lang, cache.latent.h, io.lang_target, cache.lang_dec);
    act_decode(m.act, cache.latent.h, io.dec_v, io.j1, io.rollout(), &cache.act_dec);

    ForwardResult r;
    r.loss_lang = lang_loss(io.lang_target, cache.lang_dec.probs, word_w);
    r.loss_act = act_loss(io.act_target, cache.act_dec.preds);
    r.loss_total = total_loss(r.loss_lang, r.loss_act, alpha, beta);
    return r;
}

void backward(const PgaeModel& m, const TaskIO& io, const ForwardCache& cache, const Vec& word_w,
              double alpha, double beta, PgaeGrads& grads) {
    // decoders first; both contribute to the gradient on the shared h
    Vec dh;
    auto dlogits = lang_loss_dlogits(io.lang_target, cache.lang_dec.probs, word_w, alpha);
    lang_decode_backward(m.lang, cache.lang_dec, dlogits, grads.lang, dh);
    auto dpred = act_loss_dpred(io.act_target, cache.act_dec.preds, beta);
    act_decode_backward(m.act, cache.act_dec, dpred, grads.act, dh);

    // bottleneck, then both encoders
    Vec dl_feats, da_feats;
    gmu_backward(m.gmu, cache.latent, dh, grads.gmu, dl_feats, da_feats);
    lang_encode_backward(m.lang, cache.lang_enc, dl_feats, grads.lang);
    act_encode_backward(m.act, cache.act_enc, da_feats, grads.act);
}

InferenceResult infer(const PgaeModel& m, const TaskIO& io, int eos_index) {
    InferenceResult out;
    Vec l_feats = lang_encode(m.lang, io.lang_in);
    Vec a_feats = act_encode(m.act, io.enc_v, io.enc_j);
    out.latent = gmu_fuse(m.gmu, l_feats, a_feats);
    out.lang_tokens = lang_decode_greedy(m.lang, out.latent.h, m.cfg.lang_max_steps(), eos_index);
    out.joints = act_decode(m.act, out.latent.h, io.dec_v, io.j1, io.rollout());
    return out;
}

bool grads_cover_all_params(PgaeModel& m, PgaeGrads& g) {
    auto p = m.collect();
    auto q = g.collect();
    if (p.size() != q.size()) return false;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i].name != q[i].name || p[i].count() != q[i].count()) return false;
    return true;
}

}  // namespace pgae
