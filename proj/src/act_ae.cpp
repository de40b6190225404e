#include "pgae/act_ae.hpp"

#include <cmath>
#include <sstream>

namespace pgae {

void ActAeParams::init(RngStream& rng, std::size_t vis, std::size_t joints, std::size_t hidden) {
    vis_dim = vis;
    joint_dim = joints;
    enc.init(rng, vis + joints, hidden);
    W_dec = init_uniform(rng, hidden, 2 * hidden);
    b_dec.assign(2 * hidden, 0.0);
    dec.init(rng, vis + joints, hidden);
    W_out = init_uniform(rng, hidden, joints);
    b_out.assign(joints, 0.0);
}

void ActAeParams::zero(std::size_t vis, std::size_t joints, std::size_t hidden) {
    vis_dim = vis;
    joint_dim = joints;
    enc.zero(vis + joints, hidden);
    W_dec = Mat(2 * hidden, hidden);
    b_dec.assign(2 * hidden, 0.0);
    dec.zero(vis + joints, hidden);
    W_out = Mat(joints, hidden);
    b_out.assign(joints, 0.0);
}

void ActAeParams::collect(const std::string& prefix, std::vector<ParamRef>& out) {
    enc.collect(prefix + ".enc", out);
    out.push_back({prefix + ".W_dec", {W_dec.rows, W_dec.cols}, &W_dec.a});
    out.push_back({prefix + ".b_dec", {b_dec.size()}, &b_dec});
    dec.collect(prefix + ".dec", out);
    out.push_back({prefix + ".W_out", {W_out.rows, W_out.cols}, &W_out.a});
    out.push_back({prefix + ".b_out", {b_out.size()}, &b_out});
}

namespace {
void check_joint_range(const Vec& j, const char* who) {
    for (double x : j)
        if (x < -1.0 - 1e-9 || x > 1.0 + 1e-9) {
            std::ostringstream os;
            os << who << ": joint value " << x << " outside [-1, 1]";
            shape_error(os.str());
        }
}
}  // namespace

Vec act_encode(const ActAeParams& p, std::span<const Vec> vs, std::span<const Vec> js,
               ActEncCache* cache) {
    if (vs.empty() || vs.size() != js.size()) {
        std::ostringstream os;
        os << "act_encode: " << vs.size() << " feature frames vs " << js.size() << " joint rows";
        shape_error(os.str());
    }
    LstmState st = lstm_zero_state(p.hidden_size());
    if (cache) cache->steps.resize(vs.size());
    for (std::size_t t = 0; t < vs.size(); ++t) {
        check_joint_range(js[t], "act_encode");
        st = lstm_step(p.enc, concat(vs[t], js[t]), st, cache ? &cache->steps[t] : nullptr);
    }
    return concat(st.h, st.c);
}

void act_encode_backward(const ActAeParams& p, const ActEncCache& cache, const Vec& dfeats,
                         ActAeParams& grads) {
    const std::size_t H = p.hidden_size();
    if (dfeats.size() != 2 * H) shape_error("act_encode_backward: dfeats must be 2*hidden");
    std::vector<Vec> dh(cache.steps.size(), Vec(H, 0.0));
    dh.back() = Vec(dfeats.begin(), dfeats.begin() + static_cast<long>(H));
    Vec dc_final(dfeats.begin() + static_cast<long>(H), dfeats.end());
    lstm_backward(p.enc, cache.steps, dh, dc_final, grads.enc);
}

std::vector<Vec> act_decode(const ActAeParams& p, const Vec& h_shared, std::span<const Vec> vs,
                            const Vec& j1, int rollout, ActDecCache* cache) {
    if (rollout < 2) shape_error("act_decode: rollout must be >= 2");
    const std::size_t steps = static_cast<std::size_t>(rollout - 1);
    if (vs.size() < steps) {
        std::ostringstream os;
        os << "act_decode: rollout of " << rollout << " needs " << steps
           << " teacher-forcing frames, got " << vs.size();
        shape_error(os.str());
    }
    if (j1.size() != p.joint_dim) shape_error("act_decode: j1 size does not match joint_dim");
    check_joint_range(j1, "act_decode");

    Vec hc0 = vadd(matvec(p.W_dec, h_shared), p.b_dec);
    const std::size_t H = p.hidden_size();
    LstmState st = {Vec(hc0.begin(), hc0.begin() + static_cast<long>(H)),
                    Vec(hc0.begin() + static_cast<long>(H), hc0.end())};
    if (cache) {
        cache->h_shared = h_shared;
        cache->hc0 = hc0;
        cache->steps.resize(steps);
        cache->hs.resize(steps);
        cache->preds.resize(steps);
    }

    std::vector<Vec> preds(steps);
    Vec j_prev = j1;
    for (std::size_t t = 0; t < steps; ++t) {
        st = lstm_step(p.dec, concat(vs[t], j_prev), st, cache ? &cache->steps[t] : nullptr);
        Vec pred = tanh_v(vadd(matvec(p.W_out, st.h), p.b_out));
        if (cache) {
            cache->hs[t] = st.h;
            cache->preds[t] = pred;
        }
        j_prev = pred;
        preds[t] = std::move(pred);
    }
    return preds;
}

void act_decode_backward(const ActAeParams& p, const ActDecCache& cache,
                         const std::vector<Vec>& dpred, ActAeParams& grads, Vec& dh_shared) {
    const std::size_t steps = cache.steps.size();
    if (dpred.size() != steps) shape_error("act_decode_backward: dpred count mismatch");
    const std::size_t H = p.hidden_size();
    const std::size_t J = p.joint_dim;

    Vec dj_next(J, 0.0);  // gradient flowing into the prediction via the next step's input
    Vec dh_rec(H, 0.0), dc_rec(H, 0.0);
    Vec dx, dh_prev, dc_prev;
    for (std::size_t t = steps; t-- > 0;) {
        Vec d_pred = vadd(dpred[t], dj_next);
        // through the tanh output layer
        Vec da(J);
        for (std::size_t k = 0; k < J; ++k)
            da[k] = d_pred[k] * (1.0 - cache.preds[t][k] * cache.preds[t][k]);
        add_outer(grads.W_out, da, cache.hs[t]);
        axpy(grads.b_out, 1.0, da);
        Vec dh_t = vadd(matvec_t(p.W_out, da), dh_rec);

        lstm_step_backward(p.dec, cache.steps[t], dh_t, dc_rec, grads.dec, dx, dh_prev, dc_prev);
        dh_rec = std::move(dh_prev);
        dc_rec = std::move(dc_prev);
        // split the input gradient; the visual part is teacher-forced data,
        // the joint part feeds the previous step's prediction (discarded at
        // t = 0 where the input is the ground-truth j_1)
        dj_next.assign(dx.begin() + static_cast<long>(p.vis_dim), dx.end());
    }
    Vec d_hc0 = concat(dh_rec, dc_rec);
    add_outer(grads.W_dec, d_hc0, cache.h_shared);
    axpy(grads.b_dec, 1.0, d_hc0);
    Vec dh_from_dec = matvec_t(p.W_dec, d_hc0);
    if (dh_shared.empty()) dh_shared.assign(H, 0.0);
    axpy(dh_shared, 1.0, dh_from_dec);
}

}  // namespace pgae
