#include "pgae/lang_ae.hpp"

#include <algorithm>
#include <sstream>

namespace pgae {

void LangAeParams::init(RngStream& rng, std::size_t vocab, std::size_t hidden) {
    enc.init(rng, vocab, hidden);
    W_dec = init_uniform(rng, hidden, 2 * hidden);
    b_dec.assign(2 * hidden, 0.0);
    dec.init(rng, vocab, hidden);
    W_out = init_uniform(rng, hidden, vocab);
    b_out.assign(vocab, 0.0);
}

void LangAeParams::zero(std::size_t vocab, std::size_t hidden) {
    enc.zero(vocab, hidden);
    W_dec = Mat(2 * hidden, hidden);
    b_dec.assign(2 * hidden, 0.0);
    dec.zero(vocab, hidden);
    W_out = Mat(vocab, hidden);
    b_out.assign(vocab, 0.0);
}

void LangAeParams::collect(const std::string& prefix, std::vector<ParamRef>& out) {
    enc.collect(prefix + ".enc", out);
    out.push_back({prefix + ".W_dec", {W_dec.rows, W_dec.cols}, &W_dec.a});
    out.push_back({prefix + ".b_dec", {b_dec.size()}, &b_dec});
    dec.collect(prefix + ".dec", out);
    out.push_back({prefix + ".W_out", {W_out.rows, W_out.cols}, &W_out.a});
    out.push_back({prefix + ".b_out", {b_out.size()}, &b_out});
}

Vec onehot(std::size_t n, int idx) {
    Vec v(n, 0.0);
    if (idx < 0 || static_cast<std::size_t>(idx) >= n) shape_error("onehot: index out of range");
    v[static_cast<std::size_t>(idx)] = 1.0;
    return v;
}

Vec lang_encode(const LangAeParams& p, const TokenSeq& seq, LangEncCache* cache) {
    if (seq.empty()) shape_error("lang_encode: empty sequence");
    const std::size_t V = p.vocab_size();
    LstmState st = lstm_zero_state(p.hidden_size());
    if (cache) cache->steps.resize(seq.size());
    for (std::size_t t = 0; t < seq.size(); ++t)
        st = lstm_step(p.enc, onehot(V, seq[t]), st, cache ? &cache->steps[t] : nullptr);
    return concat(st.h, st.c);
}

void lang_encode_backward(const LangAeParams& p, const LangEncCache& cache, const Vec& dfeats,
                          LangAeParams& grads) {
    const std::size_t H = p.hidden_size();
    if (dfeats.size() != 2 * H) shape_error("lang_encode_backward: dfeats must be 2*hidden");
    std::vector<Vec> dh(cache.steps.size(), Vec(H, 0.0));
    dh.back() = Vec(dfeats.begin(), dfeats.begin() + static_cast<long>(H));
    Vec dc_final(dfeats.begin() + static_cast<long>(H), dfeats.end());
    lstm_backward(p.enc, cache.steps, dh, dc_final, grads.enc);
}

namespace {
// shared decoder-state plumbing: hc0 = W_dec * h + b_dec split into (h0, c0)
LstmState initial_state(const Mat& W_dec, const Vec& b_dec, const Vec& h_shared, Vec& hc0) {
    hc0 = vadd(matvec(W_dec, h_shared), b_dec);
    const std::size_t H = hc0.size() / 2;
    return {Vec(hc0.begin(), hc0.begin() + static_cast<long>(H)),
            Vec(hc0.begin() + static_cast<long>(H), hc0.end())};
}
}  // namespace

void lang_decode_teacher(const LangAeParams& p, const Vec& h_shared, const TokenSeq& target,
                         LangDecCache& cache) {
    if (target.empty()) shape_error("lang_decode_teacher: empty target");
    const std::size_t V = p.vocab_size();
    cache.h_shared = h_shared;
    LstmState st = initial_state(p.W_dec, p.b_dec, h_shared, cache.hc0);
    const std::size_t T = target.size();
    cache.steps.resize(T);
    cache.hs.resize(T);
    cache.probs.resize(T);
    for (std::size_t t = 0; t < T; ++t) {
        Vec input = (t == 0) ? Vec(V, 0.0) : onehot(V, target[t - 1]);  // BOS is the zero vector
        st = lstm_step(p.dec, input, st, &cache.steps[t]);
        cache.hs[t] = st.h;
        cache.probs[t] = softmax(vadd(matvec(p.W_out, st.h), p.b_out));
    }
}

void lang_decode_backward(const LangAeParams& p, const LangDecCache& cache,
                          const std::vector<Vec>& dlogits, LangAeParams& grads, Vec& dh_shared) {
    const std::size_t T = cache.steps.size();
    if (dlogits.size() != T) shape_error("lang_decode_backward: dlogits count mismatch");
    const std::size_t H = p.hidden_size();

    std::vector<Vec> dh(T, Vec(H, 0.0));
    for (std::size_t t = 0; t < T; ++t) {
        add_outer(grads.W_out, dlogits[t], cache.hs[t]);
        axpy(grads.b_out, 1.0, dlogits[t]);
        dh[t] = matvec_t(p.W_out, dlogits[t]);
    }

    // run the recurrent reverse pass, then peel off gradients on (h0, c0)
    LstmParams& g = grads.dec;
    Vec dh_rec(H, 0.0), dc_rec(H, 0.0);
    Vec dx, dh_prev, dc_prev;
    for (std::size_t t = T; t-- > 0;) {
        Vec dh_total = vadd(dh[t], dh_rec);
        lstm_step_backward(p.dec, cache.steps[t], dh_total, dc_rec, g, dx, dh_prev, dc_prev);
        dh_rec = std::move(dh_prev);
        dc_rec = std::move(dc_prev);
    }
    Vec d_hc0 = concat(dh_rec, dc_rec);
    add_outer(grads.W_dec, d_hc0, cache.h_shared);
    axpy(grads.b_dec, 1.0, d_hc0);
    Vec dh_from_dec = matvec_t(p.W_dec, d_hc0);
    if (dh_shared.empty()) dh_shared.assign(H, 0.0);
    axpy(dh_shared, 1.0, dh_from_dec);
}

TokenSeq lang_decode_greedy(const LangAeParams& p, const Vec& h_shared, int max_steps, int eos_index,
                            std::vector<Vec>* probs_out) {
    if (max_steps < 1) shape_error("lang_decode_greedy: max_steps must be >= 1");
    const std::size_t V = p.vocab_size();
    Vec hc0;
    LstmState st = initial_state(p.W_dec, p.b_dec, h_shared, hc0);
    TokenSeq out;
    if (probs_out) probs_out->clear();
    Vec input(V, 0.0);
    for (int t = 0; t < max_steps; ++t) {
        st = lstm_step(p.dec, input, st, nullptr);
        Vec y = softmax(vadd(matvec(p.W_out, st.h), p.b_out));
        int best = 0;
        for (std::size_t i = 1; i < V; ++i)
            if (y[i] > y[best]) best = static_cast<int>(i);  // ties keep the lowest index
        if (probs_out) probs_out->push_back(y);
        out.push_back(best);
        if (best == eos_index) break;
        input = onehot(V, best);
    }
    return out;
}

}  // namespace pgae
