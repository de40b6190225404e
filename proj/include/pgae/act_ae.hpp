#pragma once
// Action autoencoder over (visual feature, joint vector) pairs. The
// decoder rolls out autoregressively in the joints while visual features
// are teacher-forced; the first predicted step echoes j_1.

#include <span>
#include <vector>

#include "pgae/lstm.hpp"

namespace pgae {

struct ActAeParams {
    LstmParams enc;  // input = vis_dim + joint_dim
    Mat W_dec;       // 2*hidden x hidden
    Vec b_dec;
    LstmParams dec;  // input = vis_dim + joint_dim
    Mat W_out;       // joint_dim x hidden
    Vec b_out;
    std::size_t vis_dim = 0, joint_dim = 0;

    std::size_t hidden_size() const { return enc.hidden_size(); }

    void init(RngStream& rng, std::size_t vis, std::size_t joints, std::size_t hidden);
    void zero(std::size_t vis, std::size_t joints, std::size_t hidden);
    void collect(const std::string& prefix, std::vector<ParamRef>& out);
};

struct ActEncCache {
    std::vector<LstmStepCache> steps;
};

// Encodes ((v_1, j_1) .. (v_M, j_M)) from the zero state; returns [h_M; c_M].
Vec act_encode(const ActAeParams& p, std::span<const Vec> vs, std::span<const Vec> js,
               ActEncCache* cache = nullptr);
void act_encode_backward(const ActAeParams& p, const ActEncCache& cache, const Vec& dfeats,
                         ActAeParams& grads);

struct ActDecCache {
    Vec h_shared;
    Vec hc0;
    std::vector<LstmStepCache> steps;
    std::vector<Vec> hs;
    std::vector<Vec> preds;  // j-hat_2 .. j-hat_rollout
};

// Produces rollout-1 joint predictions. vs must provide at least rollout-1
// teacher-forcing feature vectors.
std::vector<Vec> act_decode(const ActAeParams& p, const Vec& h_shared, std::span<const Vec> vs,
                            const Vec& j1, int rollout, ActDecCache* cache = nullptr);

// dpred: loss gradient on each predicted joint vector. The autoregressive
// feedback path (prediction feeding the next step's input) is included.
void act_decode_backward(const ActAeParams& p, const ActDecCache& cache,
                         const std::vector<Vec>& dpred, ActAeParams& grads, Vec& dh_shared);

}  // namespace pgae
