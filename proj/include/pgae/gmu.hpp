#pragma once
// Gated multimodal bottleneck. Fuses the two encoder states into the
// shared representation h = z (.) A_h + (1 - z) (.) L_h, with the gate
// reading the concatenation [A_feats; L_feats] in that order.

#include <string>
#include <vector>

#include "pgae/adam.hpp"
#include "pgae/rng.hpp"
#include "pgae/tensor.hpp"

namespace pgae {

struct GmuParams {
    Mat W_L;  // hidden x 2*hidden
    Vec b_L;
    Mat W_A;  // hidden x 2*hidden
    Vec b_A;
    Mat W_z;  // hidden x 4*hidden
    Vec b_z;

    std::size_t hidden_size() const { return W_L.rows; }

    void init(RngStream& rng, std::size_t hidden);
    void zero(std::size_t hidden);
    void collect(const std::string& prefix, std::vector<ParamRef>& out);
};

struct LatentPair {
    Vec L_feats, A_feats;     // 2*hidden each
    Vec L_h, A_h, z, h;       // hidden each
};

LatentPair gmu_fuse(const GmuParams& p, const Vec& L_feats, const Vec& A_feats);

// Gradients flow back through the gate, both tanh branches and the
// concatenation split; accumulates into `grads`.
void gmu_backward(const GmuParams& p, const LatentPair& cache, const Vec& dh, GmuParams& grads,
                  Vec& dL_feats, Vec& dA_feats);

}  // namespace pgae
