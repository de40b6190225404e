#include "pgae/gmu.hpp"

#include <sstream>

namespace pgae {

void GmuParams::init(RngStream& rng, std::size_t hidden) {
    W_L = init_uniform(rng, 2 * hidden, hidden);
    b_L.assign(hidden, 0.0);
    W_A = init_uniform(rng, 2 * hidden, hidden);
    b_A.assign(hidden, 0.0);
    W_z = init_uniform(rng, 4 * hidden, hidden);
    b_z.assign(hidden, 0.0);
}

void GmuParams::zero(std::size_t hidden) {
    W_L = Mat(hidden, 2 * hidden);
    b_L.assign(hidden, 0.0);
    W_A = Mat(hidden, 2 * hidden);
    b_A.assign(hidden, 0.0);
    W_z = Mat(hidden, 4 * hidden);
    b_z.assign(hidden, 0.0);
}

void GmuParams::collect(const std::string& prefix, std::vector<ParamRef>& out) {
    out.push_back({prefix + ".W_L", {W_L.rows, W_L.cols}, &W_L.a});
    out.push_back({prefix + ".b_L", {b_L.size()}, &b_L});
    out.push_back({prefix + ".W_A", {W_A.rows, W_A.cols}, &W_A.a});
    out.push_back({prefix + ".b_A", {b_A.size()}, &b_A});
    out.push_back({prefix + ".W_z", {W_z.rows, W_z.cols}, &W_z.a});
    out.push_back({prefix + ".b_z", {b_z.size()}, &b_z});
}

LatentPair gmu_fuse(const GmuParams& p, const Vec& L_feats, const Vec& A_feats) {
    const std::size_t H = p.hidden_size();
    if (L_feats.size() != 2 * H || A_feats.size() != 2 * H) {
        std::ostringstream os;
        os << "gmu_fuse: expected feature length " << 2 * H << ", got L=" << L_feats.size()
           << " A=" << A_feats.size();
        shape_error(os.str());
    }
    LatentPair lp;
    lp.L_feats = L_feats;
    lp.A_feats = A_feats;
    lp.L_h = tanh_v(vadd(matvec(p.W_L, L_feats), p.b_L));
    lp.A_h = tanh_v(vadd(matvec(p.W_A, A_feats), p.b_A));
    lp.z = sigmoid(vadd(matvec(p.W_z, concat(A_feats, L_feats)), p.b_z));
    lp.h.resize(H);
    for (std::size_t k = 0; k < H; ++k) lp.h[k] = lp.z[k] * lp.A_h[k] + (1.0 - lp.z[k]) * lp.L_h[k];
    quantize(lp.h);
    return lp;
}

void gmu_backward(const GmuParams& p, const LatentPair& cache, const Vec& dh, GmuParams& grads,
                  Vec& dL_feats, Vec& dA_feats) {
    const std::size_t H = p.hidden_size();
    if (dh.size() != H) shape_error("gmu_backward: dh size does not match hidden size");
    if (cache.z.size() != H || cache.L_feats.size() != 2 * H)
        shape_error("gmu_backward: cache does not match parameters");

    Vec dz(H), dA_h(H), dL_h(H);
    for (std::size_t k = 0; k < H; ++k) {
        dz[k] = dh[k] * (cache.A_h[k] - cache.L_h[k]);
        dA_h[k] = dh[k] * cache.z[k];
        dL_h[k] = dh[k] * (1.0 - cache.z[k]);
    }

    Vec da_z(H), da_A(H), da_L(H);
    for (std::size_t k = 0; k < H; ++k) {
        da_z[k] = dz[k] * cache.z[k] * (1.0 - cache.z[k]);
        da_A[k] = dA_h[k] * (1.0 - cache.A_h[k] * cache.A_h[k]);
        da_L[k] = dL_h[k] * (1.0 - cache.L_h[k] * cache.L_h[k]);
    }

    add_outer(grads.W_z, da_z, concat(cache.A_feats, cache.L_feats));
    axpy(grads.b_z, 1.0, da_z);
    add_outer(grads.W_A, da_A, cache.A_feats);
    axpy(grads.b_A, 1.0, da_A);
    add_outer(grads.W_L, da_L, cache.L_feats);
    axpy(grads.b_L, 1.0, da_L);

    Vec dcat = matvec_t(p.W_z, da_z);  // [dA_feats; dL_feats]
    dA_feats = matvec_t(p.W_A, da_A);
    dL_feats = matvec_t(p.W_L, da_L);
    for (std::size_t k = 0; k < 2 * H; ++k) {
        dA_feats[k] += dcat[k];
        dL_feats[k] += dcat[2 * H + k];
    }
}

}  // namespace pgae
