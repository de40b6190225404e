#pragma once
// Peephole LSTM cell with exact forward and hand-derived backward passes.
// Input and forget gates peek at c_{t-1}; the output gate peeks at c_t.
// Gate packing order everywhere: i, f, g, o.

#include <string>
#include <vector>

#include "pgae/adam.hpp"
#include "pgae/rng.hpp"
#include "pgae/tensor.hpp"

namespace pgae {

struct LstmParams {
    // gate order: i, f, g, o (g has no peephole)
    Mat Wx[4];          // hidden x input
    Mat Uh[4];          // hidden x hidden
    Vec b[4];           // hidden
    Vec p_i, p_f, p_o;  // peephole vectors

    std::size_t input_size() const { return Wx[0].cols; }
    std::size_t hidden_size() const { return Wx[0].rows; }

    void init(RngStream& rng, std::size_t input, std::size_t hidden);
    void zero(std::size_t input, std::size_t hidden);  // all-zero parameters (grad holders)
    void collect(const std::string& prefix, std::vector<ParamRef>& out);
    void collect_const(const std::string& prefix, std::vector<const Vec*>& out) const;
};

struct LstmState {
    Vec h, c;
};

LstmState lstm_zero_state(std::size_t hidden);

struct LstmStepCache {
    Vec x, h_prev, c_prev;
    Vec i, f, g, o;  // post-activation gates
    Vec c, tanh_c;
};

// One forward step; when cache is non-null all intermediates are recorded.
LstmState lstm_step(const LstmParams& p, const Vec& x, const LstmState& prev,
                    LstmStepCache* cache = nullptr);

// Reverse one step. dh_in / dc_in are the total incoming gradients on h_t
// and c_t (upstream plus recurrent). Parameter gradients accumulate into
// `grads`; dx, dh_prev, dc_prev are overwritten.
void lstm_step_backward(const LstmParams& p, const LstmStepCache& cache, const Vec& dh_in,
                        const Vec& dc_in, LstmParams& grads, Vec& dx, Vec& dh_prev, Vec& dc_prev);

// Full-sequence reverse pass: upstream gradient on every h_t plus on the
// final cell state. Returns input gradients per step via dx_out when given.
void lstm_backward(const LstmParams& p, const std::vector<LstmStepCache>& caches,
                   const std::vector<Vec>& dh_upstream, const Vec& dc_final, LstmParams& grads,
                   std::vector<Vec>* dx_out = nullptr);

}  // namespace pgae
