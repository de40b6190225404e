#pragma once
// Language autoencoder: one-hot word encoder LSTM and an autoregressive
// decoder whose initial state comes from one affine map of the shared
// representation. y_0 is the all-zero BOS vector, outside the vocabulary.

#include <span>
#include <vector>

#include "pgae/lstm.hpp"
#include "pgae/vocab.hpp"

namespace pgae {

struct LangAeParams {
    LstmParams enc;  // input = vocab size
    Mat W_dec;       // 2*hidden x hidden
    Vec b_dec;
    LstmParams dec;  // input = vocab size
    Mat W_out;       // vocab x hidden
    Vec b_out;

    std::size_t hidden_size() const { return enc.hidden_size(); }
    std::size_t vocab_size() const { return enc.input_size(); }

    void init(RngStream& rng, std::size_t vocab, std::size_t hidden);
    void zero(std::size_t vocab, std::size_t hidden);
    void collect(const std::string& prefix, std::vector<ParamRef>& out);
};

Vec onehot(std::size_t n, int idx);

struct LangEncCache {
    std::vector<LstmStepCache> steps;
};

// Runs the sequence from the zero state; returns [h_final; c_final].
Vec lang_encode(const LangAeParams& p, const TokenSeq& seq, LangEncCache* cache = nullptr);
void lang_encode_backward(const LangAeParams& p, const LangEncCache& cache, const Vec& dfeats,
                          LangAeParams& grads);

struct LangDecCache {
    Vec h_shared;
    Vec hc0;                          // W_dec * h + b_dec
    std::vector<LstmStepCache> steps;
    std::vector<Vec> hs;              // decoder h_t per step
    std::vector<Vec> probs;           // softmax output per step
};

// Teacher-forced pass over the target sequence; emits one probability row
// per target position.
void lang_decode_teacher(const LangAeParams& p, const Vec& h_shared, const TokenSeq& target,
                         LangDecCache& cache);

// dlogits holds the loss gradient on the pre-softmax logits per position.
void lang_decode_backward(const LangAeParams& p, const LangDecCache& cache,
                          const std::vector<Vec>& dlogits, LangAeParams& grads, Vec& dh_shared);

// Greedy autoregressive decoding; stops after <eos> or max_steps outputs.
// Ties break toward the lowest token index.
TokenSeq lang_decode_greedy(const LangAeParams& p, const Vec& h_shared, int max_steps, int eos_index,
                            std::vector<Vec>* probs_out = nullptr);

}  // namespace pgae
