#pragma once
// The full paired-autoencoder model: language AE + action AE joined by the
// gated bottleneck. Forward/backward run the entire network for every
// signal, so each parameter receives a gradient on each pass.

#include <cstdint>
#include <string>

#include "pgae/act_ae.hpp"
#include "pgae/gmu.hpp"
#include "pgae/lang_ae.hpp"
#include "pgae/task.hpp"

namespace pgae {

struct ModelConfig {
    int vocab = kVocabSize;
    int hidden = 50;
    int vis_dim = 30;
    int joint_dim = 5;
    int max_words = 3;  // language decoder runs at most max_words+1 steps

    int lang_max_steps() const { return max_words + 1; }
};

struct PgaeGrads;

struct PgaeModel {
    ModelConfig cfg;
    LangAeParams lang;
    ActAeParams act;
    GmuParams gmu;

    void init(std::uint64_t seed);
    std::vector<ParamRef> collect();
    std::vector<const Vec*> collect_const() const;
};

// Gradient holder with the exact same tensor layout as the model.
struct PgaeGrads {
    ModelConfig cfg;
    LangAeParams lang;
    ActAeParams act;
    GmuParams gmu;

    void zero(const ModelConfig& cfg);
    std::vector<ParamRef> collect();
    std::vector<const Vec*> collect_const() const;
    void accumulate(PgaeGrads& into) const;  // into += *this
    void scale(double s);
};

struct ForwardCache {
    LangEncCache lang_enc;
    ActEncCache act_enc;
    LatentPair latent;
    LangDecCache lang_dec;
    ActDecCache act_dec;
};

struct ForwardResult {
    double loss_lang = 0.0;
    double loss_act = 0.0;
    double loss_total = 0.0;
};

ForwardResult forward_train(const PgaeModel& m, const TaskIO& io, const Vec& word_w, double alpha,
                            double beta, ForwardCache& cache);

// Accumulates into `grads` (call grads.zero first for a fresh pass).
void backward(const PgaeModel& m, const TaskIO& io, const ForwardCache& cache, const Vec& word_w,
              double alpha, double beta, PgaeGrads& grads);

struct InferenceResult {
    TokenSeq lang_tokens;        // greedy decode, <eos>-terminated when emitted
    std::vector<Vec> joints;     // j-hat_2 .. j-hat_rollout
    LatentPair latent;
};

// Inference uses greedy language decoding; the action rollout length and
// teacher-forcing features come from the TaskIO.
InferenceResult infer(const PgaeModel& m, const TaskIO& io, int eos_index);

// True when `grads` carries one gradient tensor per model parameter.
bool grads_cover_all_params(PgaeModel& m, PgaeGrads& g);

}  // namespace pgae
