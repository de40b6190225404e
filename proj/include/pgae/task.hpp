#pragma once
// Signal-conditioned model inputs/targets and the composite loss.

#include <span>
#include <vector>

#include "pgae/dataset.hpp"
#include "pgae/vocab.hpp"

namespace pgae {

struct TaskIO {
    TaskSignal signal = TaskSignal::Describe;
    TokenSeq lang_in;      // [signal, words..., <eos>]
    TokenSeq lang_target;  // [...words..., <eos>] or [<eos>]
    std::span<const Vec> enc_v, enc_j;  // action encoder input sequence
    std::span<const Vec> dec_v;         // teacher-forcing features for the action decoder
    Vec j1;                             // decoder's initial ground-truth joints
    std::vector<Vec> act_target;        // targets for j-hat_2 .. j-hat_rollout

    int rollout() const { return static_cast<int>(act_target.size()) + 1; }
};

// Per-signal input/target table. The spans point into the sample, which
// must outlive the returned TaskIO.
TaskIO build_task_io(const Vocab& vocab, const Sample& s, TaskSignal signal,
                     Viewpoint view = Viewpoint::Self);

// Weighted cross entropy, mean over target positions, natural log clamped
// below at 1e-12.
double lang_loss(const TokenSeq& target, const std::vector<Vec>& probs, const Vec& w);
// Gradient on the pre-softmax logits (includes the 1/T factor and `scale`).
std::vector<Vec> lang_loss_dlogits(const TokenSeq& target, const std::vector<Vec>& probs, const Vec& w,
                                   double scale);

// Mean over time steps of the squared L2 norm of the 5-vector difference.
double act_loss(const std::vector<Vec>& target, const std::vector<Vec>& pred);
std::vector<Vec> act_loss_dpred(const std::vector<Vec>& target, const std::vector<Vec>& pred,
                                double scale);

double total_loss(double l_lang, double l_act, double alpha, double beta);

// Inverse-frequency word weights over the five signals' language targets:
// w[i] = total / (V * count[i]), clamped to [0.1, 10]; absent tokens get 1.
Vec word_weights(const Vocab& vocab, const std::vector<const Sample*>& train);

}  // namespace pgae
