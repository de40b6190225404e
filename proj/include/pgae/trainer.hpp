#pragma once
// End-to-end training loop: per sample a random signal (uniform over the
// five) and, for describe / repeat-action / repeat-both, a random
// viewpoint; gradients accumulate over the batch, one Adam step per batch.
// Deterministic given the seed regardless of thread count.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pgae/model.hpp"

namespace pgae {

struct TrainConfig {
    int epochs = 6000;
    int batch_size = 6;
    double lr = 1e-5;
    double alpha = 1.0;
    double beta = 1.0;
    std::uint64_t seed = 1;
    Precision precision = Precision::f64;
    int threads = 0;        // 0 = hardware concurrency
    int log_every = 0;      // print epoch stats every N epochs (0 = silent)
};

struct EpochStats {
    int epoch = 0;
    double mean_total = 0.0, mean_lang = 0.0, mean_act = 0.0;
    double signal_total[kNumSignals] = {0, 0, 0, 0, 0};  // NaN when a signal was not drawn
};

struct TrainHistory {
    std::vector<EpochStats> rows;
    void save_csv(const std::string& path) const;
};

// Thrown when a loss goes non-finite; names the offending sample and signal.
struct TrainAbort : std::runtime_error {
    int sample_id;
    TaskSignal signal;
    TrainAbort(int sample, TaskSignal sig, const std::string& msg)
        : std::runtime_error(msg), sample_id(sample), signal(sig) {}
};

void train(PgaeModel& model, const Vocab& vocab, const std::vector<const Sample*>& trainset,
           const Vec& word_w, const TrainConfig& cfg, TrainHistory* history = nullptr);

}  // namespace pgae
