#include "pgae/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

namespace pgae {

void TrainHistory::save_csv(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("failed to write history file: " + path);
    out << "epoch,mean_total,mean_lang,mean_act";
    for (int s = 0; s < kNumSignals; ++s) out << ",mean_total_" << signal_name(static_cast<TaskSignal>(s));
    out << '\n';
    char buf[64];
    for (const auto& r : rows) {
        out << r.epoch;
        const double vals[3] = {r.mean_total, r.mean_lang, r.mean_act};
        for (double v : vals) {
            std::snprintf(buf, sizeof(buf), ",%.8g", v);
            out << buf;
        }
        for (double v : r.signal_total) {
            std::snprintf(buf, sizeof(buf), ",%.8g", v);
            out << buf;
        }
        out << '\n';
    }
}

namespace {

struct Draw {
    const Sample* sample = nullptr;
    TaskSignal signal = TaskSignal::Describe;
    Viewpoint view = Viewpoint::Self;
};

struct WorkerSlot {
    PgaeGrads grads;
    ForwardResult result;
    std::string error;
    bool failed = false;
};

bool signal_uses_viewpoint(TaskSignal s) {
    return s == TaskSignal::Describe || s == TaskSignal::RepeatAction || s == TaskSignal::RepeatBoth;
}

void run_sample(const PgaeModel& model, const Vocab& vocab, const Draw& d, const Vec& word_w,
                const TrainConfig& cfg, WorkerSlot& slot) {
    try {
        TaskIO io = build_task_io(vocab, *d.sample, d.signal, d.view);
        ForwardCache cache;
        slot.result = forward_train(model, io, word_w, cfg.alpha, cfg.beta, cache);
        if (!std::isfinite(slot.result.loss_total)) {
            std::ostringstream os;
            os << "non-finite loss on sample " << d.sample->id << " under signal '"
               << signal_name(d.signal) << "'";
            throw TrainAbort(d.sample->id, d.signal, os.str());
        }
        slot.grads.zero(model.cfg);
        backward(model, io, cache, word_w, cfg.alpha, cfg.beta, slot.grads);
    } catch (const std::exception& e) {
        slot.failed = true;
        slot.error = e.what();
    }
}

}  // namespace

void train(PgaeModel& model, const Vocab& vocab, const std::vector<const Sample*>& trainset,
           const Vec& word_w, const TrainConfig& cfg, TrainHistory* history) {
    if (trainset.empty()) throw std::runtime_error("train: empty training set");
    if (cfg.epochs <= 0 || cfg.batch_size <= 0 || cfg.lr <= 0.0)
        throw std::runtime_error("train: epochs, batch size and learning rate must be positive");

    set_precision(cfg.precision);
    RngStream rng(cfg.seed);
    AdamConfig adam_cfg;
    adam_cfg.lr = cfg.lr;
    AdamState adam_state;
    auto param_refs = model.collect();
    adam_state.init(param_refs);

    const int n = static_cast<int>(trainset.size());
    std::vector<int> order(trainset.size());
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;

    unsigned hw = std::thread::hardware_concurrency();
    const int threads = cfg.threads > 0 ? cfg.threads : static_cast<int>(hw ? hw : 1);

    PgaeGrads batch_grads;
    batch_grads.zero(model.cfg);

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        // Fisher-Yates shuffle of the sample order
        for (int i = n - 1; i > 0; --i) {
            const auto j = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(i + 1)));
            std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
        }

        EpochStats stats;
        stats.epoch = epoch;
        double sig_sum[kNumSignals] = {0, 0, 0, 0, 0};
        int sig_count[kNumSignals] = {0, 0, 0, 0, 0};
        int seen = 0;

        for (int begin = 0; begin < n; begin += cfg.batch_size) {
            const int bsz = std::min(cfg.batch_size, n - begin);
            std::vector<Draw> draws(static_cast<std::size_t>(bsz));
            for (int b = 0; b < bsz; ++b) {
                Draw& d = draws[static_cast<std::size_t>(b)];
                d.sample = trainset[static_cast<std::size_t>(order[static_cast<std::size_t>(begin + b)])];
                d.signal = static_cast<TaskSignal>(rng.uniform_int(kNumSignals));
                if (signal_uses_viewpoint(d.signal) && d.sample->has_opposite())
                    d.view = rng.uniform_int(2) == 0 ? Viewpoint::Self : Viewpoint::Opposite;
            }

            std::vector<WorkerSlot> slots(static_cast<std::size_t>(bsz));
            if (threads <= 1 || bsz == 1) {
                for (int b = 0; b < bsz; ++b)
                    run_sample(model, vocab, draws[static_cast<std::size_t>(b)], word_w, cfg,
                               slots[static_cast<std::size_t>(b)]);
            } else {
                const int nt = std::min(threads, bsz);
                std::vector<std::thread> pool;
                pool.reserve(static_cast<std::size_t>(nt));
                for (int t = 0; t < nt; ++t) pool.emplace_back([&, t, nt] {
                    for (std::size_t b = static_cast<std::size_t>(t); b < slots.size();
                         b += static_cast<std::size_t>(nt))
                        run_sample(model, vocab, draws[b], word_w, cfg, slots[b]);
                });
                for (auto& th : pool) th.join();
            }

            batch_grads.zero(model.cfg);
            for (int b = 0; b < bsz; ++b) {
                auto& slot = slots[static_cast<std::size_t>(b)];
                if (slot.failed) throw std::runtime_error("training aborted: " + slot.error);
                slot.grads.accumulate(batch_grads);
                const auto sig = static_cast<int>(draws[static_cast<std::size_t>(b)].signal);
                stats.mean_total += slot.result.loss_total;
                stats.mean_lang += slot.result.loss_lang;
                stats.mean_act += slot.result.loss_act;
                sig_sum[sig] += slot.result.loss_total;
                ++sig_count[sig];
                ++seen;
            }
            batch_grads.scale(1.0 / static_cast<double>(bsz));

            if (!grads_cover_all_params(model, batch_grads))
                throw std::runtime_error("train: gradient does not cover every parameter");
            auto grad_refs = batch_grads.collect();
            adam_step(param_refs, grad_refs, adam_state, adam_cfg);
        }

        stats.mean_total /= seen;
        stats.mean_lang /= seen;
        stats.mean_act /= seen;
        for (int s = 0; s < kNumSignals; ++s)
            stats.signal_total[s] = sig_count[s] ? sig_sum[s] / sig_count[s]
                                                 : std::numeric_limits<double>::quiet_NaN();
        if (history) history->rows.push_back(stats);
        if (cfg.log_every > 0 && (epoch % cfg.log_every == 0 || epoch == 1))
            std::printf("epoch %5d  total %.6f  lang %.6f  act %.6f\n", epoch, stats.mean_total,
                        stats.mean_lang, stats.mean_act);
    }
}

}  // namespace pgae
