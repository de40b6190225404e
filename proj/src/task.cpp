#include "pgae/task.hpp"

#include <cmath>
#include <sstream>

namespace pgae {

namespace {
constexpr double kLogClamp = 1e-12;

TokenSeq description_target(const Vocab& vocab, const Sample& s) {
    TokenSeq t;
    t.reserve(s.words.size() + 1);
    for (const auto& w : s.words) t.push_back(vocab.index(w));
    t.push_back(vocab.eos());
    return t;
}

void require_action(const Sample& s, TaskSignal sig) {
    if (s.joints.empty()) {
        std::ostringstream os;
        os << "signal '" << signal_name(sig) << "' requires joint data, sample " << s.id << " has none";
        throw std::runtime_error(os.str());
    }
}

void require_features(const Sample& s, TaskSignal sig, Viewpoint view) {
    const auto& f = s.feats(view);
    if (f.size() != s.joints.size()) {
        std::ostringstream os;
        os << "signal '" << signal_name(sig) << "' requires "
           << (view == Viewpoint::Self ? "self" : "opposite") << "-view visual features for sample "
           << s.id << " (" << f.size() << " frames vs " << s.joints.size() << " joint rows)";
        throw std::runtime_error(os.str());
    }
}
}  // namespace

TaskIO build_task_io(const Vocab& vocab, const Sample& s, TaskSignal signal, Viewpoint view) {
    require_action(s, signal);
    require_features(s, signal, view);
    const auto& feats = s.feats(view);
    const std::size_t M = s.joints.size();

    TaskIO io;
    io.signal = signal;
    io.j1 = s.joints[0];
    std::span<const Vec> all_v(feats.data(), M);
    std::span<const Vec> all_j(s.joints.data(), M);

    switch (signal) {
        case TaskSignal::Describe:
            io.lang_in = tokenize(vocab, {}, signal);
            io.lang_target = description_target(vocab, s);
            io.enc_v = all_v;
            io.enc_j = all_j;
            io.dec_v = all_v.subspan(0, M - 1);
            io.act_target.assign(M - 1, s.joints.back());  // static final-step joints
            break;
        case TaskSignal::Execute:
            io.lang_in = tokenize(vocab, s.words, signal);
            io.lang_target = {vocab.eos()};
            io.enc_v = all_v.subspan(0, 1);
            io.enc_j = all_j.subspan(0, 1);
            io.dec_v = all_v.subspan(0, M - 1);
            io.act_target.assign(s.joints.begin() + 1, s.joints.end());
            break;
        case TaskSignal::RepeatAction:
            io.lang_in = tokenize(vocab, {}, signal);
            io.lang_target = {vocab.eos()};
            io.enc_v = all_v;
            io.enc_j = all_j;
            io.dec_v = all_v.subspan(0, M - 1);
            io.act_target.assign(s.joints.begin() + 1, s.joints.end());
            break;
        case TaskSignal::RepeatBoth:
            io.lang_in = tokenize(vocab, s.words, signal);
            io.lang_target = description_target(vocab, s);
            io.enc_v = all_v;
            io.enc_j = all_j;
            io.dec_v = all_v.subspan(0, M - 1);
            io.act_target.assign(s.joints.begin() + 1, s.joints.end());
            break;
        case TaskSignal::RepeatLanguage:
            io.lang_in = tokenize(vocab, s.words, signal);
            io.lang_target = description_target(vocab, s);
            io.enc_v = all_v.subspan(0, 1);
            io.enc_j = all_j.subspan(0, 1);
            io.dec_v = all_v.subspan(0, 1);
            io.act_target.assign(1, s.joints[0]);  // reproduce the first time step
            break;
    }
    return io;
}

double lang_loss(const TokenSeq& target, const std::vector<Vec>& probs, const Vec& w) {
    if (target.size() != probs.size()) {
        std::ostringstream os;
        os << "lang_loss: " << target.size() << " targets vs " << probs.size() << " probability rows";
        shape_error(os.str());
    }
    double total = 0.0;
    for (std::size_t t = 0; t < target.size(); ++t) {
        const int k = target[t];
        const double y = std::max(probs[t][static_cast<std::size_t>(k)], kLogClamp);
        total += -w[static_cast<std::size_t>(k)] * std::log(y);
    }
    return total / static_cast<double>(target.size());
}

std::vector<Vec> lang_loss_dlogits(const TokenSeq& target, const std::vector<Vec>& probs, const Vec& w,
                                   double scale) {
    if (target.size() != probs.size()) shape_error("lang_loss_dlogits: target/probs count mismatch");
    const double inv_t = scale / static_cast<double>(target.size());
    std::vector<Vec> dlogits(target.size());
    for (std::size_t t = 0; t < target.size(); ++t) {
        const int k = target[t];
        const std::size_t V = probs[t].size();
        Vec d(V, 0.0);
        // position contributes a constant when the clamp is active
        if (probs[t][static_cast<std::size_t>(k)] > kLogClamp) {
            const double wk = w[static_cast<std::size_t>(k)];
            for (std::size_t i = 0; i < V; ++i) d[i] = inv_t * wk * probs[t][i];
            d[static_cast<std::size_t>(k)] -= inv_t * wk;
        }
        dlogits[t] = std::move(d);
    }
    return dlogits;
}

double act_loss(const std::vector<Vec>& target, const std::vector<Vec>& pred) {
    if (target.size() != pred.size() || target.empty()) {
        std::ostringstream os;
        os << "act_loss: " << target.size() << " target steps vs " << pred.size() << " predictions";
        shape_error(os.str());
    }
    double total = 0.0;
    for (std::size_t t = 0; t < target.size(); ++t) {
        if (target[t].size() != pred[t].size()) shape_error("act_loss: joint width mismatch");
        for (std::size_t k = 0; k < target[t].size(); ++k) {
            const double d = target[t][k] - pred[t][k];
            total += d * d;
        }
    }
    return total / static_cast<double>(target.size());
}

std::vector<Vec> act_loss_dpred(const std::vector<Vec>& target, const std::vector<Vec>& pred,
                                double scale) {
    if (target.size() != pred.size()) shape_error("act_loss_dpred: step count mismatch");
    const double f = 2.0 * scale / static_cast<double>(target.size());
    std::vector<Vec> d(target.size());
    for (std::size_t t = 0; t < target.size(); ++t) {
        d[t].resize(target[t].size());
        for (std::size_t k = 0; k < target[t].size(); ++k)
            d[t][k] = f * (pred[t][k] - target[t][k]);
    }
    return d;
}

double total_loss(double l_lang, double l_act, double alpha, double beta) {
    return alpha * l_lang + beta * l_act;
}

Vec word_weights(const Vocab& vocab, const std::vector<const Sample*>& train) {
    if (train.empty()) throw std::runtime_error("word_weights: empty training set");
    const std::size_t V = static_cast<std::size_t>(vocab.size());
    std::vector<long long> count(V, 0);
    long long total = 0;
    const TaskSignal sigs[] = {TaskSignal::Describe, TaskSignal::Execute, TaskSignal::RepeatAction,
                               TaskSignal::RepeatBoth, TaskSignal::RepeatLanguage};
    for (const Sample* s : train) {
        for (TaskSignal sig : sigs) {
            // language target per signal: description+<eos> for describe /
            // repeat-both / repeat-language, bare <eos> otherwise
            if (sig == TaskSignal::Describe || sig == TaskSignal::RepeatBoth ||
                sig == TaskSignal::RepeatLanguage) {
                for (const auto& w : s->words) {
                    ++count[static_cast<std::size_t>(vocab.index(w))];
                    ++total;
                }
            }
            ++count[static_cast<std::size_t>(vocab.eos())];
            ++total;
        }
    }
    Vec w(V, 1.0);
    for (std::size_t i = 0; i < V; ++i) {
        if (count[i] == 0) continue;
        const double raw =
            static_cast<double>(total) / (static_cast<double>(V) * static_cast<double>(count[i]));
        w[i] = std::min(10.0, std::max(0.1, raw));
    }
    return w;
}

}  // namespace pgae
