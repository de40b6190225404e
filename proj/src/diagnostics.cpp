#include "pgae/diagnostics.hpp"

namespace pgae {

std::vector<SignalGradCheck> run_model_gradcheck(const ModelGradCheckConfig& cfg) {
    set_precision(Precision::f64);
    const Grammar& grammar = default_grammar();
    const Vocab vocab = Vocab::from_grammar(grammar);

    PgaeModel model;
    model.cfg.hidden = cfg.hidden;
    model.init(cfg.seed);

    RngStream rng(cfg.seed ^ 0x5bf03d1ULL);
    Sample s;
    s.id = 0;
    s.pattern = enumerate_patterns()[static_cast<std::size_t>(rng.uniform_int(kNumPatterns))];
    s.words = surface_words(grammar, s.pattern.verb, s.pattern.colour, s.pattern.speed, 0, 1, 0);
    s.M = cfg.M;
    for (int t = 0; t < cfg.M; ++t) {
        Vec j(static_cast<std::size_t>(model.cfg.joint_dim));
        for (double& x : j) x = rng.uniform(-0.8, 0.8);
        Vec v(static_cast<std::size_t>(model.cfg.vis_dim));
        for (double& x : v) x = rng.uniform(-0.9, 0.9);
        s.joints.push_back(std::move(j));
        s.feats_self.push_back(std::move(v));
    }

    const Vec word_w(static_cast<std::size_t>(vocab.size()), 1.0);
    auto params = model.collect();

    std::vector<SignalGradCheck> out;
    for (int sig = 0; sig < kNumSignals; ++sig) {
        const auto signal = static_cast<TaskSignal>(sig);
        TaskIO io = build_task_io(vocab, s, signal, Viewpoint::Self);

        PgaeGrads grads;
        grads.zero(model.cfg);
        ForwardCache cache;
        forward_train(model, io, word_w, 1.0, 1.0, cache);
        backward(model, io, cache, word_w, 1.0, 1.0, grads);
        auto analytic = grads.collect_const();

        auto loss = [&]() {
            ForwardCache c;
            return forward_train(model, io, word_w, 1.0, 1.0, c).loss_total;
        };
        RngStream probe_rng(cfg.seed ^ (0xabcd1234ULL + static_cast<std::uint64_t>(sig)));
        GradCheckOptions opt;
        opt.probes = cfg.probes;
        opt.delta = cfg.delta;
        out.push_back({signal, grad_check(loss, params, analytic, probe_rng, opt)});
    }
    return out;
}

}  // namespace pgae
