// Command-line surface: dataset generation, CAE training/encoding, model
// training, evaluation, single-sample translation and gradient checking.
// Exit codes: 0 success, 1 usage error, 2 runtime failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "pgae/checkpoint.hpp"
#include "pgae/diagnostics.hpp"
#include "pgae/metrics.hpp"
#include "pgae/synthset.hpp"
#include "pgae/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pgae;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split_words(const std::string& text) {
    std::vector<std::string> words;
    std::string cur;
    for (char c : text) {
        if (c == ' ' || c == '\t') {
            if (!cur.empty()) words.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) words.push_back(cur);
    return words;
}

int cmd_dataset_gen(const std::string& out, std::uint64_t seed, int height, int width) {
    GenConfig cfg;
    cfg.root = out;
    cfg.seed = seed;
    cfg.render.h = height;
    cfg.render.w = width;
    Dataset ds = build_dataset(cfg);
    SplitSummary sp = split(ds);
    std::printf("generated %zu samples under %s (%zu train / %zu test, %d patterns)\n",
                ds.samples.size(), out.c_str(), sp.train_ids.size(), sp.test_ids.size(), kNumPatterns);
    return 0;
}

std::vector<Image> load_strided_frames(const Dataset& ds, int stride) {
    std::vector<Image> frames;
    for (const auto& s : ds.samples) {
        for (const char* view : {"frames_self", "frames_opposite"}) {
            for (int t = 0; t < s.M; t += stride) {
                char name[16];
                std::snprintf(name, sizeof(name), "%03d.ppm", t);
                frames.push_back(load_ppm(s.dir + "/" + view + "/" + name));
            }
        }
    }
    return frames;
}

int cmd_cae_train(const std::string& data, const std::string& out, const CaeTrainConfig& cfg) {
    Dataset ds = load_dataset(data, false);
    std::vector<Image> frames = load_strided_frames(ds, cfg.stride);
    std::vector<const Image*> refs;
    refs.reserve(frames.size());
    for (const auto& f : frames) refs.push_back(&f);
    std::printf("training channel-separated CAE on %zu frames (%dx%d)\n", frames.size(), ds.frame_h,
                ds.frame_w);
    CaeParams cae;
    cae.init(cfg.seed, ds.frame_h, ds.frame_w);
    for (int c = 0; c < 3; ++c) cae_train(cae.ch[c], refs, c, cfg);
    save_cae_checkpoint(out, cae, ds.frame_h, ds.frame_w);
    std::printf("saved CAE checkpoint to %s\n", out.c_str());
    return 0;
}

int cmd_cae_encode(const std::string& data, const std::string& cae_path, int threads) {
    Dataset ds = load_dataset(data, false);
    CaeParams cae = load_cae_checkpoint(cae_path);

    auto encode_sample = [&](const Sample& s) {
        for (const char* view : {"frames_self", "frames_opposite"}) {
            std::vector<Vec> rows;
            rows.reserve(static_cast<std::size_t>(s.M));
            for (int t = 0; t < s.M; ++t) {
                char name[16];
                std::snprintf(name, sizeof(name), "%03d.ppm", t);
                rows.push_back(extract_features(cae, load_ppm(s.dir + "/" + view + "/" + name)));
            }
            const char* file = view == std::string("frames_self") ? "features_self.csv"
                                                                  : "features_opposite.csv";
            save_csv(s.dir + "/" + file, rows, 9);
        }
    };

    unsigned hw = std::thread::hardware_concurrency();
    const int nt = threads > 0 ? threads : static_cast<int>(hw ? hw : 1);
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t)
        pool.emplace_back([&, t] {
            for (std::size_t i = static_cast<std::size_t>(t); i < ds.samples.size();
                 i += static_cast<std::size_t>(nt))
                encode_sample(ds.samples[i]);
        });
    for (auto& th : pool) th.join();
    std::printf("wrote visual features for %zu samples\n", ds.samples.size());
    return 0;
}

int cmd_train(const std::string& data, const std::string& out, const std::string& history_path,
              TrainConfig cfg, int hidden) {
    Dataset ds = load_dataset(data, true);
    const Vocab vocab = Vocab::load(data + "/vocab.txt");
    auto trainset = ds.split(false);
    const Vec word_w = word_weights(vocab, trainset);

    PgaeModel model;
    model.cfg.hidden = hidden;
    model.init(cfg.seed);

    TrainHistory history;
    train(model, vocab, trainset, word_w, cfg, &history);
    if (!history_path.empty()) history.save_csv(history_path);

    json echo = {{"train",
                  {{"epochs", cfg.epochs},
                   {"batch_size", cfg.batch_size},
                   {"lr", cfg.lr},
                   {"alpha", cfg.alpha},
                   {"beta", cfg.beta},
                   {"seed", cfg.seed},
                   {"precision", cfg.precision == Precision::f64 ? "f64" : "f32"},
                   {"dataset_seed", ds.seed}}}};
    save_model_checkpoint(out, model, vocab, word_w, echo.dump());
    std::printf("saved model checkpoint to %s\n", out.c_str());
    return 0;
}

int cmd_eval(const std::string& data, const std::string& ckpt, const std::string& json_out,
             bool on_train, int threads) {
    Dataset ds = load_dataset(data, true);
    Vocab vocab = Vocab::from_grammar(default_grammar());
    PgaeModel model = load_model_checkpoint(ckpt, &vocab);
    EvalReport rep = eval_all_tasks(model, vocab, ds.split(on_train ? false : true), threads);
    std::fputs(eval_report_table(rep).c_str(), stdout);
    if (!json_out.empty()) {
        std::ofstream(json_out, std::ios::binary) << eval_report_json(rep);
        std::printf("wrote %s\n", json_out.c_str());
    }
    return 0;
}

int cmd_translate(const std::string& ckpt, const std::string& signal_name_arg,
                  const std::string& sample_dir, const std::string& text, const std::string& view_name,
                  const std::string& out_csv, const std::string& cae_path) {
    TaskSignal signal;
    if (!signal_from_name(signal_name_arg, signal)) throw UsageError("unknown signal: " + signal_name_arg);
    if (signal == TaskSignal::RepeatBoth)
        throw UsageError("repeat-both is a training-only signal");
    const bool needs_action = signal == TaskSignal::Describe || signal == TaskSignal::RepeatAction;
    if (needs_action && sample_dir.empty())
        throw UsageError(std::string("signal '") + signal_name(signal) + "' requires --sample-dir");
    if (!needs_action && text.empty())
        throw UsageError(std::string("signal '") + signal_name(signal) + "' requires --text");

    Vocab vocab = Vocab::from_grammar(default_grammar());
    PgaeModel model = load_model_checkpoint(ckpt, &vocab);
    const Viewpoint view = view_name == "opposite" ? Viewpoint::Opposite : Viewpoint::Self;

    Sample s;
    s.id = 0;
    if (!sample_dir.empty()) {
        std::ifstream meta_in(sample_dir + "/meta.json");
        if (meta_in) {
            json meta = json::parse(meta_in);
            s.words = meta.at("words").get<std::vector<std::string>>();
        }
        s.joints = load_csv(sample_dir + "/joints.csv");
        s.M = static_cast<int>(s.joints.size());
        auto load_or_encode = [&](const char* csv, const char* frames) {
            if (fs::exists(sample_dir + "/" + csv)) return load_csv(sample_dir + "/" + csv);
            if (cae_path.empty())
                throw std::runtime_error(std::string("missing ") + csv +
                                         "; run `cae encode` or pass --cae to encode on the fly");
            CaeParams cae = load_cae_checkpoint(cae_path);
            std::vector<Vec> rows;
            for (int t = 0; t < s.M; ++t) {
                char name[16];
                std::snprintf(name, sizeof(name), "%03d.ppm", t);
                rows.push_back(extract_features(cae, load_ppm(sample_dir + "/" + frames + "/" + name)));
            }
            return rows;
        };
        s.feats_self = load_or_encode("features_self.csv", "frames_self");
        s.feats_opposite = load_or_encode("features_opposite.csv", "frames_opposite");
    }
    if (!text.empty()) {
        s.words = split_words(text);
        for (const auto& w : s.words)
            if (!vocab.contains(w)) throw UsageError("word not in vocabulary: '" + w + "'");
    }
    if (s.joints.empty()) {
        // deployment from bare text: no recorded action, so the rollout
        // length follows the speed word and the visual context is zero
        int M = kFastLen;
        const Grammar& g = default_grammar();
        for (const auto& w : s.words) {
            WordMeaning wm;
            if (lookup_word(g, w, wm) && wm.category == 2 && wm.meaning == 1) M = kSlowLen;
        }
        s.M = M;
        s.joints.assign(static_cast<std::size_t>(M), Vec(static_cast<std::size_t>(model.cfg.joint_dim), 0.0));
        s.feats_self.assign(static_cast<std::size_t>(M),
                            Vec(static_cast<std::size_t>(model.cfg.vis_dim), 0.0));
        s.feats_opposite = s.feats_self;
    }

    TaskIO io = build_task_io(vocab, s, signal, view);
    InferenceResult res = infer(model, io, vocab.eos());

    std::string desc;
    for (int t : res.lang_tokens) {
        if (!desc.empty()) desc += ' ';
        desc += vocab.token(t);
    }
    std::printf("description: %s\n", desc.c_str());

    if (!out_csv.empty()) {
        std::vector<Vec> rows;
        rows.push_back(io.j1);  // j-hat_1 echoes j_1
        rows.insert(rows.end(), res.joints.begin(), res.joints.end());
        save_csv(out_csv, rows, 6);
        std::printf("wrote %zu-row joint trajectory to %s\n", rows.size(), out_csv.c_str());
    }
    return 0;
}

int cmd_gradcheck(std::size_t probes, double delta, std::uint64_t seed) {
    ModelGradCheckConfig cfg;
    cfg.probes = probes;
    cfg.delta = delta;
    cfg.seed = seed;
    bool ok = true;
    for (const auto& r : run_model_gradcheck(cfg)) {
        std::printf("signal %-16s max rel err %.3e  (worst: %s[%zu] analytic %.6e numeric %.6e)\n",
                    signal_name(r.signal), r.result.max_rel_err, r.result.worst_tensor.c_str(),
                    r.result.worst_index, r.result.worst_analytic, r.result.worst_numeric);
        ok = ok && r.result.max_rel_err < 1e-4;
    }
    std::printf(ok ? "gradcheck PASS\n" : "gradcheck FAIL\n");
    return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"paired gated autoencoders: action-language translation"};
    app.require_subcommand(1);

    // dataset gen
    auto* dataset = app.add_subcommand("dataset", "dataset management");
    dataset->require_subcommand(1);
    auto* gen = dataset->add_subcommand("gen", "generate the synthetic tabletop dataset");
    std::string gen_out = "data";
    std::uint64_t gen_seed = 7;
    int gen_h = 60, gen_w = 80;
    gen->add_option("--out", gen_out, "output directory");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--height", gen_h, "frame height (60 desk scale, 120 full)");
    gen->add_option("--width", gen_w, "frame width (80 desk scale, 160 full)");

    // cae train / encode
    auto* cae = app.add_subcommand("cae", "visual feature extractor");
    cae->require_subcommand(1);
    auto* cae_train_cmd = cae->add_subcommand("train", "train the channel-separated CAE");
    std::string cae_data = "data", cae_out = "cae.ckpt";
    CaeTrainConfig cae_cfg;
    cae_cfg.log_every = 1;
    cae_train_cmd->add_option("--data", cae_data, "dataset directory");
    cae_train_cmd->add_option("--out", cae_out, "checkpoint path");
    cae_train_cmd->add_option("--epochs", cae_cfg.epochs, "training epochs");
    cae_train_cmd->add_option("--lr", cae_cfg.lr, "learning rate");
    cae_train_cmd->add_option("--seed", cae_cfg.seed, "seed");
    cae_train_cmd->add_option("--stride", cae_cfg.stride, "frame subsampling stride");
    cae_train_cmd->add_option("--threads", cae_cfg.threads, "worker threads (0 = auto)");

    auto* cae_encode_cmd = cae->add_subcommand("encode", "extract per-frame visual features");
    std::string enc_data = "data", enc_cae = "cae.ckpt";
    int enc_threads = 0;
    cae_encode_cmd->add_option("--data", enc_data, "dataset directory");
    cae_encode_cmd->add_option("--cae", enc_cae, "CAE checkpoint");
    cae_encode_cmd->add_option("--threads", enc_threads, "worker threads (0 = auto)");

    // train
    auto* train_cmd = app.add_subcommand("train", "train the translation model");
    std::string train_data = "data", train_out = "model.ckpt", train_history;
    TrainConfig tcfg;
    tcfg.log_every = 10;
    int train_hidden = 50;
    std::string precision = "f64";
    train_cmd->add_option("--data", train_data, "dataset directory (features must exist)");
    train_cmd->add_option("--out", train_out, "checkpoint path");
    train_cmd->add_option("--history", train_history, "epoch-loss CSV path");
    train_cmd->add_option("--epochs", tcfg.epochs, "training epochs");
    train_cmd->add_option("--batch", tcfg.batch_size, "batch size");
    train_cmd->add_option("--lr", tcfg.lr, "learning rate");
    train_cmd->add_option("--alpha", tcfg.alpha, "language loss weight");
    train_cmd->add_option("--beta", tcfg.beta, "action loss weight");
    train_cmd->add_option("--seed", tcfg.seed, "seed");
    train_cmd->add_option("--hidden", train_hidden, "hidden size");
    train_cmd->add_option("--threads", tcfg.threads, "worker threads (0 = auto)");
    train_cmd->add_option("--log-every", tcfg.log_every, "print loss every N epochs (0 = silent)");
    train_cmd->add_option("--precision", precision, "f64 or f32")
        ->check(CLI::IsMember({"f64", "f32"}));

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "evaluate all four inference tasks");
    std::string eval_data = "data", eval_ckpt = "model.ckpt", eval_json;
    bool eval_on_train = false;
    int eval_threads = 0;
    eval_cmd->add_option("--data", eval_data, "dataset directory");
    eval_cmd->add_option("--checkpoint", eval_ckpt, "model checkpoint");
    eval_cmd->add_option("--json", eval_json, "write the report as JSON");
    eval_cmd->add_flag("--train-split", eval_on_train, "evaluate the training split instead of test");
    eval_cmd->add_option("--threads", eval_threads, "worker threads (0 = auto)");

    // translate
    auto* tr = app.add_subcommand("translate", "run one sample through a chosen signal");
    std::string tr_ckpt = "model.ckpt", tr_signal, tr_sample, tr_text, tr_view = "self", tr_out,
                tr_cae;
    tr->add_option("--checkpoint", tr_ckpt, "model checkpoint");
    tr->add_option("--signal", tr_signal, "describe | execute | repeat-action | repeat-language")
        ->required();
    tr->add_option("--sample-dir", tr_sample, "sample directory (action input)");
    tr->add_option("--text", tr_text, "description text (language input)");
    tr->add_option("--view", tr_view, "self or opposite")->check(CLI::IsMember({"self", "opposite"}));
    tr->add_option("--out", tr_out, "trajectory CSV path");
    tr->add_option("--cae", tr_cae, "CAE checkpoint for on-the-fly feature extraction");

    // gradcheck
    auto* gc = app.add_subcommand("gradcheck", "finite-difference gradient verification per signal");
    std::size_t gc_probes = 500;
    double gc_delta = 1e-5;
    std::uint64_t gc_seed = 1;
    gc->add_option("--probes", gc_probes, "probed parameters per signal");
    gc->add_option("--delta", gc_delta, "finite-difference step");
    gc->add_option("--seed", gc_seed, "seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 1;
    }

    try {
        if (gen->parsed()) return cmd_dataset_gen(gen_out, gen_seed, gen_h, gen_w);
        if (cae_train_cmd->parsed()) return cmd_cae_train(cae_data, cae_out, cae_cfg);
        if (cae_encode_cmd->parsed()) return cmd_cae_encode(enc_data, enc_cae, enc_threads);
        if (train_cmd->parsed()) {
            tcfg.precision = precision == "f32" ? Precision::f32 : Precision::f64;
            return cmd_train(train_data, train_out, train_history, tcfg, train_hidden);
        }
        if (eval_cmd->parsed()) return cmd_eval(eval_data, eval_ckpt, eval_json, eval_on_train, eval_threads);
        if (tr->parsed())
            return cmd_translate(tr_ckpt, tr_signal, tr_sample, tr_text, tr_view, tr_out, tr_cae);
        if (gc->parsed()) return cmd_gradcheck(gc_probes, gc_delta, gc_seed);
        std::fprintf(stderr, "no subcommand given\n");
        return 1;
    } catch (const UsageError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
