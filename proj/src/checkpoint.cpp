#include "pgae/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <map>

#include "json.hpp"

using nlohmann::json;

namespace pgae {

namespace {

constexpr char kMagic[4] = {'P', 'G', 'A', 'E'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ofstream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void write_u64(std::ofstream& out, std::uint64_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void write_str(std::ofstream& out, const std::string& s) {
    write_u32(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<long>(s.size()));
}
void write_doubles(std::ofstream& out, const Vec& v) {
    write_u64(out, v.size());
    out.write(reinterpret_cast<const char*>(v.data()), static_cast<long>(v.size() * sizeof(double)));
}

std::uint32_t read_u32(std::ifstream& in) {
    std::uint32_t v;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}
std::uint64_t read_u64(std::ifstream& in) {
    std::uint64_t v;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}
std::string read_str(std::ifstream& in) {
    const auto n = read_u32(in);
    std::string s(n, '\0');
    in.read(s.data(), static_cast<long>(n));
    return s;
}
Vec read_doubles(std::ifstream& in) {
    const auto n = read_u64(in);
    Vec v(n);
    in.read(reinterpret_cast<char*>(v.data()), static_cast<long>(n * sizeof(double)));
    return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const CheckpointData& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("failed to write checkpoint: " + path);
    out.write(kMagic, 4);
    write_u32(out, kVersion);
    write_str(out, data.config_json);
    write_u32(out, static_cast<std::uint32_t>(data.vocab.size()));
    for (const auto& t : data.vocab) write_str(out, t);
    write_doubles(out, data.word_weights);
    write_u32(out, static_cast<std::uint32_t>(data.tensors.size()));
    for (const auto& t : data.tensors) {
        write_str(out, t.name);
        write_u32(out, static_cast<std::uint32_t>(t.dims.size()));
        for (auto d : t.dims) write_u64(out, d);
        write_doubles(out, t.data);
    }
    if (!out) throw std::runtime_error("short write on checkpoint: " + path);
}

CheckpointData load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("failed to open checkpoint: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("not a PGAE checkpoint: " + path);
    const auto version = read_u32(in);
    if (version != kVersion) throw std::runtime_error("unsupported checkpoint version in " + path);
    CheckpointData data;
    data.config_json = read_str(in);
    const auto vn = read_u32(in);
    data.vocab.resize(vn);
    for (auto& t : data.vocab) t = read_str(in);
    data.word_weights = read_doubles(in);
    const auto tn = read_u32(in);
    data.tensors.resize(tn);
    for (auto& t : data.tensors) {
        t.name = read_str(in);
        const auto nd = read_u32(in);
        t.dims.resize(nd);
        for (auto& d : t.dims) d = read_u64(in);
        t.data = read_doubles(in);
    }
    if (!in) throw std::runtime_error("truncated checkpoint: " + path);
    return data;
}

void save_model_checkpoint(const std::string& path, const PgaeModel& model, const Vocab& vocab,
                           const Vec& word_w, const std::string& config_json) {
    CheckpointData data;
    json cfg = config_json.empty() ? json::object() : json::parse(config_json);
    cfg["model"] = {{"vocab", model.cfg.vocab},
                    {"hidden", model.cfg.hidden},
                    {"vis_dim", model.cfg.vis_dim},
                    {"joint_dim", model.cfg.joint_dim},
                    {"max_words", model.cfg.max_words}};
    data.config_json = cfg.dump();
    data.vocab = vocab.tokens();
    data.word_weights = word_w;
    auto refs = const_cast<PgaeModel&>(model).collect();
    data.tensors.reserve(refs.size());
    for (const auto& r : refs) data.tensors.push_back({r.name, r.dims, *r.data});
    save_checkpoint(path, data);
}

PgaeModel load_model_checkpoint(const std::string& path, Vocab* vocab_out, Vec* word_w_out,
                                std::string* config_json_out) {
    CheckpointData data = load_checkpoint(path);
    json cfg = json::parse(data.config_json);
    const auto& mc = cfg.at("model");
    PgaeModel model;
    model.cfg.vocab = mc.at("vocab");
    model.cfg.hidden = mc.at("hidden");
    model.cfg.vis_dim = mc.at("vis_dim");
    model.cfg.joint_dim = mc.at("joint_dim");
    model.cfg.max_words = mc.at("max_words");
    model.init(0);  // shapes only; values overwritten below

    std::map<std::string, NamedTensor*> by_name;
    for (auto& t : data.tensors) by_name[t.name] = &t;
    for (auto& r : model.collect()) {
        auto it = by_name.find(r.name);
        if (it == by_name.end())
            throw std::runtime_error("checkpoint missing tensor '" + r.name + "': " + path);
        if (it->second->data.size() != r.count())
            throw std::runtime_error("checkpoint tensor '" + r.name + "' has wrong size: " + path);
        *r.data = it->second->data;
        by_name.erase(it);
    }
    if (!by_name.empty())
        throw std::runtime_error("checkpoint has unexpected tensor '" + by_name.begin()->first +
                                 "': " + path);
    if (vocab_out) *vocab_out = Vocab::from_tokens(data.vocab);
    if (word_w_out) *word_w_out = data.word_weights;
    if (config_json_out) *config_json_out = data.config_json;
    return model;
}

void save_cae_checkpoint(const std::string& path, const CaeParams& cae, int h, int w) {
    CheckpointData data;
    data.config_json = json{{"cae", {{"h", h}, {"w", w}, {"bottleneck", kCaeBottleneck}}}}.dump();
    auto refs = std::vector<ParamRef>();
    const_cast<CaeParams&>(cae).collect(refs);
    for (const auto& r : refs) data.tensors.push_back({r.name, r.dims, *r.data});
    save_checkpoint(path, data);
}

CaeParams load_cae_checkpoint(const std::string& path, int* h_out, int* w_out) {
    CheckpointData data = load_checkpoint(path);
    json cfg = json::parse(data.config_json);
    const int h = cfg.at("cae").at("h");
    const int w = cfg.at("cae").at("w");
    CaeParams cae;
    cae.init(0, h, w);
    std::map<std::string, NamedTensor*> by_name;
    for (auto& t : data.tensors) by_name[t.name] = &t;
    std::vector<ParamRef> refs;
    cae.collect(refs);
    for (auto& r : refs) {
        auto it = by_name.find(r.name);
        if (it == by_name.end())
            throw std::runtime_error("cae checkpoint missing tensor '" + r.name + "': " + path);
        if (it->second->data.size() != r.count())
            throw std::runtime_error("cae checkpoint tensor '" + r.name + "' has wrong size: " + path);
        *r.data = it->second->data;
    }
    if (h_out) *h_out = h;
    if (w_out) *w_out = w;
    return cae;
}

}  // namespace pgae
