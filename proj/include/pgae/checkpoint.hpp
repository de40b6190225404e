#pragma once
// Binary checkpoint container: magic "PGAE", format version, a config
// echo, named tensors (dims + 64-bit little-endian values), the
// vocabulary and the word-weight vector. Round-trips bit-exactly.

#include <cstdint>
#include <string>
#include <vector>

#include "pgae/cae.hpp"
#include "pgae/model.hpp"

namespace pgae {

struct NamedTensor {
    std::string name;
    std::vector<std::size_t> dims;
    Vec data;
};

struct CheckpointData {
    std::string config_json;
    std::vector<std::string> vocab;  // empty for non-model checkpoints
    Vec word_weights;
    std::vector<NamedTensor> tensors;
};

void save_checkpoint(const std::string& path, const CheckpointData& data);
CheckpointData load_checkpoint(const std::string& path);

void save_model_checkpoint(const std::string& path, const PgaeModel& model, const Vocab& vocab,
                           const Vec& word_w, const std::string& config_json);
PgaeModel load_model_checkpoint(const std::string& path, Vocab* vocab_out = nullptr,
                                Vec* word_w_out = nullptr, std::string* config_json_out = nullptr);

void save_cae_checkpoint(const std::string& path, const CaeParams& cae, int h, int w);
CaeParams load_cae_checkpoint(const std::string& path, int* h_out = nullptr, int* w_out = nullptr);

}  // namespace pgae
