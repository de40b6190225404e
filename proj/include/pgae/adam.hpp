#pragma once
// Adam with bias correction over a flat list of named parameter tensors.

#include <cstdint>
#include <string>
#include <vector>

#include "pgae/tensor.hpp"

namespace pgae {

// Non-owning view of one parameter (or gradient) tensor.
struct ParamRef {
    std::string name;
    std::vector<std::size_t> dims;
    std::vector<double>* data = nullptr;

    std::size_t count() const { return data ? data->size() : 0; }
};

struct AdamConfig {
    double lr = 1e-5;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct AdamState {
    std::vector<Vec> m, v;  // aligned with the ParamRef list used at init
    long long step = 0;

    void init(const std::vector<ParamRef>& params);
    bool initialized() const { return !m.empty(); }
};

void adam_step(const std::vector<ParamRef>& params, const std::vector<ParamRef>& grads,
               AdamState& state, const AdamConfig& cfg);

}  // namespace pgae
