#pragma once
// Reduced-model gradient verification: for each training signal, compares
// the hand-derived gradients of the composite loss against central finite
// differences on randomly probed parameters.

#include <cstdint>
#include <vector>

#include "pgae/gradcheck.hpp"
#include "pgae/model.hpp"

namespace pgae {

struct SignalGradCheck {
    TaskSignal signal;
    GradCheckResult result;
};

struct ModelGradCheckConfig {
    std::size_t probes = 500;
    double delta = 1e-5;
    std::uint64_t seed = 1;
    int hidden = 8;
    int M = 6;
};

std::vector<SignalGradCheck> run_model_gradcheck(const ModelGradCheckConfig& cfg = {});

}  // namespace pgae
