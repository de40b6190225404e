#pragma once
// Central-difference gradient verification against hand-derived backward
// passes. Meant for 64-bit mode; probes a random subset of coordinates.

#include <functional>
#include <vector>

#include "pgae/adam.hpp"
#include "pgae/rng.hpp"

namespace pgae {

struct GradCheckOptions {
    std::size_t probes = 500;
    double delta = 1e-5;
};

struct GradCheckResult {
    double max_rel_err = 0.0;
    std::size_t probes = 0;
    // coordinate where the worst error occurred, for diagnostics
    std::string worst_tensor;
    std::size_t worst_index = 0;
    double worst_analytic = 0.0;
    double worst_numeric = 0.0;
};

// loss() must be a deterministic function of the tensors behind `params`.
// `analytic` holds the precomputed gradient for each tensor, same order.
GradCheckResult grad_check(const std::function<double()>& loss, const std::vector<ParamRef>& params,
                           const std::vector<const Vec*>& analytic, RngStream& rng,
                           const GradCheckOptions& opt = {});

}  // namespace pgae
