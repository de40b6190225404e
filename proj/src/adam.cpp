#include "pgae/adam.hpp"

#include <cmath>
#include <sstream>

namespace pgae {

void AdamState::init(const std::vector<ParamRef>& params) {
    m.assign(params.size(), {});
    v.assign(params.size(), {});
    for (std::size_t i = 0; i < params.size(); ++i) {
        m[i].assign(params[i].count(), 0.0);
        v[i].assign(params[i].count(), 0.0);
    }
    step = 0;
}

void adam_step(const std::vector<ParamRef>& params, const std::vector<ParamRef>& grads,
               AdamState& state, const AdamConfig& cfg) {
    if (params.size() != grads.size()) {
        std::ostringstream os;
        os << "adam_step: " << params.size() << " params vs " << grads.size() << " grads";
        shape_error(os.str());
    }
    if (!state.initialized()) state.init(params);
    if (state.m.size() != params.size()) shape_error("adam_step: state does not match parameter list");

    ++state.step;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));

    for (std::size_t i = 0; i < params.size(); ++i) {
        Vec& p = *params[i].data;
        const Vec& g = *grads[i].data;
        if (p.size() != g.size() || p.size() != state.m[i].size()) {
            std::ostringstream os;
            os << "adam_step: tensor '" << params[i].name << "' has " << p.size() << " params, "
               << g.size() << " grads, " << state.m[i].size() << " state entries";
            shape_error(os.str());
        }
        Vec& m = state.m[i];
        Vec& v = state.v[i];
        for (std::size_t k = 0; k < p.size(); ++k) {
            m[k] = cfg.beta1 * m[k] + (1.0 - cfg.beta1) * g[k];
            v[k] = cfg.beta2 * v[k] + (1.0 - cfg.beta2) * g[k] * g[k];
            const double mhat = m[k] / bc1;
            const double vhat = v[k] / bc2;
            p[k] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
        }
        quantize(p);
        check_finite(p, "adam_step");
    }
}

}  // namespace pgae
