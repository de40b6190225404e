#include "pgae/gradcheck.hpp"

#include <cmath>
#include <stdexcept>

namespace pgae {

GradCheckResult grad_check(const std::function<double()>& loss, const std::vector<ParamRef>& params,
                           const std::vector<const Vec*>& analytic, RngStream& rng,
                           const GradCheckOptions& opt) {
    if (params.size() != analytic.size()) shape_error("grad_check: params/analytic length mismatch");
    std::size_t total = 0;
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (params[i].count() != analytic[i]->size())
            shape_error("grad_check: gradient shape mismatch for tensor '" + params[i].name + "'");
        total += params[i].count();
    }
    if (total == 0) shape_error("grad_check: no parameters");

    GradCheckResult res;
    res.probes = opt.probes;
    for (std::size_t probe = 0; probe < opt.probes; ++probe) {
        std::uint64_t flat = rng.uniform_int(total);
        std::size_t ti = 0;
        while (flat >= params[ti].count()) flat -= params[ti++].count();
        double& coord = (*params[ti].data)[flat];
        const double saved = coord;

        coord = saved + opt.delta;
        const double fp = loss();
        coord = saved - opt.delta;
        const double fm = loss();
        coord = saved;
        if (!std::isfinite(fp) || !std::isfinite(fm))
            throw std::runtime_error("grad_check: non-finite loss at probe of '" + params[ti].name + "'");

        const double numeric = (fp - fm) / (2.0 * opt.delta);
        const double a = (*analytic[ti])[flat];
        const double denom = std::max(1e-8, std::fabs(a) + std::fabs(numeric));
        const double rel = std::fabs(a - numeric) / denom;
        if (rel > res.max_rel_err) {
            res.max_rel_err = rel;
            res.worst_tensor = params[ti].name;
            res.worst_index = flat;
            res.worst_analytic = a;
            res.worst_numeric = numeric;
        }
    }
    return res;
}

}  // namespace pgae
