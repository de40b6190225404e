#include "pgae/lstm.hpp"

#include <cmath>
#include <sstream>

namespace pgae {

namespace {
const char* const kGateNames[4] = {"Wx_i", "Wx_f", "Wx_g", "Wx_o"};
const char* const kRecNames[4] = {"Uh_i", "Uh_f", "Uh_g", "Uh_o"};
const char* const kBiasNames[4] = {"b_i", "b_f", "b_g", "b_o"};
}  // namespace

void LstmParams::init(RngStream& rng, std::size_t input, std::size_t hidden) {
    for (int g = 0; g < 4; ++g) {
        Wx[g] = init_uniform(rng, input, hidden);
        Uh[g] = init_uniform(rng, hidden, hidden);
        b[g].assign(hidden, 0.0);
    }
    const double pb = std::sqrt(3.0 / static_cast<double>(hidden));
    p_i = init_uniform_vec(rng, hidden, pb);
    p_f = init_uniform_vec(rng, hidden, pb);
    p_o = init_uniform_vec(rng, hidden, pb);
}

void LstmParams::zero(std::size_t input, std::size_t hidden) {
    for (int g = 0; g < 4; ++g) {
        Wx[g] = Mat(hidden, input);
        Uh[g] = Mat(hidden, hidden);
        b[g].assign(hidden, 0.0);
    }
    p_i.assign(hidden, 0.0);
    p_f.assign(hidden, 0.0);
    p_o.assign(hidden, 0.0);
}

void LstmParams::collect(const std::string& prefix, std::vector<ParamRef>& out) {
    for (int g = 0; g < 4; ++g)
        out.push_back({prefix + "." + kGateNames[g], {Wx[g].rows, Wx[g].cols}, &Wx[g].a});
    for (int g = 0; g < 4; ++g)
        out.push_back({prefix + "." + kRecNames[g], {Uh[g].rows, Uh[g].cols}, &Uh[g].a});
    for (int g = 0; g < 4; ++g) out.push_back({prefix + "." + kBiasNames[g], {b[g].size()}, &b[g]});
    out.push_back({prefix + ".p_i", {p_i.size()}, &p_i});
    out.push_back({prefix + ".p_f", {p_f.size()}, &p_f});
    out.push_back({prefix + ".p_o", {p_o.size()}, &p_o});
}

void LstmParams::collect_const(const std::string& prefix, std::vector<const Vec*>& out) const {
    auto* self = const_cast<LstmParams*>(this);
    std::vector<ParamRef> refs;
    self->collect(prefix, refs);
    for (const auto& r : refs) out.push_back(r.data);
}

LstmState lstm_zero_state(std::size_t hidden) { return {Vec(hidden, 0.0), Vec(hidden, 0.0)}; }

LstmState lstm_step(const LstmParams& p, const Vec& x, const LstmState& prev, LstmStepCache* cache) {
    if (x.size() != p.input_size()) {
        std::ostringstream os;
        os << "lstm_step: input has length " << x.size() << " but cell expects " << p.input_size();
        shape_error(os.str());
    }
    if (prev.h.size() != p.hidden_size() || prev.c.size() != p.hidden_size())
        shape_error("lstm_step: state size does not match hidden size");

    const std::size_t H = p.hidden_size();
    Vec a_i = vadd(vadd(matvec(p.Wx[0], x), matvec(p.Uh[0], prev.h)), p.b[0]);
    Vec a_f = vadd(vadd(matvec(p.Wx[1], x), matvec(p.Uh[1], prev.h)), p.b[1]);
    Vec a_g = vadd(vadd(matvec(p.Wx[2], x), matvec(p.Uh[2], prev.h)), p.b[2]);
    for (std::size_t k = 0; k < H; ++k) {
        a_i[k] += p.p_i[k] * prev.c[k];
        a_f[k] += p.p_f[k] * prev.c[k];
    }
    Vec i = sigmoid(a_i);
    Vec f = sigmoid(a_f);
    Vec g = tanh_v(a_g);

    Vec c(H);
    for (std::size_t k = 0; k < H; ++k) c[k] = f[k] * prev.c[k] + i[k] * g[k];
    quantize(c);

    Vec a_o = vadd(vadd(matvec(p.Wx[3], x), matvec(p.Uh[3], prev.h)), p.b[3]);
    for (std::size_t k = 0; k < H; ++k) a_o[k] += p.p_o[k] * c[k];
    Vec o = sigmoid(a_o);

    Vec tc = tanh_v(c);
    Vec h = vmul(o, tc);

    if (cache) {
        cache->x = x;
        cache->h_prev = prev.h;
        cache->c_prev = prev.c;
        cache->i = i;
        cache->f = f;
        cache->g = g;
        cache->o = o;
        cache->c = c;
        cache->tanh_c = tc;
    }
    return {std::move(h), std::move(c)};
}

void lstm_step_backward(const LstmParams& p, const LstmStepCache& cache, const Vec& dh_in,
                        const Vec& dc_in, LstmParams& grads, Vec& dx, Vec& dh_prev, Vec& dc_prev) {
    const std::size_t H = p.hidden_size();
    if (dh_in.size() != H || dc_in.size() != H)
        shape_error("lstm_step_backward: upstream gradient size does not match hidden size");
    if (cache.i.size() != H) shape_error("lstm_step_backward: cache does not match parameters");

    // output gate first: it is the only consumer of h_t besides the caller
    Vec da_o(H), dc(H);
    for (std::size_t k = 0; k < H; ++k) {
        const double do_ = dh_in[k] * cache.tanh_c[k];
        da_o[k] = do_ * cache.o[k] * (1.0 - cache.o[k]);
        // c_t receives: upstream dc, h-path through tanh, and the o-gate peephole
        dc[k] = dc_in[k] + dh_in[k] * cache.o[k] * (1.0 - cache.tanh_c[k] * cache.tanh_c[k]) +
                da_o[k] * p.p_o[k];
    }

    Vec da_i(H), da_f(H), da_g(H);
    for (std::size_t k = 0; k < H; ++k) {
        da_i[k] = dc[k] * cache.g[k] * cache.i[k] * (1.0 - cache.i[k]);
        da_f[k] = dc[k] * cache.c_prev[k] * cache.f[k] * (1.0 - cache.f[k]);
        da_g[k] = dc[k] * cache.i[k] * (1.0 - cache.g[k] * cache.g[k]);
    }

    dc_prev.assign(H, 0.0);
    for (std::size_t k = 0; k < H; ++k)
        dc_prev[k] = dc[k] * cache.f[k] + da_i[k] * p.p_i[k] + da_f[k] * p.p_f[k];

    const Vec* das[4] = {&da_i, &da_f, &da_g, &da_o};
    dx.assign(p.input_size(), 0.0);
    dh_prev.assign(H, 0.0);
    for (int g = 0; g < 4; ++g) {
        add_outer(grads.Wx[g], *das[g], cache.x);
        add_outer(grads.Uh[g], *das[g], cache.h_prev);
        axpy(grads.b[g], 1.0, *das[g]);
        Vec dxg = matvec_t(p.Wx[g], *das[g]);
        axpy(dx, 1.0, dxg);
        Vec dhg = matvec_t(p.Uh[g], *das[g]);
        axpy(dh_prev, 1.0, dhg);
    }
    for (std::size_t k = 0; k < H; ++k) {
        grads.p_i[k] += da_i[k] * cache.c_prev[k];
        grads.p_f[k] += da_f[k] * cache.c_prev[k];
        grads.p_o[k] += da_o[k] * cache.c[k];
    }
}

void lstm_backward(const LstmParams& p, const std::vector<LstmStepCache>& caches,
                   const std::vector<Vec>& dh_upstream, const Vec& dc_final, LstmParams& grads,
                   std::vector<Vec>* dx_out) {
    if (caches.size() != dh_upstream.size()) {
        std::ostringstream os;
        os << "lstm_backward: " << caches.size() << " cached steps vs " << dh_upstream.size()
           << " upstream gradients";
        shape_error(os.str());
    }
    const std::size_t H = p.hidden_size();
    if (dx_out) dx_out->assign(caches.size(), {});

    Vec dh_rec(H, 0.0);
    Vec dc_rec = dc_final.empty() ? Vec(H, 0.0) : dc_final;
    if (dc_rec.size() != H) shape_error("lstm_backward: dc_final size does not match hidden size");

    Vec dx, dh_prev, dc_prev;
    for (std::size_t t = caches.size(); t-- > 0;) {
        Vec dh_total = vadd(dh_upstream[t], dh_rec);
        lstm_step_backward(p, caches[t], dh_total, dc_rec, grads, dx, dh_prev, dc_prev);
        dh_rec = std::move(dh_prev);
        dc_rec = std::move(dc_prev);
        if (dx_out) (*dx_out)[t] = std::move(dx);
    }
}

}  // namespace pgae
