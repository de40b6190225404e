#include "pgae/tensor.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pgae {

namespace {
Precision g_precision = Precision::f64;
}

void set_precision(Precision p) { g_precision = p; }
Precision precision() { return g_precision; }

double quantize(double x) {
    return g_precision == Precision::f32 ? static_cast<double>(static_cast<float>(x)) : x;
}

void quantize(Vec& v) {
    if (g_precision != Precision::f32) return;
    for (double& x : v) x = static_cast<double>(static_cast<float>(x));
}

void shape_error(const std::string& msg) { throw std::invalid_argument("shape error: " + msg); }

void check_finite(const Vec& v, const char* what) {
    for (double x : v)
        if (!std::isfinite(x)) throw std::runtime_error(std::string("non-finite value in ") + what);
}

void check_finite(const Mat& m, const char* what) {
    for (double x : m.a)
        if (!std::isfinite(x)) throw std::runtime_error(std::string("non-finite value in ") + what);
}

Vec matvec(const Mat& w, const Vec& x) {
    if (w.cols != x.size()) {
        std::ostringstream os;
        os << "matvec: matrix is " << w.rows << "x" << w.cols << " but vector has length " << x.size();
        shape_error(os.str());
    }
    Vec out(w.rows);
    const double* row = w.a.data();
    for (std::size_t r = 0; r < w.rows; ++r, row += w.cols) {
        double s = 0.0;
        for (std::size_t c = 0; c < w.cols; ++c) s += row[c] * x[c];
        out[r] = s;
    }
    quantize(out);
    check_finite(out, "matvec");
    return out;
}

Vec matvec_t(const Mat& w, const Vec& y) {
    if (w.rows != y.size()) {
        std::ostringstream os;
        os << "matvec_t: matrix is " << w.rows << "x" << w.cols << " but vector has length " << y.size();
        shape_error(os.str());
    }
    Vec out(w.cols, 0.0);
    const double* row = w.a.data();
    for (std::size_t r = 0; r < w.rows; ++r, row += w.cols) {
        const double yr = y[r];
        for (std::size_t c = 0; c < w.cols; ++c) out[c] += yr * row[c];
    }
    quantize(out);
    check_finite(out, "matvec_t");
    return out;
}

void add_outer(Mat& w, const Vec& y, const Vec& x) {
    if (w.rows != y.size() || w.cols != x.size()) {
        std::ostringstream os;
        os << "add_outer: matrix is " << w.rows << "x" << w.cols << " but outer product is " << y.size()
           << "x" << x.size();
        shape_error(os.str());
    }
    double* row = w.a.data();
    for (std::size_t r = 0; r < w.rows; ++r, row += w.cols) {
        const double yr = y[r];
        for (std::size_t c = 0; c < w.cols; ++c) row[c] += yr * x[c];
    }
}

void axpy(Vec& y, double a, const Vec& x) {
    if (y.size() != x.size()) {
        std::ostringstream os;
        os << "axpy: lengths " << y.size() << " vs " << x.size();
        shape_error(os.str());
    }
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

static void check_same(const Vec& a, const Vec& b, const char* op) {
    if (a.size() != b.size()) {
        std::ostringstream os;
        os << op << ": lengths " << a.size() << " vs " << b.size();
        shape_error(os.str());
    }
}

Vec vadd(const Vec& a, const Vec& b) {
    check_same(a, b, "vadd");
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    quantize(out);
    return out;
}

Vec vsub(const Vec& a, const Vec& b) {
    check_same(a, b, "vsub");
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    quantize(out);
    return out;
}

Vec vmul(const Vec& a, const Vec& b) {
    check_same(a, b, "vmul");
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    quantize(out);
    return out;
}

Vec concat(const Vec& a, const Vec& b) {
    Vec out;
    out.reserve(a.size() + b.size());
    out.insert(out.end(), a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

double dot(const Vec& a, const Vec& b) {
    check_same(a, b, "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return quantize(s);
}

Vec sigmoid(const Vec& v) {
    Vec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = 1.0 / (1.0 + std::exp(-v[i]));
    quantize(out);
    check_finite(out, "sigmoid");
    return out;
}

Vec tanh_v(const Vec& v) {
    Vec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::tanh(v[i]);
    quantize(out);
    check_finite(out, "tanh");
    return out;
}

Vec softmax(const Vec& v) {
    if (v.empty()) shape_error("softmax: empty input");
    double m = v[0];
    for (double x : v) m = std::max(m, x);
    Vec out(v.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = std::exp(v[i] - m);
        sum += out[i];
    }
    for (double& x : out) x /= sum;
    quantize(out);
    check_finite(out, "softmax");
    return out;
}

Vec activate(Act kind, const Vec& v) {
    switch (kind) {
        case Act::sigmoid: return sigmoid(v);
        case Act::tanh: return tanh_v(v);
        case Act::softmax: return softmax(v);
    }
    shape_error("activate: unknown kind");
}

}  // namespace pgae
