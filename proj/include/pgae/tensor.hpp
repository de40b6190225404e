#pragma once
// Dense vector/matrix math used by every layer. Everything computes in
// double; an optional float32 mode rounds results through IEEE binary32
// so the same code path can emulate single precision.

#include <cstddef>
#include <string>
#include <vector>

namespace pgae {

using Vec = std::vector<double>;

// Row-major matrix.
struct Mat {
    std::size_t rows = 0, cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), a(r * c, fill) {}

    double& operator()(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
    std::size_t size() const { return a.size(); }
};

enum class Precision { f64, f32 };

// Process-wide mode; set before spawning worker threads.
void set_precision(Precision p);
Precision precision();

double quantize(double x);
void quantize(Vec& v);

[[noreturn]] void shape_error(const std::string& msg);
void check_finite(const Vec& v, const char* what);
void check_finite(const Mat& m, const char* what);

Vec matvec(const Mat& w, const Vec& x);              // w * x
Vec matvec_t(const Mat& w, const Vec& y);            // w^T * y
void add_outer(Mat& w, const Vec& y, const Vec& x);  // w += y x^T
void axpy(Vec& y, double a, const Vec& x);           // y += a * x

Vec vadd(const Vec& a, const Vec& b);
Vec vsub(const Vec& a, const Vec& b);
Vec vmul(const Vec& a, const Vec& b);  // Hadamard
Vec concat(const Vec& a, const Vec& b);
double dot(const Vec& a, const Vec& b);

enum class Act { sigmoid, tanh, softmax };

Vec sigmoid(const Vec& v);
Vec tanh_v(const Vec& v);
Vec softmax(const Vec& v);  // max-subtracted, sums to 1
Vec activate(Act kind, const Vec& v);

}  // namespace pgae
