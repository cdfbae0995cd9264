#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clic/common/rng.hpp"

namespace clic::model {

// [batch][channel][time], contiguous
struct Batch3 {
    int n = 0, ch = 0, len = 0;
    std::vector<double> v;

    Batch3() = default;
    Batch3(int n_, int ch_, int len_)
        : n(n_), ch(ch_), len(len_),
          v(static_cast<std::size_t>(n_) * ch_ * len_, 0.0) {}

    double* lane(int b, int c) {
        return v.data() + (static_cast<std::size_t>(b) * ch + c) * len;
    }
    const double* lane(int b, int c) const {
        return v.data() + (static_cast<std::size_t>(b) * ch + c) * len;
    }
    double& at(int b, int c, int t) { return lane(b, c)[t]; }
    double at(int b, int c, int t) const { return lane(b, c)[t]; }
};

// row-major [rows][cols]
struct Mat {
    int rows = 0, cols = 0;
    std::vector<double> v;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), v(static_cast<std::size_t>(r) * c, 0.0) {}

    double* row(int r) { return v.data() + static_cast<std::size_t>(r) * cols; }
    const double* row(int r) const { return v.data() + static_cast<std::size_t>(r) * cols; }
    double& at(int r, int c) { return row(r)[c]; }
    double at(int r, int c) const { return row(r)[c]; }
};

struct ParamRef {
    std::string name;
    std::vector<double>* value = nullptr;
    std::vector<double>* grad = nullptr;
    std::vector<int> shape;
    bool trainable = true;
};

class Conv1d {
public:
    Conv1d(std::string name, int in_ch, int out_ch, int kernel, int stride, int pad);

    void init(Rng& rng);  // He normal, fan-in = in_ch * kernel; no bias (BN follows)
    int out_len(int in_len) const;
    Batch3 forward(const Batch3& x, bool train);
    Batch3 backward(const Batch3& dy);
    void collect(std::vector<ParamRef>& out);

    int in_ch() const { return in_ch_; }
    int out_ch() const { return out_ch_; }

private:
    std::string name_;
    int in_ch_, out_ch_, kernel_, stride_, pad_;
    std::vector<double> w_, gw_;  // [out_ch][in_ch * kernel]
    Batch3 cached_x_;
};

class BatchNorm1d {
public:
    BatchNorm1d(std::string name, int ch, double eps = 1e-5, double momentum = 0.1);

    void init();
    Batch3 forward(const Batch3& x, bool train);
    Batch3 backward(const Batch3& dy);
    void collect(std::vector<ParamRef>& out);  // gamma/beta trainable, running stats buffers

private:
    std::string name_;
    int ch_;
    double eps_, momentum_;
    std::vector<double> gamma_, beta_, g_gamma_, g_beta_;
    std::vector<double> running_mean_, running_var_;
    // train-mode cache
    Batch3 xhat_;
    std::vector<double> invstd_;
};

class Relu3 {
public:
    Batch3 forward(const Batch3& x, bool train);
    Batch3 backward(const Batch3& dy);

private:
    std::vector<std::uint8_t> mask_;
};

class MaxPool1d {
public:
    MaxPool1d(int kernel, int stride, int pad);

    int out_len(int in_len) const;
    Batch3 forward(const Batch3& x, bool train);
    Batch3 backward(const Batch3& dy);

private:
    int kernel_, stride_, pad_;
    int in_len_ = 0;
    std::vector<std::int32_t> argmax_;
};

class GlobalAvgPool {
public:
    Mat forward(const Batch3& x);
    Batch3 backward(const Mat& dy);

private:
    int len_ = 0;
};

class Linear {
public:
    Linear(std::string name, int in_dim, int out_dim);

    void init(Rng& rng);  // uniform +-1/sqrt(fan_in) for weight and bias
    Mat forward(const Mat& x, bool train);
    Mat backward(const Mat& dy);
    void collect(std::vector<ParamRef>& out);

    int in_dim() const { return in_dim_; }
    int out_dim() const { return out_dim_; }

private:
    std::string name_;
    int in_dim_, out_dim_;
    std::vector<double> w_, b_, gw_, gb_;  // w: [out][in]
    Mat cached_x_;
};

class ReluMat {
public:
    Mat forward(const Mat& x, bool train);
    Mat backward(const Mat& dy);

private:
    std::vector<std::uint8_t> mask_;
};

void check_finite(const Batch3& x, const char* what);
void check_finite(const Mat& x, const char* what);

}  // namespace clic::model
