#include "clic/model/nn.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "clic/common/errors.hpp"

namespace clic::model {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ColMat = Eigen::MatrixXd;
using RowMap = Eigen::Map<RowMat>;
using ConstRowMap = Eigen::Map<const RowMat>;

// Gather receptive fields of the whole batch into a (in_ch*kernel) x
// (n*out_len) matrix; column b*out_len + t, row c*kernel + k.
void im2col(const Batch3& x, int kernel, int stride, int pad, int out_len, ColMat& col) {
    const int in_ch = x.ch;
    const int in_len = x.len;
    for (int b = 0; b < x.n; ++b) {
        for (int t = 0; t < out_len; ++t) {
            const int start = t * stride - pad;
            double* dst = col.data() +
                          (static_cast<std::size_t>(b) * out_len + t) * col.rows();
            for (int c = 0; c < in_ch; ++c) {
                const double* lane = x.lane(b, c);
                for (int k = 0; k < kernel; ++k) {
                    const int src = start + k;
                    dst[c * kernel + k] = (src >= 0 && src < in_len) ? lane[src] : 0.0;
                }
            }
        }
    }
}

void col2im_add(const ColMat& dcol, int kernel, int stride, int pad, int out_len, Batch3& dx) {
    const int in_ch = dx.ch;
    const int in_len = dx.len;
    for (int b = 0; b < dx.n; ++b) {
        for (int t = 0; t < out_len; ++t) {
            const int start = t * stride - pad;
            const double* src = dcol.data() +
                                (static_cast<std::size_t>(b) * out_len + t) * dcol.rows();
            for (int c = 0; c < in_ch; ++c) {
                double* lane = dx.lane(b, c);
                for (int k = 0; k < kernel; ++k) {
                    const int dst = start + k;
                    if (dst >= 0 && dst < in_len) lane[dst] += src[c * kernel + k];
                }
            }
        }
    }
}

}  // namespace

void check_finite(const Batch3& x, const char* what) {
    for (double v : x.v) {
        if (!std::isfinite(v)) throw NonFiniteInput(std::string(what) + " contains a non-finite value");
    }
}

void check_finite(const Mat& x, const char* what) {
    for (double v : x.v) {
        if (!std::isfinite(v)) throw NonFiniteInput(std::string(what) + " contains a non-finite value");
    }
}

// ---------------------------------------------------------------- Conv1d

Conv1d::Conv1d(std::string name, int in_ch, int out_ch, int kernel, int stride, int pad)
    : name_(std::move(name)), in_ch_(in_ch), out_ch_(out_ch), kernel_(kernel), stride_(stride),
      pad_(pad),
      w_(static_cast<std::size_t>(out_ch) * in_ch * kernel, 0.0),
      gw_(w_.size(), 0.0) {}

void Conv1d::init(Rng& rng) {
    const double sd = std::sqrt(2.0 / (static_cast<double>(in_ch_) * kernel_));
    for (auto& w : w_) w = sd * rng.normal();
}

int Conv1d::out_len(int in_len) const { return (in_len + 2 * pad_ - kernel_) / stride_ + 1; }

Batch3 Conv1d::forward(const Batch3& x, bool train) {
    if (x.ch != in_ch_) throw ShapeMismatch(name_ + ": input channels");
    const int n_out = out_len(x.len);
    if (n_out <= 0) throw SignalTooShort(name_ + ": output length would be empty");
    Batch3 y(x.n, out_ch_, n_out);

    const int K = in_ch_ * kernel_;
    const std::size_t cols = static_cast<std::size_t>(x.n) * n_out;
    ColMat col(K, cols);
    im2col(x, kernel_, stride_, pad_, n_out, col);
    ConstRowMap wmap(w_.data(), out_ch_, K);
    RowMat out(out_ch_, cols);
    out.noalias() = wmap * col;
    for (int b = 0; b < x.n; ++b) {
        for (int oc = 0; oc < out_ch_; ++oc) {
            const double* src = out.data() + static_cast<std::size_t>(oc) * cols +
                                static_cast<std::size_t>(b) * n_out;
            std::copy(src, src + n_out, y.lane(b, oc));
        }
    }
    if (train) cached_x_ = x;
    return y;
}

Batch3 Conv1d::backward(const Batch3& dy) {
    const Batch3& x = cached_x_;
    const int n_out = dy.len;
    const int K = in_ch_ * kernel_;
    const std::size_t cols = static_cast<std::size_t>(x.n) * n_out;

    ColMat col(K, cols);
    im2col(x, kernel_, stride_, pad_, n_out, col);

    RowMat dy_full(out_ch_, cols);
    for (int b = 0; b < dy.n; ++b) {
        for (int oc = 0; oc < out_ch_; ++oc) {
            double* dst = dy_full.data() + static_cast<std::size_t>(oc) * cols +
                          static_cast<std::size_t>(b) * n_out;
            const double* src = dy.lane(b, oc);
            std::copy(src, src + n_out, dst);
        }
    }

    ConstRowMap wmap(w_.data(), out_ch_, K);
    RowMap gwmap(gw_.data(), out_ch_, K);
    gwmap.noalias() += dy_full * col.transpose();

    ColMat dcol(K, cols);
    dcol.noalias() = wmap.transpose() * dy_full;
    Batch3 dx(x.n, in_ch_, x.len);
    col2im_add(dcol, kernel_, stride_, pad_, n_out, dx);
    return dx;
}

void Conv1d::collect(std::vector<ParamRef>& out) {
    out.push_back({name_ + ".w", &w_, &gw_, {out_ch_, in_ch_, kernel_}, true});
}

// ---------------------------------------------------------------- BatchNorm1d

BatchNorm1d::BatchNorm1d(std::string name, int ch, double eps, double momentum)
    : name_(std::move(name)), ch_(ch), eps_(eps), momentum_(momentum),
      gamma_(ch, 1.0), beta_(ch, 0.0), g_gamma_(ch, 0.0), g_beta_(ch, 0.0),
      running_mean_(ch, 0.0), running_var_(ch, 1.0) {}

void BatchNorm1d::init() {
    std::fill(gamma_.begin(), gamma_.end(), 1.0);
    std::fill(beta_.begin(), beta_.end(), 0.0);
    std::fill(running_mean_.begin(), running_mean_.end(), 0.0);
    std::fill(running_var_.begin(), running_var_.end(), 1.0);
}

Batch3 BatchNorm1d::forward(const Batch3& x, bool train) {
    if (x.ch != ch_) throw ShapeMismatch(name_ + ": channels");
    Batch3 y(x.n, x.ch, x.len);
    const std::size_t count = static_cast<std::size_t>(x.n) * x.len;

    if (train) {
        xhat_ = Batch3(x.n, x.ch, x.len);
        invstd_.assign(ch_, 0.0);
    }
    for (int c = 0; c < ch_; ++c) {
        double mean, var;
        if (train) {
            double sum = 0;
            for (int b = 0; b < x.n; ++b) {
                const double* lane = x.lane(b, c);
                for (int t = 0; t < x.len; ++t) sum += lane[t];
            }
            mean = sum / static_cast<double>(count);
            double sq = 0;
            for (int b = 0; b < x.n; ++b) {
                const double* lane = x.lane(b, c);
                for (int t = 0; t < x.len; ++t) {
                    const double d = lane[t] - mean;
                    sq += d * d;
                }
            }
            var = sq / static_cast<double>(count);
            running_mean_[c] = (1.0 - momentum_) * running_mean_[c] + momentum_ * mean;
            running_var_[c] = (1.0 - momentum_) * running_var_[c] + momentum_ * var;
        } else {
            mean = running_mean_[c];
            var = running_var_[c];
        }
        const double inv = 1.0 / std::sqrt(var + eps_);
        if (train) invstd_[c] = inv;
        const double g = gamma_[c], bshift = beta_[c];
        for (int b = 0; b < x.n; ++b) {
            const double* lane = x.lane(b, c);
            double* out = y.lane(b, c);
            double* xh = train ? xhat_.lane(b, c) : nullptr;
            for (int t = 0; t < x.len; ++t) {
                const double h = (lane[t] - mean) * inv;
                if (train) xh[t] = h;
                out[t] = g * h + bshift;
            }
        }
    }
    return y;
}

Batch3 BatchNorm1d::backward(const Batch3& dy) {
    const double n = static_cast<double>(static_cast<std::size_t>(dy.n) * dy.len);
    Batch3 dx(dy.n, dy.ch, dy.len);
    for (int c = 0; c < ch_; ++c) {
        double sum_dy = 0, sum_dy_xhat = 0;
        for (int b = 0; b < dy.n; ++b) {
            const double* d = dy.lane(b, c);
            const double* xh = xhat_.lane(b, c);
            for (int t = 0; t < dy.len; ++t) {
                sum_dy += d[t];
                sum_dy_xhat += d[t] * xh[t];
            }
        }
        g_gamma_[c] += sum_dy_xhat;
        g_beta_[c] += sum_dy;
        const double scale = gamma_[c] * invstd_[c];
        for (int b = 0; b < dy.n; ++b) {
            const double* d = dy.lane(b, c);
            const double* xh = xhat_.lane(b, c);
            double* out = dx.lane(b, c);
            for (int t = 0; t < dy.len; ++t) {
                out[t] = scale * (d[t] - sum_dy / n - xh[t] * sum_dy_xhat / n);
            }
        }
    }
    return dx;
}

void BatchNorm1d::collect(std::vector<ParamRef>& out) {
    out.push_back({name_ + ".gamma", &gamma_, &g_gamma_, {ch_}, true});
    out.push_back({name_ + ".beta", &beta_, &g_beta_, {ch_}, true});
    out.push_back({name_ + ".running_mean", &running_mean_, nullptr, {ch_}, false});
    out.push_back({name_ + ".running_var", &running_var_, nullptr, {ch_}, false});
}

// ---------------------------------------------------------------- activations / pooling

Batch3 Relu3::forward(const Batch3& x, bool train) {
    Batch3 y(x.n, x.ch, x.len);
    if (train) mask_.assign(x.v.size(), 0);
    for (std::size_t i = 0; i < x.v.size(); ++i) {
        if (x.v[i] > 0) {
            y.v[i] = x.v[i];
            if (train) mask_[i] = 1;
        }
    }
    return y;
}

Batch3 Relu3::backward(const Batch3& dy) {
    Batch3 dx(dy.n, dy.ch, dy.len);
    for (std::size_t i = 0; i < dy.v.size(); ++i) dx.v[i] = mask_[i] ? dy.v[i] : 0.0;
    return dx;
}

MaxPool1d::MaxPool1d(int kernel, int stride, int pad) : kernel_(kernel), stride_(stride), pad_(pad) {}

int MaxPool1d::out_len(int in_len) const { return (in_len + 2 * pad_ - kernel_) / stride_ + 1; }

Batch3 MaxPool1d::forward(const Batch3& x, bool train) {
    const int n_out = out_len(x.len);
    if (n_out <= 0) throw SignalTooShort("maxpool: output length would be empty");
    Batch3 y(x.n, x.ch, n_out);
    if (train) {
        in_len_ = x.len;
        argmax_.assign(y.v.size(), -1);
    }
    std::size_t oi = 0;
    for (int b = 0; b < x.n; ++b) {
        for (int c = 0; c < x.ch; ++c) {
            const double* lane = x.lane(b, c);
            double* out = y.lane(b, c);
            for (int t = 0; t < n_out; ++t, ++oi) {
                const int start = t * stride_ - pad_;
                double best = -std::numeric_limits<double>::infinity();
                int best_i = -1;
                for (int k = 0; k < kernel_; ++k) {
                    const int src = start + k;
                    if (src < 0 || src >= x.len) continue;
                    if (lane[src] > best) {
                        best = lane[src];
                        best_i = src;
                    }
                }
                out[t] = best;
                if (train) argmax_[oi] = best_i;
            }
        }
    }
    return y;
}

Batch3 MaxPool1d::backward(const Batch3& dy) {
    Batch3 dx(dy.n, dy.ch, in_len_);
    std::size_t oi = 0;
    for (int b = 0; b < dy.n; ++b) {
        for (int c = 0; c < dy.ch; ++c) {
            const double* d = dy.lane(b, c);
            double* out = dx.lane(b, c);
            for (int t = 0; t < dy.len; ++t, ++oi) {
                const int src = argmax_[oi];
                if (src >= 0) out[src] += d[t];
            }
        }
    }
    return dx;
}

Mat GlobalAvgPool::forward(const Batch3& x) {
    len_ = x.len;
    Mat y(x.n, x.ch);
    for (int b = 0; b < x.n; ++b) {
        for (int c = 0; c < x.ch; ++c) {
            const double* lane = x.lane(b, c);
            double sum = 0;
            for (int t = 0; t < x.len; ++t) sum += lane[t];
            y.at(b, c) = sum / x.len;
        }
    }
    return y;
}

Batch3 GlobalAvgPool::backward(const Mat& dy) {
    Batch3 dx(dy.rows, dy.cols, len_);
    for (int b = 0; b < dy.rows; ++b) {
        for (int c = 0; c < dy.cols; ++c) {
            const double g = dy.at(b, c) / len_;
            double* lane = dx.lane(b, c);
            for (int t = 0; t < len_; ++t) lane[t] = g;
        }
    }
    return dx;
}

// ---------------------------------------------------------------- Linear

Linear::Linear(std::string name, int in_dim, int out_dim)
    : name_(std::move(name)), in_dim_(in_dim), out_dim_(out_dim),
      w_(static_cast<std::size_t>(out_dim) * in_dim, 0.0), b_(out_dim, 0.0),
      gw_(w_.size(), 0.0), gb_(out_dim, 0.0) {}

void Linear::init(Rng& rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(in_dim_));
    for (auto& w : w_) w = rng.uniform(-bound, bound);
    for (auto& b : b_) b = rng.uniform(-bound, bound);
}

Mat Linear::forward(const Mat& x, bool train) {
    if (x.cols != in_dim_) throw ShapeMismatch(name_ + ": input width");
    Mat y(x.rows, out_dim_);
    ConstRowMap xmap(x.v.data(), x.rows, x.cols);
    ConstRowMap wmap(w_.data(), out_dim_, in_dim_);
    RowMap ymap(y.v.data(), y.rows, y.cols);
    ymap.noalias() = xmap * wmap.transpose();
    for (int r = 0; r < y.rows; ++r) {
        double* row = y.row(r);
        for (int c = 0; c < out_dim_; ++c) row[c] += b_[c];
    }
    if (train) cached_x_ = x;
    return y;
}

Mat Linear::backward(const Mat& dy) {
    const Mat& x = cached_x_;
    Mat dx(x.rows, in_dim_);
    ConstRowMap dymap(dy.v.data(), dy.rows, dy.cols);
    ConstRowMap xmap(x.v.data(), x.rows, x.cols);
    ConstRowMap wmap(w_.data(), out_dim_, in_dim_);
    RowMap gwmap(gw_.data(), out_dim_, in_dim_);
    RowMap dxmap(dx.v.data(), dx.rows, dx.cols);
    gwmap.noalias() += dymap.transpose() * xmap;
    for (int r = 0; r < dy.rows; ++r) {
        const double* row = dy.row(r);
        for (int c = 0; c < out_dim_; ++c) gb_[c] += row[c];
    }
    dxmap.noalias() = dymap * wmap;
    return dx;
}

void Linear::collect(std::vector<ParamRef>& out) {
    out.push_back({name_ + ".w", &w_, &gw_, {out_dim_, in_dim_}, true});
    out.push_back({name_ + ".b", &b_, &gb_, {out_dim_}, true});
}

Mat ReluMat::forward(const Mat& x, bool train) {
    Mat y(x.rows, x.cols);
    if (train) mask_.assign(x.v.size(), 0);
    for (std::size_t i = 0; i < x.v.size(); ++i) {
        if (x.v[i] > 0) {
            y.v[i] = x.v[i];
            if (train) mask_[i] = 1;
        }
    }
    return y;
}

Mat ReluMat::backward(const Mat& dy) {
    Mat dx(dy.rows, dy.cols);
    for (std::size_t i = 0; i < dy.v.size(); ++i) dx.v[i] = mask_[i] ? dy.v[i] : 0.0;
    return dx;
}

}  // namespace clic::model
