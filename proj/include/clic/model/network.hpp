#pragma once

#include <memory>
#include <optional>

#include "clic/model/config.hpp"
#include "clic/model/nn.hpp"

namespace clic::model {

class ResidualBlock {
public:
    ResidualBlock(const std::string& name, int in_ch, int out_ch, int stride);

    void init(Rng& rng);
    Batch3 forward(const Batch3& x, bool train);
    Batch3 backward(const Batch3& dy);
    void collect(std::vector<ParamRef>& out);

private:
    Conv1d conv1_;
    BatchNorm1d bn1_;
    Relu3 relu1_;
    Conv1d conv2_;
    BatchNorm1d bn2_;
    std::unique_ptr<Conv1d> down_conv_;
    std::unique_ptr<BatchNorm1d> down_bn_;
    Relu3 relu_out_;
};

// 1-D ResNet18 trunk: conv7/2 + BN + ReLU + maxpool3/2, then n_stages of two
// basic blocks (channels 64/128/256/512, stride 2 from the second stage on),
// global average pooling over time.
class EcgEncoder {
public:
    EcgEncoder(int input_leads, int n_stages);

    void init(Rng& rng);
    Mat forward(const Batch3& x, bool train);
    Batch3 backward(const Mat& d_emb);
    void collect(std::vector<ParamRef>& out);

    int out_dim() const { return out_dim_; }

private:
    Conv1d stem_conv_;
    BatchNorm1d stem_bn_;
    Relu3 stem_relu_;
    MaxPool1d pool_;
    std::vector<ResidualBlock> blocks_;
    GlobalAvgPool gap_;
    int out_dim_;
};

// Full classifier: encoder, optional fusion projection for multimodal modes,
// and the shared 256/64/5 head. Logits are unnormalized.
class ClicNet {
public:
    explicit ClicNet(ModelConfig cfg);

    void init(std::uint64_t seed);

    // ecg_forward: [B x leads x L] -> [B x ecg_dim]; requires L >= 32, finite
    // input, per-lead standardization already applied upstream.
    Mat encode(const Batch3& ecg, bool train);

    // fused_forward: embedding plus mode-matched context -> [B x 5] logits.
    Mat head_forward(const Mat& ecg_emb, const Mat* context, bool train);

    Mat forward(const Batch3& ecg, const Mat* context, bool train);

    // Reverse pass for the latest train-mode forward; context gradients are
    // not produced (frozen inputs).
    void backward(const Mat& d_logits);

    void zero_grad();
    std::vector<ParamRef> parameters();       // trainable
    std::vector<ParamRef> all_tensors();      // trainable + running stats
    std::size_t parameter_count();

    // input vector of the final 5-unit layer, captured by the last forward
    const Mat& penultimate() const { return penultimate_; }

    const ModelConfig& config() const { return cfg_; }

private:
    ModelConfig cfg_;
    EcgEncoder encoder_;
    std::unique_ptr<Linear> fusion_;
    ReluMat fusion_relu_;
    Linear head1_;
    ReluMat relu1_;
    Linear head2_;
    ReluMat relu2_;
    Linear head3_;
    Mat penultimate_;
    int last_context_cols_ = 0;
};

// argmax with lowest-index tie break
int predict(const double* logits, int n);

template <typename Container>
int predict(const Container& logits) {
    return predict(logits.data(), static_cast<int>(logits.size()));
}

}  // namespace clic::model
