#include "clic/model/network.hpp"

#include <cmath>

#include "clic/common/errors.hpp"

namespace clic::model {

const char* mode_name(Mode m) {
    switch (m) {
        case Mode::EcgOnly: return "ecg";
        case Mode::EcgAttr: return "ecg-attr";
        case Mode::ClicDtT: return "clic-dtt";
        default: return "clic-llm";
    }
}

Mode mode_from_name(const std::string& name) {
    if (name == "ecg") return Mode::EcgOnly;
    if (name == "ecg-attr") return Mode::EcgAttr;
    if (name == "clic-dtt") return Mode::ClicDtT;
    if (name == "clic-llm") return Mode::ClicLLM;
    throw InvalidConfig("unknown mode '" + name + "'");
}

bool is_multimodal(Mode m) { return m != Mode::EcgOnly; }

int ModelConfig::context_dim() const {
    switch (mode) {
        case Mode::EcgOnly: return 0;
        case Mode::EcgAttr: return attr_dim;
        default: return text_dim;
    }
}

void ModelConfig::validate() const {
    if (input_leads <= 0) throw InvalidConfig("input_leads must be positive");
    if (n_stages < 1 || n_stages > 4) throw InvalidConfig("n_stages must be in [1, 4]");
    if (head_dims != std::array<int, 3>{256, 64, 5}) {
        throw InvalidConfig("head dims are fixed to (256, 64, 5)");
    }
    if (mode == Mode::EcgAttr && attr_dim <= 0) {
        throw InvalidConfig("attr_dim required for ecg-attr mode");
    }
    if ((mode == Mode::ClicDtT || mode == Mode::ClicLLM) && text_dim <= 0) {
        throw InvalidConfig("text_dim required for text modes");
    }
}

// ---------------------------------------------------------------- ResidualBlock

ResidualBlock::ResidualBlock(const std::string& name, int in_ch, int out_ch, int stride)
    : conv1_(name + ".conv1", in_ch, out_ch, 3, stride, 1),
      bn1_(name + ".bn1", out_ch),
      conv2_(name + ".conv2", out_ch, out_ch, 3, 1, 1),
      bn2_(name + ".bn2", out_ch) {
    if (stride != 1 || in_ch != out_ch) {
        down_conv_ = std::make_unique<Conv1d>(name + ".down.conv", in_ch, out_ch, 1, stride, 0);
        down_bn_ = std::make_unique<BatchNorm1d>(name + ".down.bn", out_ch);
    }
}

void ResidualBlock::init(Rng& rng) {
    conv1_.init(rng);
    bn1_.init();
    conv2_.init(rng);
    bn2_.init();
    if (down_conv_) {
        down_conv_->init(rng);
        down_bn_->init();
    }
}

Batch3 ResidualBlock::forward(const Batch3& x, bool train) {
    Batch3 main = bn2_.forward(
        conv2_.forward(relu1_.forward(bn1_.forward(conv1_.forward(x, train), train), train), train),
        train);
    Batch3 shortcut =
        down_conv_ ? down_bn_->forward(down_conv_->forward(x, train), train) : x;
    for (std::size_t i = 0; i < main.v.size(); ++i) main.v[i] += shortcut.v[i];
    return relu_out_.forward(main, train);
}

Batch3 ResidualBlock::backward(const Batch3& dy) {
    Batch3 d_sum = relu_out_.backward(dy);
    Batch3 dx = conv1_.backward(
        bn1_.backward(relu1_.backward(conv2_.backward(bn2_.backward(d_sum)))));
    if (down_conv_) {
        Batch3 d_short = down_conv_->backward(down_bn_->backward(d_sum));
        for (std::size_t i = 0; i < dx.v.size(); ++i) dx.v[i] += d_short.v[i];
    } else {
        for (std::size_t i = 0; i < dx.v.size(); ++i) dx.v[i] += d_sum.v[i];
    }
    return dx;
}

void ResidualBlock::collect(std::vector<ParamRef>& out) {
    conv1_.collect(out);
    bn1_.collect(out);
    conv2_.collect(out);
    bn2_.collect(out);
    if (down_conv_) {
        down_conv_->collect(out);
        down_bn_->collect(out);
    }
}

// ---------------------------------------------------------------- EcgEncoder

EcgEncoder::EcgEncoder(int input_leads, int n_stages)
    : stem_conv_("encoder.stem.conv", input_leads, 64, 7, 2, 3),
      stem_bn_("encoder.stem.bn", 64),
      pool_(3, 2, 1),
      out_dim_(64 << (n_stages - 1)) {
    int in_ch = 64;
    for (int stage = 0; stage < n_stages; ++stage) {
        const int out_ch = 64 << stage;
        const int stride = stage == 0 ? 1 : 2;
        const std::string base = "encoder.stage" + std::to_string(stage + 1);
        blocks_.emplace_back(base + ".block1", in_ch, out_ch, stride);
        blocks_.emplace_back(base + ".block2", out_ch, out_ch, 1);
        in_ch = out_ch;
    }
}

void EcgEncoder::init(Rng& rng) {
    stem_conv_.init(rng);
    stem_bn_.init();
    for (auto& b : blocks_) b.init(rng);
}

Mat EcgEncoder::forward(const Batch3& x, bool train) {
    Batch3 h = pool_.forward(
        stem_relu_.forward(stem_bn_.forward(stem_conv_.forward(x, train), train), train), train);
    for (auto& b : blocks_) h = b.forward(h, train);
    return gap_.forward(h);
}

Batch3 EcgEncoder::backward(const Mat& d_emb) {
    Batch3 d = gap_.backward(d_emb);
    for (auto it = blocks_.rbegin(); it != blocks_.rend(); ++it) d = it->backward(d);
    return stem_conv_.backward(stem_bn_.backward(stem_relu_.backward(pool_.backward(d))));
}

void EcgEncoder::collect(std::vector<ParamRef>& out) {
    stem_conv_.collect(out);
    stem_bn_.collect(out);
    for (auto& b : blocks_) b.collect(out);
}

// ---------------------------------------------------------------- ClicNet

ClicNet::ClicNet(ModelConfig cfg)
    : cfg_(cfg),
      encoder_(cfg.input_leads, cfg.n_stages),
      head1_("head.fc1", cfg.ecg_dim(), cfg.head_dims[0]),
      head2_("head.fc2", cfg.head_dims[0], cfg.head_dims[1]),
      head3_("head.fc3", cfg.head_dims[1], cfg.head_dims[2]) {
    cfg_.validate();
    if (is_multimodal(cfg_.mode)) {
        fusion_ = std::make_unique<Linear>("fusion.fc", cfg_.fusion_input_dim(), cfg_.fusion_dim());
    }
}

void ClicNet::init(std::uint64_t seed) {
    cfg_.seed = seed;
    Rng rng(seed);
    encoder_.init(rng);
    if (fusion_) fusion_->init(rng);
    head1_.init(rng);
    head2_.init(rng);
    head3_.init(rng);
}

Mat ClicNet::encode(const Batch3& ecg, bool train) {
    if (ecg.ch != cfg_.input_leads) {
        throw DimensionMismatch("expected " + std::to_string(cfg_.input_leads) + " leads, got " +
                                std::to_string(ecg.ch));
    }
    if (ecg.len < 32) throw SignalTooShort("signal length " + std::to_string(ecg.len) + " < 32");
    check_finite(ecg, "ecg batch");
    return encoder_.forward(ecg, train);
}

Mat ClicNet::head_forward(const Mat& ecg_emb, const Mat* context, bool train) {
    const bool multimodal = is_multimodal(cfg_.mode);
    if (!multimodal && context != nullptr) {
        throw ModeMismatch("ecg mode takes no context input");
    }
    if (multimodal && context == nullptr) {
        throw ModeMismatch(std::string(mode_name(cfg_.mode)) + " mode requires context input");
    }
    if (ecg_emb.cols != cfg_.ecg_dim()) {
        throw DimensionMismatch("embedding width " + std::to_string(ecg_emb.cols) + ", expected " +
                                std::to_string(cfg_.ecg_dim()));
    }

    Mat h;
    if (multimodal) {
        if (context->rows != ecg_emb.rows) {
            throw DimensionMismatch("context batch " + std::to_string(context->rows) +
                                    ", ecg batch " + std::to_string(ecg_emb.rows));
        }
        if (context->cols != cfg_.context_dim()) {
            throw DimensionMismatch("context width " + std::to_string(context->cols) +
                                    ", expected " + std::to_string(cfg_.context_dim()));
        }
        Mat cat(ecg_emb.rows, ecg_emb.cols + context->cols);
        for (int r = 0; r < cat.rows; ++r) {
            double* dst = cat.row(r);
            const double* e = ecg_emb.row(r);
            const double* c = context->row(r);
            std::copy(e, e + ecg_emb.cols, dst);
            std::copy(c, c + context->cols, dst + ecg_emb.cols);
        }
        last_context_cols_ = context->cols;
        h = fusion_relu_.forward(fusion_->forward(cat, train), train);
    } else {
        h = ecg_emb;
    }
    h = relu1_.forward(head1_.forward(h, train), train);
    penultimate_ = relu2_.forward(head2_.forward(h, train), train);
    return head3_.forward(penultimate_, train);
}

Mat ClicNet::forward(const Batch3& ecg, const Mat* context, bool train) {
    return head_forward(encode(ecg, train), context, train);
}

void ClicNet::backward(const Mat& d_logits) {
    Mat d = relu1_.backward(head2_.backward(relu2_.backward(head3_.backward(d_logits))));
    d = head1_.backward(d);
    if (fusion_) {
        Mat d_cat = fusion_->backward(fusion_relu_.backward(d));
        // context embeddings are frozen inputs: only the ecg slice flows back
        Mat d_emb(d_cat.rows, cfg_.ecg_dim());
        for (int r = 0; r < d_cat.rows; ++r) {
            const double* src = d_cat.row(r);
            std::copy(src, src + cfg_.ecg_dim(), d_emb.row(r));
        }
        encoder_.backward(d_emb);
    } else {
        encoder_.backward(d);
    }
}

void ClicNet::zero_grad() {
    for (auto& p : parameters()) std::fill(p.grad->begin(), p.grad->end(), 0.0);
}

std::vector<ParamRef> ClicNet::parameters() {
    std::vector<ParamRef> out;
    for (auto& p : all_tensors()) {
        if (p.trainable) out.push_back(p);
    }
    return out;
}

std::vector<ParamRef> ClicNet::all_tensors() {
    std::vector<ParamRef> out;
    encoder_.collect(out);
    if (fusion_) fusion_->collect(out);
    head1_.collect(out);
    head2_.collect(out);
    head3_.collect(out);
    return out;
}

std::size_t ClicNet::parameter_count() {
    std::size_t n = 0;
    for (auto& p : parameters()) n += p.value->size();
    return n;
}

int predict(const double* logits, int n) {
    int best = 0;
    for (int i = 0; i < n; ++i) {
        if (!std::isfinite(logits[i])) throw NonFiniteLogits("logit " + std::to_string(i));
        if (logits[i] > logits[best]) best = i;
    }
    return best;
}

}  // namespace clic::model
