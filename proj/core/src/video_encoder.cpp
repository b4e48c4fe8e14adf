#include "regada/video_encoder.hpp"

#include <cmath>

namespace regada {

void VideoEncoderConfig::validate() const {
  if (d_x == 0 || d_theta == 0 || d_dim == 0 || heads == 0 || d_head == 0) {
    throw ConfigError("video: all dimensions must be positive");
  }
  if (proj_layers < 1) throw ConfigError("video: proj_layers must be >= 1");
  if (attn_dropout < 0.0 || attn_dropout >= 1.0 || proj_dropout < 0.0 ||
      proj_dropout >= 1.0) {
    throw ConfigError("video: dropout probabilities must lie in [0,1)");
  }
}

VideoEncoder::VideoEncoder(VideoEncoderConfig config, Rng& rng) : config_(config) {
  config_.validate();
  const std::size_t width = config_.heads * config_.d_head;
  query_proj_ = Linear(config_.d_theta, width, /*with_bias=*/false, rng);
  key_proj_ = Linear(config_.d_x, width, /*with_bias=*/false, rng);
  value_proj_ = Linear(config_.d_x, width, /*with_bias=*/false, rng);
  attn_out_ = Linear(width, config_.d_dim, /*with_bias=*/false, rng);
  for (std::size_t i = 0; i < config_.proj_layers; ++i) {
    proj_blocks_.push_back(
        {Linear(config_.d_dim, config_.d_dim, /*with_bias=*/true, rng),
         LayerNormAffine(config_.d_dim)});
  }
}

Tensor VideoEncoder::attend(const Tensor& features, const Tensor& theta_action,
                            Mode mode, Rng& rng) {
  if (features.rank() != 2 || features.shape()[1] != config_.d_x) {
    throw ShapeError("attend: features must be [T," + std::to_string(config_.d_x) +
                     "], got " + shape_string(features.shape()));
  }
  if (theta_action.rank() != 2 || theta_action.shape()[0] != 1 ||
      theta_action.shape()[1] != config_.d_theta) {
    throw ShapeError("attend: query must be [1," + std::to_string(config_.d_theta) +
                     "], got " + shape_string(theta_action.shape()));
  }
  Tensor query = query_proj_(theta_action);  // [1, H*dh]
  Tensor keys = key_proj_(features);         // [T, H*dh]
  Tensor values = value_proj_(features);     // [T, H*dh]

  const double inv_sqrt_dh = 1.0 / std::sqrt(static_cast<double>(config_.d_head));
  std::vector<Tensor> head_outputs;
  head_outputs.reserve(config_.heads);
  for (std::size_t h = 0; h < config_.heads; ++h) {
    const std::size_t lo = h * config_.d_head;
    Tensor q = slice_cols(query, lo, config_.d_head);   // [1, dh]
    Tensor k = slice_cols(keys, lo, config_.d_head);    // [T, dh]
    Tensor v = slice_cols(values, lo, config_.d_head);  // [T, dh]
    Tensor weights = softmax(scale(matmul_nt(q, k), inv_sqrt_dh), 1);  // [1, T]
    // Dropout wraps the softmax output; the surviving weights are not
    // renormalized.
    weights = dropout(weights, config_.attn_dropout, mode, rng);
    head_outputs.push_back(matmul(weights, v));  // [1, dh]
  }
  Tensor pooled = head_outputs[0];
  for (std::size_t h = 1; h < head_outputs.size(); ++h) {
    pooled = concat_cols(pooled, head_outputs[h]);
  }
  return attn_out_(pooled);  // [1, d_dim]
}

Tensor VideoEncoder::project(const Tensor& o_attn, Mode mode, Rng& rng) {
  if (o_attn.rank() != 2 || o_attn.shape()[1] != config_.d_dim) {
    throw ShapeError("project: expected [*, " + std::to_string(config_.d_dim) +
                     "] input, got " + shape_string(o_attn.shape()));
  }
  Tensor h = o_attn;
  for (const ProjBlock& block : proj_blocks_) {
    h = dropout(relu(layer_norm(block.linear(h), block.norm.gamma, block.norm.beta)),
                config_.proj_dropout, mode, rng);
  }
  return h;
}

Tensor VideoEncoder::encode(const Tensor& features, const Tensor& theta_action,
                            Mode mode, Rng& rng) {
  return project(attend(features, theta_action, mode, rng), mode, rng);
}

std::vector<Tensor> VideoEncoder::parameters() {
  std::vector<Tensor> params;
  for (auto& [name, t] : named_parameters()) params.push_back(t);
  return params;
}

NamedTensors VideoEncoder::named_parameters() {
  NamedTensors out;
  out.emplace_back("video.W_q", query_proj_.weight);
  out.emplace_back("video.W_k", key_proj_.weight);
  out.emplace_back("video.W_v", value_proj_.weight);
  out.emplace_back("video.W_attn", attn_out_.weight);
  for (std::size_t i = 0; i < proj_blocks_.size(); ++i) {
    const std::string prefix = "video.proj.block" + std::to_string(i);
    out.emplace_back(prefix + ".W", proj_blocks_[i].linear.weight);
    out.emplace_back(prefix + ".b", proj_blocks_[i].linear.bias);
    out.emplace_back(prefix + ".ln.gamma", proj_blocks_[i].norm.gamma);
    out.emplace_back(prefix + ".ln.beta", proj_blocks_[i].norm.beta);
  }
  return out;
}

}  // namespace regada
