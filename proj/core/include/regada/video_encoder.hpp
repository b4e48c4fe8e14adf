#pragma once

#include <string>
#include <utility>
#include <vector>

#include "regada/nn.hpp"

namespace regada {

struct VideoEncoderConfig {
  std::size_t d_x = 1024;
  std::size_t d_theta = 512;
  std::size_t d_dim = 400;
  std::size_t heads = 4;       // H_x
  std::size_t d_head = 64;     // d_head_x
  double attn_dropout = 0.1;   // drop_attn
  std::size_t proj_layers = 2; // N_proj
  double proj_dropout = 0.3;   // drop_proj

  void validate() const;
};

// Action-focused video embedding: the action word vector queries a
// multi-head attention pool over the segment features, followed by an MLP
// of linear -> layer norm -> ReLU -> dropout blocks.
class VideoEncoder {
 public:
  VideoEncoder(VideoEncoderConfig config, Rng& rng);

  const VideoEncoderConfig& config() const { return config_; }

  // features: [T, d_x]; theta_action: [1, d_theta]. Returns [1, d_dim].
  Tensor attend(const Tensor& features, const Tensor& theta_action, Mode mode, Rng& rng);
  Tensor project(const Tensor& o_attn, Mode mode, Rng& rng);
  Tensor encode(const Tensor& features, const Tensor& theta_action, Mode mode, Rng& rng);

  std::vector<Tensor> parameters();
  NamedTensors named_parameters();  // "video.*"

 private:
  struct ProjBlock {
    Linear linear;
    LayerNormAffine norm;
  };

  VideoEncoderConfig config_;
  Linear query_proj_;  // d_theta -> heads*d_head
  Linear key_proj_;    // d_x -> heads*d_head
  Linear value_proj_;  // d_x -> heads*d_head
  Linear attn_out_;    // heads*d_head -> d_dim
  std::vector<ProjBlock> proj_blocks_;
};

}  // namespace regada
