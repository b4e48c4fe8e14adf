#include "regada/gradcheck_suite.hpp"

#include <algorithm>
#include <functional>
#include <ostream>

#include "regada/grad_check.hpp"
#include "regada/nn.hpp"
#include "regada/objective.hpp"
#include "regada/text_encoder.hpp"
#include "regada/video_encoder.hpp"

namespace regada {

namespace {

constexpr double kTolerance = 1e-4;

Tensor random_tensor(std::vector<std::size_t> shape, Rng& rng, double lo = -1.0,
                     double hi = 1.0) {
  std::vector<double> v(shape_size(shape));
  for (double& x : v) x = rng.uniform(lo, hi);
  return Tensor(std::move(shape), std::move(v), /*requires_grad=*/true);
}

// Pushes entries away from zero so kinks never sit inside the difference
// stencil.
Tensor random_tensor_off_kink(std::vector<std::size_t> shape, Rng& rng) {
  std::vector<double> v(shape_size(shape));
  for (double& x : v) {
    const double mag = rng.uniform(0.05, 1.0);
    x = rng.uniform() < 0.5 ? -mag : mag;
  }
  return Tensor(std::move(shape), std::move(v), /*requires_grad=*/true);
}

}  // namespace

GradCheckSuiteResult run_gradcheck_suite(std::ostream& log, std::size_t points) {
  GradCheckSuiteResult result;
  Rng rng(2024);

  auto run = [&](const std::string& name,
                 const std::function<std::vector<Tensor>(Rng&)>& make_leaves,
                 const std::function<Tensor(std::vector<Tensor>&)>& program) {
    GradCheckSuiteEntry entry;
    entry.name = name;
    for (std::size_t point = 0; point < points; ++point) {
      std::vector<Tensor> leaves = make_leaves(rng);
      auto f = [&] { return program(leaves); };
      entry.max_rel_err =
          std::max(entry.max_rel_err, grad_check(f, leaves).max_rel_err);
    }
    entry.passed = entry.max_rel_err <= kTolerance;
    result.all_passed = result.all_passed && entry.passed;
    log << (entry.passed ? "pass" : "FAIL") << "  " << name
        << "  max_rel_err=" << entry.max_rel_err << "\n";
    result.entries.push_back(std::move(entry));
  };

  auto one34 = [](Rng& r) { return std::vector<Tensor>{random_tensor({3, 4}, r)}; };
  auto two34 = [](Rng& r) {
    return std::vector<Tensor>{random_tensor({3, 4}, r), random_tensor({3, 4}, r)};
  };

  run("add", two34, [](auto& l) { return sum(square(add(l[0], l[1]))); });
  run("sub", two34, [](auto& l) { return sum(square(sub(l[0], l[1]))); });
  run("mul", two34, [](auto& l) { return sum(square(mul(l[0], l[1]))); });
  run("square", one34, [](auto& l) { return sum(square(square(l[0]))); });
  run("sigmoid", one34, [](auto& l) { return sum(square(sigmoid(l[0]))); });
  run("relu",
      [](Rng& r) { return std::vector<Tensor>{random_tensor_off_kink({3, 4}, r)}; },
      [](auto& l) { return sum(square(relu(l[0]))); });
  run("leaky_relu",
      [](Rng& r) { return std::vector<Tensor>{random_tensor_off_kink({3, 4}, r)}; },
      [](auto& l) { return sum(square(leaky_relu(l[0], 0.01))); });
  run("scale", one34, [](auto& l) { return sum(scale(l[0], -1.7)); });
  run("add_const", one34, [](auto& l) { return sum(square(add_const(l[0], 0.3))); });
  run("reshape", one34, [](auto& l) { return sum(square(reshape(l[0], {12}))); });
  run("scalar_mul",
      [](Rng& r) {
        return std::vector<Tensor>{
            Tensor::scalar(r.uniform(-2, 2), true), random_tensor({3, 4}, r)};
      },
      [](auto& l) { return sum(square(scalar_mul(l[0], l[1]))); });
  run("matmul",
      [](Rng& r) {
        return std::vector<Tensor>{random_tensor({3, 4}, r), random_tensor({4, 2}, r)};
      },
      [](auto& l) { return sum(square(matmul(l[0], l[1]))); });
  run("matmul_nt",
      [](Rng& r) {
        return std::vector<Tensor>{random_tensor({3, 4}, r), random_tensor({5, 4}, r)};
      },
      [](auto& l) { return sum(square(matmul_nt(l[0], l[1]))); });
  run("add_bias",
      [](Rng& r) {
        return std::vector<Tensor>{random_tensor({3, 4}, r), random_tensor({4}, r)};
      },
      [](auto& l) { return sum(square(add_bias(l[0], l[1]))); });
  run("concat_cols",
      [](Rng& r) {
        return std::vector<Tensor>{random_tensor({3, 2}, r), random_tensor({3, 3}, r)};
      },
      [](auto& l) { return sum(square(concat_cols(l[0], l[1]))); });
  run("slice_cols", one34, [](auto& l) { return sum(square(slice_cols(l[0], 1, 2))); });
  run("stack_rows",
      [](Rng& r) {
        return std::vector<Tensor>{random_tensor({1, 4}, r), random_tensor({1, 4}, r)};
      },
      [](auto& l) {
        return sum(square(stack_rows(std::vector<Tensor>{l[0], l[1]})));
      });
  run("softmax_rows", one34, [](auto& l) { return sum(square(softmax(l[0], 1))); });
  run("softmax_cols", one34, [](auto& l) { return sum(square(softmax(l[0], 0))); });
  run("layer_norm",
      [](Rng& r) {
        return std::vector<Tensor>{random_tensor({3, 4}, r),
                                   random_tensor({4}, r, 0.5, 1.5),
                                   random_tensor({4}, r, -0.5, 0.5)};
      },
      [](auto& l) { return sum(square(layer_norm(l[0], l[1], l[2]))); });
  run("dropout_train",
      [](Rng& r) { return std::vector<Tensor>{random_tensor({4, 5}, r)}; },
      [](auto& l) {
        Rng mask_rng(7);
        return sum(square(dropout(l[0], 0.4, Mode::train, mask_rng)));
      });
  run("sum", one34, [](auto& l) { return sum(square(l[0])); });
  run("mean", one34, [](auto& l) { return mean(square(l[0])); });
  run("l2_norm", one34, [](auto& l) { return l2_norm(l[0]); });
  run("rowwise_l2_norm", one34,
      [](auto& l) { return sum(square(rowwise_l2_norm(l[0]))); });
  run("rowwise_sum", one34, [](auto& l) { return sum(square(rowwise_sum(l[0]))); });

  {
    GradCheckSuiteEntry bn_train;
    bn_train.name = "batch_norm_train";
    GradCheckSuiteEntry bn_eval;
    bn_eval.name = "batch_norm_eval";
    for (std::size_t point = 0; point < points; ++point) {
      {
        BatchNorm bn(3);
        std::vector<Tensor> leaves = {random_tensor({5, 3}, rng), bn.gamma, bn.beta};
        auto f = [&] { return sum(square(batch_norm(leaves[0], bn, Mode::train))); };
        bn_train.max_rel_err =
            std::max(bn_train.max_rel_err, grad_check(f, leaves).max_rel_err);
      }
      {
        BatchNorm bn(3);
        for (std::size_t j = 0; j < 3; ++j) {
          bn.running_mean[j] = rng.uniform(-1, 1);
          bn.running_var[j] = rng.uniform(0.5, 2.0);
        }
        std::vector<Tensor> leaves = {random_tensor({4, 3}, rng), bn.gamma, bn.beta};
        auto f = [&] { return sum(square(batch_norm(leaves[0], bn, Mode::eval))); };
        bn_eval.max_rel_err =
            std::max(bn_eval.max_rel_err, grad_check(f, leaves).max_rel_err);
      }
    }
    for (GradCheckSuiteEntry* e : {&bn_train, &bn_eval}) {
      e->passed = e->max_rel_err <= kTolerance;
      result.all_passed = result.all_passed && e->passed;
      log << (e->passed ? "pass" : "FAIL") << "  " << e->name
          << "  max_rel_err=" << e->max_rel_err << "\n";
      result.entries.push_back(*e);
    }
  }

  // Full weighted objective through both encoders.
  {
    GradCheckSuiteEntry entry;
    entry.name = "full_objective";
    for (std::size_t point = 0; point < points; ++point) {
      TextEncoderConfig tcfg;
      tcfg.d_theta = 3;
      tcfg.d_dim = 4;
      tcfg.gate_layers = 1;
      tcfg.res_layers = 1;
      tcfg.dropout = 0.3;
      VideoEncoderConfig vcfg;
      vcfg.d_x = 4;
      vcfg.d_theta = 3;
      vcfg.d_dim = 4;
      vcfg.heads = 2;
      vcfg.d_head = 2;
      vcfg.proj_layers = 1;
      LossConfig lcfg;

      TextEncoder text(tcfg, rng);
      VideoEncoder video(vcfg, rng);
      const std::size_t batch = 3;
      std::vector<Tensor> feats;
      for (std::size_t i = 0; i < batch; ++i) feats.push_back(random_tensor({3, 4}, rng));
      std::vector<Tensor> theta_rows;
      for (std::size_t i = 0; i < batch; ++i) theta_rows.push_back(random_tensor({1, 3}, rng));
      Tensor theta_a = random_tensor({batch, 3}, rng);
      Tensor theta_v = random_tensor({batch, 3}, rng);
      Tensor theta_abar = random_tensor({batch, 3}, rng);
      Tensor theta_vbar = random_tensor({batch, 3}, rng);

      std::vector<Tensor> leaves = text.parameters();
      for (Tensor& p : video.parameters()) leaves.push_back(p);

      auto f = [&] {
        Rng drop(42);
        std::vector<Tensor> rows;
        for (std::size_t i = 0; i < batch; ++i) {
          rows.push_back(video.encode(feats[i], theta_rows[i], Mode::train, drop));
        }
        Tensor anchor = stack_rows(rows);
        Tensor positive = text.compose(text.project_main(theta_v),
                                       text.project_aux(theta_a), Mode::train, drop);
        Tensor neg_action = text.compose(text.project_main(theta_v),
                                         text.project_aux(theta_abar), Mode::train, drop);
        Tensor neg_adverb = text.compose(text.project_main(theta_vbar),
                                         text.project_aux(theta_a), Mode::train, drop);
        return total_loss(anchor, positive, neg_action, neg_adverb, lcfg).total;
      };
      entry.max_rel_err = std::max(entry.max_rel_err, grad_check(f, leaves).max_rel_err);
    }
    entry.passed = entry.max_rel_err <= kTolerance;
    result.all_passed = result.all_passed && entry.passed;
    log << (entry.passed ? "pass" : "FAIL") << "  " << entry.name
        << "  max_rel_err=" << entry.max_rel_err << "\n";
    result.entries.push_back(std::move(entry));
  }

  return result;
}

}  // namespace regada
