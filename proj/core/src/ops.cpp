#include "regada/ops.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace regada {

namespace {

using detail::TensorImpl;
using ImplPtr = std::shared_ptr<TensorImpl>;

void check_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw ShapeError(std::string(op) + ": shape mismatch " + shape_string(a.shape()) +
                     " vs " + shape_string(b.shape()));
  }
}

void check_rank2(const Tensor& t, const char* op) {
  if (t.rank() != 2) {
    throw ShapeError(std::string(op) + ": expected rank-2 tensor, got " +
                     shape_string(t.shape()));
  }
}

bool any_flows(std::initializer_list<const Tensor*> ts) {
  for (const Tensor* t : ts) {
    if ((*t).impl()->needs_grad()) return true;
  }
  return false;
}

// Registers the node when a tape is active and some input carries gradient.
void maybe_record(std::initializer_list<const Tensor*> inputs, const Tensor& out,
                  std::function<void()> backward_fn) {
  Tape* tape = Tape::current();
  if (tape == nullptr || !any_flows(inputs)) return;
  out.impl()->graph = true;
  std::vector<ImplPtr> ins;
  ins.reserve(inputs.size());
  for (const Tensor* t : inputs) ins.push_back((*t).impl());
  tape->record(std::move(ins), out.impl(), std::move(backward_fn));
}

// Elementwise unary helper: fwd(x) and dfdx given (x, y, dy).
template <typename Fwd, typename Bwd>
Tensor unary_op(const Tensor& x, const char* /*name*/, Fwd fwd, Bwd bwd) {
  std::vector<double> v(x.size());
  auto xv = x.values();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fwd(xv[i]);
  Tensor out(x.shape(), std::move(v));
  ImplPtr xi = x.impl(), oi = out.impl();
  maybe_record({&x}, out, [xi, oi, bwd]() {
    if (!xi->needs_grad()) return;
    xi->ensure_grad();
    for (std::size_t i = 0; i < xi->values.size(); ++i) {
      xi->grad[i] += bwd(xi->values[i], oi->values[i]) * oi->grad[i];
    }
  });
  return out;
}

}  // namespace

namespace detail {
void check_finite(const Tensor& t, const char* op_name) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t.values()[i])) {
      throw Error(std::string(op_name) + ": non-finite value at element " +
                  std::to_string(i));
    }
  }
}
}  // namespace detail

Tensor add(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "add");
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values()[i] + b.values()[i];
  Tensor out(a.shape(), std::move(v));
  ImplPtr ai = a.impl(), bi = b.impl(), oi = out.impl();
  maybe_record({&a, &b}, out, [ai, bi, oi]() {
    for (const ImplPtr& in : {ai, bi}) {
      if (!in->needs_grad()) continue;
      in->ensure_grad();
      for (std::size_t i = 0; i < in->grad.size(); ++i) in->grad[i] += oi->grad[i];
    }
  });
  return out;
}

Tensor sub(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "sub");
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values()[i] - b.values()[i];
  Tensor out(a.shape(), std::move(v));
  ImplPtr ai = a.impl(), bi = b.impl(), oi = out.impl();
  maybe_record({&a, &b}, out, [ai, bi, oi]() {
    if (ai->needs_grad()) {
      ai->ensure_grad();
      for (std::size_t i = 0; i < ai->grad.size(); ++i) ai->grad[i] += oi->grad[i];
    }
    if (bi->needs_grad()) {
      bi->ensure_grad();
      for (std::size_t i = 0; i < bi->grad.size(); ++i) bi->grad[i] -= oi->grad[i];
    }
  });
  return out;
}

Tensor mul(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "mul");
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values()[i] * b.values()[i];
  Tensor out(a.shape(), std::move(v));
  ImplPtr ai = a.impl(), bi = b.impl(), oi = out.impl();
  maybe_record({&a, &b}, out, [ai, bi, oi]() {
    if (ai->needs_grad()) {
      ai->ensure_grad();
      for (std::size_t i = 0; i < ai->grad.size(); ++i)
        ai->grad[i] += bi->values[i] * oi->grad[i];
    }
    if (bi->needs_grad()) {
      bi->ensure_grad();
      for (std::size_t i = 0; i < bi->grad.size(); ++i)
        bi->grad[i] += ai->values[i] * oi->grad[i];
    }
  });
  return out;
}

Tensor square(const Tensor& x) {
  return unary_op(
      x, "square", [](double v) { return v * v; },
      [](double v, double) { return 2.0 * v; });
}

Tensor sigmoid(const Tensor& x) {
  return unary_op(
      x, "sigmoid",
      [](double v) {
        if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
        const double e = std::exp(v);
        return e / (1.0 + e);
      },
      [](double, double y) { return y * (1.0 - y); });
}

Tensor relu(const Tensor& x) {
  return unary_op(
      x, "relu", [](double v) { return v > 0.0 ? v : 0.0; },
      [](double v, double) { return v > 0.0 ? 1.0 : 0.0; });
}

Tensor leaky_relu(const Tensor& x, double negative_slope) {
  const double s = negative_slope;
  return unary_op(
      x, "leaky_relu", [s](double v) { return v > 0.0 ? v : s * v; },
      [s](double v, double) { return v > 0.0 ? 1.0 : s; });
}

Tensor scale(const Tensor& x, double c) {
  return unary_op(
      x, "scale", [c](double v) { return c * v; },
      [c](double, double) { return c; });
}

Tensor add_const(const Tensor& x, double c) {
  return unary_op(
      x, "add_const", [c](double v) { return v + c; },
      [](double, double) { return 1.0; });
}

Tensor scalar_mul(const Tensor& s, const Tensor& x) {
  if (s.size() != 1) {
    throw ShapeError("scalar_mul: scalar operand must have one element, got " +
                     shape_string(s.shape()));
  }
  const double sv = s.values()[0];
  std::vector<double> v(x.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = sv * x.values()[i];
  Tensor out(x.shape(), std::move(v));
  ImplPtr si = s.impl(), xi = x.impl(), oi = out.impl();
  maybe_record({&s, &x}, out, [si, xi, oi]() {
    if (si->needs_grad()) {
      si->ensure_grad();
      double acc = 0.0;
      for (std::size_t i = 0; i < xi->values.size(); ++i)
        acc += xi->values[i] * oi->grad[i];
      si->grad[0] += acc;
    }
    if (xi->needs_grad()) {
      xi->ensure_grad();
      const double sv2 = si->values[0];
      for (std::size_t i = 0; i < xi->grad.size(); ++i)
        xi->grad[i] += sv2 * oi->grad[i];
    }
  });
  return out;
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  check_rank2(a, "matmul");
  check_rank2(b, "matmul");
  const std::size_t m = a.shape()[0], k = a.shape()[1];
  const std::size_t k2 = b.shape()[0], n = b.shape()[1];
  if (k != k2) {
    throw ShapeError("matmul: inner dimensions disagree, " + shape_string(a.shape()) +
                     " x " + shape_string(b.shape()));
  }
  std::vector<double> c(m * n, 0.0);
  const double* av = a.values().data();
  const double* bv = b.values().data();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t kk = 0; kk < k; ++kk) {
      const double aik = av[i * k + kk];
      if (aik == 0.0) continue;
      const double* brow = bv + kk * n;
      double* crow = c.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += aik * brow[j];
    }
  }
  Tensor out({m, n}, std::move(c));
  ImplPtr ai = a.impl(), bi = b.impl(), oi = out.impl();
  maybe_record({&a, &b}, out, [ai, bi, oi, m, k, n]() {
    const double* dc = oi->grad.data();
    if (ai->needs_grad()) {
      ai->ensure_grad();
      // dA[i,kk] += dot(dC[i,:], B[kk,:])
      for (std::size_t i = 0; i < m; ++i) {
        const double* dcrow = dc + i * n;
        for (std::size_t kk = 0; kk < k; ++kk) {
          const double* brow = bi->values.data() + kk * n;
          double acc = 0.0;
          for (std::size_t j = 0; j < n; ++j) acc += dcrow[j] * brow[j];
          ai->grad[i * k + kk] += acc;
        }
      }
    }
    if (bi->needs_grad()) {
      bi->ensure_grad();
      // dB[kk,j] += sum_i A[i,kk] * dC[i,j]
      for (std::size_t i = 0; i < m; ++i) {
        const double* dcrow = dc + i * n;
        for (std::size_t kk = 0; kk < k; ++kk) {
          const double aik = ai->values[i * k + kk];
          if (aik == 0.0) continue;
          double* dbrow = bi->grad.data() + kk * n;
          for (std::size_t j = 0; j < n; ++j) dbrow[j] += aik * dcrow[j];
        }
      }
    }
  });
  return out;
}

Tensor matmul_nt(const Tensor& a, const Tensor& b) {
  check_rank2(a, "matmul_nt");
  check_rank2(b, "matmul_nt");
  const std::size_t m = a.shape()[0], k = a.shape()[1];
  const std::size_t n = b.shape()[0], k2 = b.shape()[1];
  if (k != k2) {
    throw ShapeError("matmul_nt: inner dimensions disagree, " + shape_string(a.shape()) +
                     " x " + shape_string(b.shape()) + "^T");
  }
  std::vector<double> c(m * n);
  const double* av = a.values().data();
  const double* bv = b.values().data();
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = av + i * k;
    for (std::size_t j = 0; j < n; ++j) {
      const double* brow = bv + j * k;
      double acc = 0.0;
      for (std::size_t kk = 0; kk < k; ++kk) acc += arow[kk] * brow[kk];
      c[i * n + j] = acc;
    }
  }
  Tensor out({m, n}, std::move(c));
  ImplPtr ai = a.impl(), bi = b.impl(), oi = out.impl();
  maybe_record({&a, &b}, out, [ai, bi, oi, m, k, n]() {
    const double* dc = oi->grad.data();
    if (ai->needs_grad()) {
      ai->ensure_grad();
      // dA[i,:] += sum_j dC[i,j] * B[j,:]
      for (std::size_t i = 0; i < m; ++i) {
        double* darow = ai->grad.data() + i * k;
        for (std::size_t j = 0; j < n; ++j) {
          const double d = dc[i * n + j];
          if (d == 0.0) continue;
          const double* brow = bi->values.data() + j * k;
          for (std::size_t kk = 0; kk < k; ++kk) darow[kk] += d * brow[kk];
        }
      }
    }
    if (bi->needs_grad()) {
      bi->ensure_grad();
      // dB[j,:] += sum_i dC[i,j] * A[i,:]
      for (std::size_t i = 0; i < m; ++i) {
        const double* arow = ai->values.data() + i * k;
        for (std::size_t j = 0; j < n; ++j) {
          const double d = dc[i * n + j];
          if (d == 0.0) continue;
          double* dbrow = bi->grad.data() + j * k;
          for (std::size_t kk = 0; kk < k; ++kk) dbrow[kk] += d * arow[kk];
        }
      }
    }
  });
  return out;
}

Tensor add_bias(const Tensor& x, const Tensor& b) {
  check_rank2(x, "add_bias");
  if (b.rank() != 1 || b.size() != x.shape()[1]) {
    throw ShapeError("add_bias: bias shape " + shape_string(b.shape()) +
                     " does not match columns of " + shape_string(x.shape()));
  }
  const std::size_t m = x.shape()[0], n = x.shape()[1];
  std::vector<double> v(m * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) v[i * n + j] = x.values()[i * n + j] + b.values()[j];
  Tensor out({m, n}, std::move(v));
  ImplPtr xi = x.impl(), bi = b.impl(), oi = out.impl();
  maybe_record({&x, &b}, out, [xi, bi, oi, m, n]() {
    if (xi->needs_grad()) {
      xi->ensure_grad();
      for (std::size_t i = 0; i < m * n; ++i) xi->grad[i] += oi->grad[i];
    }
    if (bi->needs_grad()) {
      bi->ensure_grad();
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) bi->grad[j] += oi->grad[i * n + j];
    }
  });
  return out;
}

Tensor concat_cols(const Tensor& a, const Tensor& b) {
  check_rank2(a, "concat_cols");
  check_rank2(b, "concat_cols");
  if (a.shape()[0] != b.shape()[0]) {
    throw ShapeError("concat_cols: row counts disagree, " + shape_string(a.shape()) +
                     " vs " + shape_string(b.shape()));
  }
  const std::size_t m = a.shape()[0], p = a.shape()[1], q = b.shape()[1];
  std::vector<double> v(m * (p + q));
  for (std::size_t i = 0; i < m; ++i) {
    std::copy_n(a.values().data() + i * p, p, v.data() + i * (p + q));
    std::copy_n(b.values().data() + i * q, q, v.data() + i * (p + q) + p);
  }
  Tensor out({m, p + q}, std::move(v));
  ImplPtr ai = a.impl(), bi = b.impl(), oi = out.impl();
  maybe_record({&a, &b}, out, [ai, bi, oi, m, p, q]() {
    if (ai->needs_grad()) {
      ai->ensure_grad();
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < p; ++j)
          ai->grad[i * p + j] += oi->grad[i * (p + q) + j];
    }
    if (bi->needs_grad()) {
      bi->ensure_grad();
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < q; ++j)
          bi->grad[i * q + j] += oi->grad[i * (p + q) + p + j];
    }
  });
  return out;
}

Tensor slice_cols(const Tensor& x, std::size_t begin, std::size_t count) {
  check_rank2(x, "slice_cols");
  const std::size_t m = x.shape()[0], n = x.shape()[1];
  if (count == 0 || begin + count > n) {
    throw ShapeError("slice_cols: range [" + std::to_string(begin) + "," +
                     std::to_string(begin + count) + ") out of bounds for " +
                     shape_string(x.shape()));
  }
  std::vector<double> v(m * count);
  for (std::size_t i = 0; i < m; ++i)
    std::copy_n(x.values().data() + i * n + begin, count, v.data() + i * count);
  Tensor out({m, count}, std::move(v));
  ImplPtr xi = x.impl(), oi = out.impl();
  maybe_record({&x}, out, [xi, oi, m, n, begin, count]() {
    if (!xi->needs_grad()) return;
    xi->ensure_grad();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < count; ++j)
        xi->grad[i * n + begin + j] += oi->grad[i * count + j];
  });
  return out;
}

Tensor stack_rows(std::span<const Tensor> rows) {
  if (rows.empty()) throw ShapeError("stack_rows: need at least one row");
  const std::size_t n = rows[0].cols();
  for (const Tensor& r : rows) {
    if (r.rows() != 1 || r.cols() != n) {
      throw ShapeError("stack_rows: every input must be a single row of width " +
                       std::to_string(n) + ", got " + shape_string(r.shape()));
    }
  }
  const std::size_t k = rows.size();
  std::vector<double> v(k * n);
  for (std::size_t i = 0; i < k; ++i)
    std::copy_n(rows[i].values().data(), n, v.data() + i * n);
  Tensor out({k, n}, std::move(v));

  bool flows = false;
  for (const Tensor& r : rows)
    if (r.impl()->needs_grad()) flows = true;
  Tape* tape = Tape::current();
  if (tape != nullptr && flows) {
    out.impl()->graph = true;
    std::vector<ImplPtr> ins;
    ins.reserve(k);
    for (const Tensor& r : rows) ins.push_back(r.impl());
    ImplPtr oi = out.impl();
    std::vector<ImplPtr> captured = ins;
    tape->record(std::move(ins), oi, [captured, oi, n]() {
      for (std::size_t i = 0; i < captured.size(); ++i) {
        const ImplPtr& in = captured[i];
        if (!in->needs_grad()) continue;
        in->ensure_grad();
        for (std::size_t j = 0; j < n; ++j) in->grad[j] += oi->grad[i * n + j];
      }
    });
  }
  return out;
}

Tensor reshape(const Tensor& x, std::vector<std::size_t> shape) {
  if (shape_size(shape) != x.size()) {
    throw ShapeError("reshape: cannot view " + shape_string(x.shape()) + " as " +
                     shape_string(shape));
  }
  std::vector<double> v(x.values().begin(), x.values().end());
  Tensor out(std::move(shape), std::move(v));
  ImplPtr xi = x.impl(), oi = out.impl();
  maybe_record({&x}, out, [xi, oi]() {
    if (!xi->needs_grad()) return;
    xi->ensure_grad();
    for (std::size_t i = 0; i < xi->grad.size(); ++i) xi->grad[i] += oi->grad[i];
  });
  return out;
}

Tensor softmax(const Tensor& x, std::size_t axis) {
  if (x.rank() > 2 || axis >= x.rank()) {
    throw ShapeError("softmax: unsupported axis " + std::to_string(axis) +
                     " for shape " + shape_string(x.shape()));
  }
  // Normalize to (slices, length, stride) over the flat buffer.
  std::size_t n_slices, len, stride, slice_step;
  if (x.rank() == 1) {
    n_slices = 1, len = x.size(), stride = 1, slice_step = 0;
  } else if (axis == 1) {
    n_slices = x.shape()[0], len = x.shape()[1], stride = 1, slice_step = x.shape()[1];
  } else {
    n_slices = x.shape()[1], len = x.shape()[0], stride = x.shape()[1], slice_step = 1;
  }
  std::vector<double> v(x.size());
  for (std::size_t s = 0; s < n_slices; ++s) {
    const double* in = x.values().data() + s * slice_step;
    double* outp = v.data() + s * slice_step;
    double mx = in[0];
    for (std::size_t i = 1; i < len; ++i) mx = std::max(mx, in[i * stride]);
    double total = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      const double e = std::exp(in[i * stride] - mx);
      outp[i * stride] = e;
      total += e;
    }
    for (std::size_t i = 0; i < len; ++i) outp[i * stride] /= total;
  }
  Tensor out(x.shape(), std::move(v));
  ImplPtr xi = x.impl(), oi = out.impl();
  maybe_record({&x}, out, [xi, oi, n_slices, len, stride, slice_step]() {
    if (!xi->needs_grad()) return;
    xi->ensure_grad();
    for (std::size_t s = 0; s < n_slices; ++s) {
      const double* y = oi->values.data() + s * slice_step;
      const double* dy = oi->grad.data() + s * slice_step;
      double* dx = xi->grad.data() + s * slice_step;
      double dot = 0.0;
      for (std::size_t i = 0; i < len; ++i) dot += y[i * stride] * dy[i * stride];
      for (std::size_t i = 0; i < len; ++i)
        dx[i * stride] += y[i * stride] * (dy[i * stride] - dot);
    }
  });
  return out;
}

Tensor layer_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta) {
  check_rank2(x, "layer_norm");
  const std::size_t m = x.shape()[0], n = x.shape()[1];
  if (gamma.rank() != 1 || gamma.size() != n || beta.rank() != 1 || beta.size() != n) {
    throw ShapeError("layer_norm: affine parameters must have shape [" +
                     std::to_string(n) + "]");
  }
  constexpr double kEps = 1e-5;
  std::vector<double> v(m * n);
  std::vector<double> xhat(m * n), inv_std(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double* row = x.values().data() + i * n;
    double mu = 0.0;
    for (std::size_t j = 0; j < n; ++j) mu += row[j];
    mu /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t j = 0; j < n; ++j) var += (row[j] - mu) * (row[j] - mu);
    var /= static_cast<double>(n);
    const double is = 1.0 / std::sqrt(var + kEps);
    inv_std[i] = is;
    for (std::size_t j = 0; j < n; ++j) {
      const double h = (row[j] - mu) * is;
      xhat[i * n + j] = h;
      v[i * n + j] = gamma.values()[j] * h + beta.values()[j];
    }
  }
  Tensor out({m, n}, std::move(v));
  ImplPtr xi = x.impl(), gi = gamma.impl(), bi = beta.impl(), oi = out.impl();
  maybe_record({&x, &gamma, &beta}, out,
               [xi, gi, bi, oi, m, n, xhat = std::move(xhat),
                inv_std = std::move(inv_std)]() {
    for (std::size_t i = 0; i < m; ++i) {
      const double* dy = oi->grad.data() + i * n;
      const double* h = xhat.data() + i * n;
      if (gi->needs_grad()) {
        gi->ensure_grad();
        for (std::size_t j = 0; j < n; ++j) gi->grad[j] += dy[j] * h[j];
      }
      if (bi->needs_grad()) {
        bi->ensure_grad();
        for (std::size_t j = 0; j < n; ++j) bi->grad[j] += dy[j];
      }
      if (xi->needs_grad()) {
        xi->ensure_grad();
        double mean_dh = 0.0, mean_dh_h = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          const double dh = dy[j] * gi->values[j];
          mean_dh += dh;
          mean_dh_h += dh * h[j];
        }
        mean_dh /= static_cast<double>(n);
        mean_dh_h /= static_cast<double>(n);
        double* dx = xi->grad.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) {
          const double dh = dy[j] * gi->values[j];
          dx[j] += inv_std[i] * (dh - mean_dh - h[j] * mean_dh_h);
        }
      }
    }
  });
  return out;
}

Tensor dropout(const Tensor& x, double p, Mode mode, Rng& rng) {
  if (p < 0.0 || p >= 1.0) {
    throw ConfigError("dropout probability must lie in [0,1), got " + std::to_string(p));
  }
  if (mode == Mode::eval || p == 0.0) return x;
  const double keep_scale = 1.0 / (1.0 - p);
  std::vector<double> mask(x.size());
  std::vector<double> v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    mask[i] = rng.uniform() < p ? 0.0 : keep_scale;
    v[i] = x.values()[i] * mask[i];
  }
  Tensor out(x.shape(), std::move(v));
  ImplPtr xi = x.impl(), oi = out.impl();
  maybe_record({&x}, out, [xi, oi, mask = std::move(mask)]() {
    if (!xi->needs_grad()) return;
    xi->ensure_grad();
    for (std::size_t i = 0; i < xi->grad.size(); ++i)
      xi->grad[i] += mask[i] * oi->grad[i];
  });
  return out;
}

Tensor sum(const Tensor& x) {
  double acc = 0.0;
  for (double v : x.values()) acc += v;
  Tensor out = Tensor::scalar(acc);
  ImplPtr xi = x.impl(), oi = out.impl();
  maybe_record({&x}, out, [xi, oi]() {
    if (!xi->needs_grad()) return;
    xi->ensure_grad();
    for (std::size_t i = 0; i < xi->grad.size(); ++i) xi->grad[i] += oi->grad[0];
  });
  return out;
}

Tensor mean(const Tensor& x) {
  double acc = 0.0;
  for (double v : x.values()) acc += v;
  const double inv_n = 1.0 / static_cast<double>(x.size());
  Tensor out = Tensor::scalar(acc * inv_n);
  ImplPtr xi = x.impl(), oi = out.impl();
  maybe_record({&x}, out, [xi, oi, inv_n]() {
    if (!xi->needs_grad()) return;
    xi->ensure_grad();
    for (std::size_t i = 0; i < xi->grad.size(); ++i) xi->grad[i] += inv_n * oi->grad[0];
  });
  return out;
}

Tensor l2_norm(const Tensor& x) {
  double acc = 0.0;
  for (double v : x.values()) acc += v * v;
  const double norm = std::sqrt(acc);
  Tensor out = Tensor::scalar(norm);
  ImplPtr xi = x.impl(), oi = out.impl();
  maybe_record({&x}, out, [xi, oi, norm]() {
    if (!xi->needs_grad() || norm == 0.0) return;  // subgradient 0 at the origin
    xi->ensure_grad();
    const double g = oi->grad[0] / norm;
    for (std::size_t i = 0; i < xi->grad.size(); ++i)
      xi->grad[i] += g * xi->values[i];
  });
  return out;
}

Tensor rowwise_l2_norm(const Tensor& x) {
  check_rank2(x, "rowwise_l2_norm");
  const std::size_t m = x.shape()[0], n = x.shape()[1];
  std::vector<double> v(m);
  for (std::size_t i = 0; i < m; ++i) {
    double acc = 0.0;
    const double* row = x.values().data() + i * n;
    for (std::size_t j = 0; j < n; ++j) acc += row[j] * row[j];
    v[i] = std::sqrt(acc);
  }
  Tensor out({m, 1}, std::move(v));
  ImplPtr xi = x.impl(), oi = out.impl();
  maybe_record({&x}, out, [xi, oi, m, n]() {
    if (!xi->needs_grad()) return;
    xi->ensure_grad();
    for (std::size_t i = 0; i < m; ++i) {
      const double norm = oi->values[i];
      if (norm == 0.0) continue;
      const double g = oi->grad[i] / norm;
      for (std::size_t j = 0; j < n; ++j)
        xi->grad[i * n + j] += g * xi->values[i * n + j];
    }
  });
  return out;
}

Tensor rowwise_sum(const Tensor& x) {
  check_rank2(x, "rowwise_sum");
  const std::size_t m = x.shape()[0], n = x.shape()[1];
  std::vector<double> v(m, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) v[i] += x.values()[i * n + j];
  Tensor out({m, 1}, std::move(v));
  ImplPtr xi = x.impl(), oi = out.impl();
  maybe_record({&x}, out, [xi, oi, m, n]() {
    if (!xi->needs_grad()) return;
    xi->ensure_grad();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) xi->grad[i * n + j] += oi->grad[i];
  });
  return out;
}

void backward(const Tensor& loss) {
  Tape* tape = Tape::current();
  if (tape == nullptr) throw Error("backward() requires an active Tape");
  tape->backward(loss);
}

}  // namespace regada
