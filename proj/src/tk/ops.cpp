#include "nuggetbench/tk/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nuggetbench/kernels/kernels.hpp"

namespace nb::tk {

namespace {

namespace kn = nb::kernels;

void require_same_shape(const Var& a, const Var& b, const char* op) {
  if (!a->value.same_shape(b->value)) {
    throw ShapeError(std::string(op) + ": operand shapes " + a->value.shape_string() + " and " +
                     b->value.shape_string() + " differ");
  }
}

constexpr double kLogClamp = 1e-12;

}  // namespace

Var add(const Var& a, const Var& b) {
  require_same_shape(a, b, "add");
  Tensor out(a->value.shape());
  kn::add(a->value.data(), b->value.data(), out.data(), out.numel());
  return make_op(std::move(out), {a, b}, [](Node& self) {
    const Tensor& g = self.grad;
    for (int i = 0; i < 2; ++i) {
      if (self.parents[i]->requires_grad) {
        kn::axpy(1.0, g.data(), self.parents[i]->ensure_grad().data(), g.numel());
      }
    }
  });
}

Var sub(const Var& a, const Var& b) {
  require_same_shape(a, b, "sub");
  Tensor out(a->value.shape());
  kn::sub(a->value.data(), b->value.data(), out.data(), out.numel());
  return make_op(std::move(out), {a, b}, [](Node& self) {
    const Tensor& g = self.grad;
    if (self.parents[0]->requires_grad) {
      kn::axpy(1.0, g.data(), self.parents[0]->ensure_grad().data(), g.numel());
    }
    if (self.parents[1]->requires_grad) {
      kn::axpy(-1.0, g.data(), self.parents[1]->ensure_grad().data(), g.numel());
    }
  });
}

Var mul(const Var& a, const Var& b) {
  require_same_shape(a, b, "elementwise_multiply");
  Tensor out(a->value.shape());
  kn::mul(a->value.data(), b->value.data(), out.data(), out.numel());
  return make_op(std::move(out), {a, b}, [](Node& self) {
    const Tensor& g = self.grad;
    const std::size_t n = g.numel();
    if (self.parents[0]->requires_grad) {
      double* da = self.parents[0]->ensure_grad().data();
      const double* bv = self.parents[1]->value.data();
      for (std::size_t i = 0; i < n; ++i) da[i] += g.data()[i] * bv[i];
    }
    if (self.parents[1]->requires_grad) {
      double* db = self.parents[1]->ensure_grad().data();
      const double* av = self.parents[0]->value.data();
      for (std::size_t i = 0; i < n; ++i) db[i] += g.data()[i] * av[i];
    }
  });
}

Var scale(const Var& a, double s) {
  Tensor out(a->value.shape());
  kn::scale(a->value.data(), s, out.data(), out.numel());
  return make_op(std::move(out), {a}, [s](Node& self) {
    if (self.parents[0]->requires_grad) {
      kn::axpy(s, self.grad.data(), self.parents[0]->ensure_grad().data(), self.grad.numel());
    }
  });
}

Var one_minus(const Var& a) {
  Tensor out(a->value.shape());
  for (std::size_t i = 0; i < out.numel(); ++i) out.data()[i] = 1.0 - a->value.data()[i];
  return make_op(std::move(out), {a}, [](Node& self) {
    if (self.parents[0]->requires_grad) {
      kn::axpy(-1.0, self.grad.data(), self.parents[0]->ensure_grad().data(), self.grad.numel());
    }
  });
}

Var sigmoid(const Var& a) {
  Tensor out(a->value.shape());
  for (std::size_t i = 0; i < out.numel(); ++i) {
    double x = a->value.data()[i];
    // Branch keeps exp() argument non-positive for stability at |x| >> 0.
    out.data()[i] = x >= 0.0 ? 1.0 / (1.0 + std::exp(-x))
                             : std::exp(x) / (1.0 + std::exp(x));
  }
  return make_op(std::move(out), {a}, [](Node& self) {
    if (!self.parents[0]->requires_grad) return;
    double* da = self.parents[0]->ensure_grad().data();
    for (std::size_t i = 0; i < self.grad.numel(); ++i) {
      double y = self.value.data()[i];
      da[i] += self.grad.data()[i] * y * (1.0 - y);
    }
  });
}

Var tanh(const Var& a) {
  Tensor out(a->value.shape());
  for (std::size_t i = 0; i < out.numel(); ++i) out.data()[i] = std::tanh(a->value.data()[i]);
  return make_op(std::move(out), {a}, [](Node& self) {
    if (!self.parents[0]->requires_grad) return;
    double* da = self.parents[0]->ensure_grad().data();
    for (std::size_t i = 0; i < self.grad.numel(); ++i) {
      double y = self.value.data()[i];
      da[i] += self.grad.data()[i] * (1.0 - y * y);
    }
  });
}

Var matmul(const Var& a, const Var& b) {
  const Tensor& av = a->value;
  const Tensor& bv = b->value;
  std::size_t m, k, n;
  std::vector<std::size_t> out_shape;
  if (av.rank() == 2 && bv.rank() == 2) {
    m = av.rows();
    k = av.cols();
    n = bv.cols();
    if (bv.rows() != k) {
      throw ShapeError("matmul: operand shapes " + av.shape_string() + " and " +
                       bv.shape_string() + " are incompatible");
    }
    out_shape = {m, n};
  } else if (av.rank() == 1 && bv.rank() == 2) {
    m = 1;
    k = av.dim();
    n = bv.cols();
    if (bv.rows() != k) {
      throw ShapeError("matmul: operand shapes " + av.shape_string() + " and " +
                       bv.shape_string() + " are incompatible");
    }
    out_shape = {n};
  } else if (av.rank() == 2 && bv.rank() == 1) {
    m = av.rows();
    k = av.cols();
    n = 1;
    if (bv.dim() != k) {
      throw ShapeError("matmul: operand shapes " + av.shape_string() + " and " +
                       bv.shape_string() + " are incompatible");
    }
    out_shape = {m};
  } else {
    throw ShapeError("matmul: unsupported operand ranks " + av.shape_string() + " and " +
                     bv.shape_string());
  }
  Tensor out(out_shape);
  kn::matmul_nn_acc(av.data(), bv.data(), out.data(), m, k, n);
  return make_op(std::move(out), {a, b}, [m, k, n](Node& self) {
    const double* g = self.grad.data();
    Node& pa = *self.parents[0];
    Node& pb = *self.parents[1];
    if (pa.requires_grad) {
      // dA (m x k) += G (m x n) . B^T
      kn::matmul_nt_acc(g, pb.value.data(), pa.ensure_grad().data(), m, k, n);
    }
    if (pb.requires_grad) {
      // dB (k x n) += A^T . G with A stored (m x k)
      kn::matmul_tn_acc(pa.value.data(), g, pb.ensure_grad().data(), m, k, n);
    }
  });
}

Var dot(const Var& a, const Var& b) {
  if (a->value.rank() != 1 || b->value.rank() != 1 || a->value.dim() != b->value.dim()) {
    throw ShapeError("dot: operand shapes " + a->value.shape_string() + " and " +
                     b->value.shape_string() + " must be equal rank-1");
  }
  Tensor out = Tensor::scalar(kn::dot(a->value.data(), b->value.data(), a->value.dim()));
  return make_op(std::move(out), {a, b}, [](Node& self) {
    double g = self.grad.data()[0];
    Node& pa = *self.parents[0];
    Node& pb = *self.parents[1];
    if (pa.requires_grad) {
      kn::axpy(g, pb.value.data(), pa.ensure_grad().data(), pb.value.numel());
    }
    if (pb.requires_grad) {
      kn::axpy(g, pa.value.data(), pb.ensure_grad().data(), pa.value.numel());
    }
  });
}

Var smul(const Var& s, const Var& v) {
  if (s->value.numel() != 1) {
    throw ShapeError("smul: first operand must be scalar, got " + s->value.shape_string());
  }
  Tensor out(v->value.shape());
  kn::scale(v->value.data(), s->value.data()[0], out.data(), out.numel());
  return make_op(std::move(out), {s, v}, [](Node& self) {
    Node& ps = *self.parents[0];
    Node& pv = *self.parents[1];
    if (ps.requires_grad) {
      ps.ensure_grad().data()[0] +=
          kn::dot(self.grad.data(), pv.value.data(), self.grad.numel());
    }
    if (pv.requires_grad) {
      kn::axpy(ps.value.data()[0], self.grad.data(), pv.ensure_grad().data(), self.grad.numel());
    }
  });
}

Var affine(const Var& x, const Var& w, const Var& b) {
  const Tensor& xv = x->value;
  const Tensor& wv = w->value;
  const Tensor& bv = b->value;
  if (wv.rank() != 2 || bv.rank() != 1 || bv.dim() != wv.cols()) {
    throw ShapeError("affine: weight " + wv.shape_string() + " and bias " + bv.shape_string() +
                     " are incompatible");
  }
  const std::size_t k = wv.rows();
  const std::size_t n = wv.cols();
  std::size_t m;
  std::vector<std::size_t> out_shape;
  if (xv.rank() == 1) {
    if (xv.dim() != k) {
      throw ShapeError("affine: input " + xv.shape_string() + " does not match weight " +
                       wv.shape_string());
    }
    m = 1;
    out_shape = {n};
  } else if (xv.rank() == 2) {
    if (xv.cols() != k) {
      throw ShapeError("affine: input " + xv.shape_string() + " does not match weight " +
                       wv.shape_string());
    }
    m = xv.rows();
    out_shape = {m, n};
  } else {
    throw ShapeError("affine: unsupported input rank " + xv.shape_string());
  }
  Tensor out(out_shape);
  for (std::size_t i = 0; i < m; ++i) {
    kn::axpy(1.0, bv.data(), out.data() + i * n, n);
  }
  kn::matmul_nn_acc(xv.data(), wv.data(), out.data(), m, k, n);
  return make_op(std::move(out), {x, w, b}, [m, k, n](Node& self) {
    const double* g = self.grad.data();
    Node& px = *self.parents[0];
    Node& pw = *self.parents[1];
    Node& pb = *self.parents[2];
    if (px.requires_grad) {
      kn::matmul_nt_acc(g, pw.value.data(), px.ensure_grad().data(), m, k, n);
    }
    if (pw.requires_grad) {
      kn::matmul_tn_acc(px.value.data(), g, pw.ensure_grad().data(), m, k, n);
    }
    if (pb.requires_grad) {
      double* db = pb.ensure_grad().data();
      for (std::size_t i = 0; i < m; ++i) kn::axpy(1.0, g + i * n, db, n);
    }
  });
}

namespace {

// Stable softmax of one strided slice; writes y, returns nothing.
void softmax_slice(const double* x, double* y, std::size_t n, std::size_t stride) {
  double peak = x[0];
  for (std::size_t i = 1; i < n; ++i) peak = std::max(peak, x[i * stride]);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double e = std::exp(x[i * stride] - peak);
    y[i * stride] = e;
    total += e;
  }
  for (std::size_t i = 0; i < n; ++i) y[i * stride] /= total;
}

void softmax_slice_backward(const double* y, const double* g, double* dx, std::size_t n,
                            std::size_t stride) {
  double inner = 0.0;
  for (std::size_t i = 0; i < n; ++i) inner += g[i * stride] * y[i * stride];
  for (std::size_t i = 0; i < n; ++i) {
    dx[i * stride] += y[i * stride] * (g[i * stride] - inner);
  }
}

}  // namespace

Var softmax(const Var& a, int axis) {
  const Tensor& av = a->value;
  if (av.numel() == 0) throw ShapeError("softmax over an empty tensor");
  Tensor out(av.shape());
  std::size_t slices, len, slice_stride, elem_stride;
  if (av.rank() == 1) {
    if (axis != 0) throw ShapeError("softmax: axis " + std::to_string(axis) + " invalid for rank-1");
    slices = 1;
    len = av.dim();
    slice_stride = 0;
    elem_stride = 1;
  } else if (av.rank() == 2 && axis == 1) {
    slices = av.rows();
    len = av.cols();
    slice_stride = av.cols();
    elem_stride = 1;
  } else if (av.rank() == 2 && axis == 0) {
    slices = av.cols();
    len = av.rows();
    slice_stride = 1;
    elem_stride = av.cols();
  } else {
    throw ShapeError("softmax: axis " + std::to_string(axis) + " invalid for shape " +
                     av.shape_string());
  }
  if (len == 0) throw ShapeError("softmax over empty axis");
  for (std::size_t s = 0; s < slices; ++s) {
    softmax_slice(av.data() + s * slice_stride, out.data() + s * slice_stride, len, elem_stride);
  }
  return make_op(std::move(out), {a},
                 [slices, len, slice_stride, elem_stride](Node& self) {
                   if (!self.parents[0]->requires_grad) return;
                   double* dx = self.parents[0]->ensure_grad().data();
                   for (std::size_t s = 0; s < slices; ++s) {
                     softmax_slice_backward(self.value.data() + s * slice_stride,
                                            self.grad.data() + s * slice_stride,
                                            dx + s * slice_stride, len, elem_stride);
                   }
                 });
}

Var masked_softmax(const Var& a, std::vector<std::uint8_t> mask) {
  const Tensor& av = a->value;
  if (av.rank() != 1) {
    throw ShapeError("masked_softmax: expected rank-1 logits, got " + av.shape_string());
  }
  if (mask.size() != av.dim()) {
    throw ShapeError("masked_softmax: mask size " + std::to_string(mask.size()) +
                     " does not match logits " + av.shape_string());
  }
  bool any = false;
  for (auto m : mask) any = any || m != 0;
  if (!any) throw ShapeError("masked_softmax: empty mask");

  Tensor out(av.shape());
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < av.dim(); ++i) {
    if (mask[i]) peak = std::max(peak, av.data()[i]);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < av.dim(); ++i) {
    if (mask[i]) {
      out.data()[i] = std::exp(av.data()[i] - peak);
      total += out.data()[i];
    } else {
      out.data()[i] = 0.0;
    }
  }
  for (std::size_t i = 0; i < av.dim(); ++i) {
    if (mask[i]) out.data()[i] /= total;
  }
  return make_op(std::move(out), {a}, [mask = std::move(mask)](Node& self) {
    if (!self.parents[0]->requires_grad) return;
    double* dx = self.parents[0]->ensure_grad().data();
    const double* y = self.value.data();
    const double* g = self.grad.data();
    double inner = 0.0;
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (mask[i]) inner += g[i] * y[i];
    }
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (mask[i]) dx[i] += y[i] * (g[i] - inner);
    }
  });
}

Var conv1d(const Var& x, const Var& w, const Var& b, std::size_t width) {
  const Tensor& xv = x->value;
  const Tensor& wv = w->value;
  const Tensor& bv = b->value;
  if (xv.rank() != 2) throw ShapeError("conv1d: input must be (time x channels), got " +
                                       xv.shape_string());
  if (width == 0) throw ShapeError("conv1d: width must be positive");
  const std::size_t t_len = xv.rows();
  const std::size_t c_in = xv.cols();
  if (wv.rank() != 2 || wv.rows() != width * c_in) {
    throw ShapeError("conv1d: weight " + wv.shape_string() + " does not match width " +
                     std::to_string(width) + " x in-channels " + std::to_string(c_in));
  }
  const std::size_t c_out = wv.cols();
  if (bv.rank() != 1 || bv.dim() != c_out) {
    throw ShapeError("conv1d: bias " + bv.shape_string() + " does not match out-channels " +
                     std::to_string(c_out));
  }
  const std::ptrdiff_t left = static_cast<std::ptrdiff_t>((width - 1) / 2);

  Tensor out({t_len, c_out});
  for (std::size_t t = 0; t < t_len; ++t) kn::axpy(1.0, bv.data(), out.row_ptr(t), c_out);
  for (std::size_t tap = 0; tap < width; ++tap) {
    const std::ptrdiff_t shift = static_cast<std::ptrdiff_t>(tap) - left;
    const std::size_t lo = shift < 0 ? static_cast<std::size_t>(-shift) : 0;
    const std::size_t hi =
        shift > 0 ? t_len - std::min<std::size_t>(t_len, static_cast<std::size_t>(shift)) : t_len;
    if (lo >= hi) continue;
    // out[lo..hi) += x[lo+shift .. hi+shift) . W_tap
    kn::matmul_nn_acc(xv.row_ptr(lo + shift), wv.data() + tap * c_in * c_out, out.data() + lo * c_out,
                      hi - lo, c_in, c_out);
  }
  return make_op(std::move(out), {x, w, b}, [width, t_len, c_in, c_out, left](Node& self) {
    const Tensor& g = self.grad;
    Node& px = *self.parents[0];
    Node& pw = *self.parents[1];
    Node& pb = *self.parents[2];
    if (pb.requires_grad) {
      double* db = pb.ensure_grad().data();
      for (std::size_t t = 0; t < t_len; ++t) kn::axpy(1.0, g.data() + t * c_out, db, c_out);
    }
    for (std::size_t tap = 0; tap < width; ++tap) {
      const std::ptrdiff_t shift = static_cast<std::ptrdiff_t>(tap) - left;
      const std::size_t lo = shift < 0 ? static_cast<std::size_t>(-shift) : 0;
      const std::size_t hi =
          shift > 0 ? t_len - std::min<std::size_t>(t_len, static_cast<std::size_t>(shift))
                    : t_len;
      if (lo >= hi) continue;
      const std::size_t rows = hi - lo;
      const double* w_tap = pw.value.data() + tap * c_in * c_out;
      if (px.requires_grad) {
        // dX[lo+shift ..) += G[lo..) . W_tap^T
        kn::matmul_nt_acc(g.data() + lo * c_out, w_tap,
                          px.ensure_grad().data() + (lo + shift) * c_in, rows, c_in, c_out);
      }
      if (pw.requires_grad) {
        // dW_tap += X[lo+shift ..)^T . G[lo..)
        kn::matmul_tn_acc(px.value.data() + (lo + shift) * c_in, g.data() + lo * c_out,
                          pw.ensure_grad().data() + tap * c_in * c_out, rows, c_in, c_out);
      }
    }
  });
}

Var maxpool_time(const Var& x) {
  const Tensor& xv = x->value;
  if (xv.rank() != 2 || xv.rows() == 0) {
    throw ShapeError("maxpool_over_time: input must be non-empty (time x channels), got " +
                     xv.shape_string());
  }
  const std::size_t t_len = xv.rows();
  const std::size_t c = xv.cols();
  Tensor out({c});
  std::vector<std::size_t> arg(c, 0);
  for (std::size_t j = 0; j < c; ++j) {
    double best = xv.at(0, j);
    for (std::size_t t = 1; t < t_len; ++t) {
      if (xv.at(t, j) > best) {
        best = xv.at(t, j);
        arg[j] = t;
      }
    }
    out.at(j) = best;
  }
  return make_op(std::move(out), {x}, [arg = std::move(arg), c](Node& self) {
    if (!self.parents[0]->requires_grad) return;
    Tensor& dx = self.parents[0]->ensure_grad();
    for (std::size_t j = 0; j < c; ++j) {
      dx.at(arg[j], j) += self.grad.at(j);
    }
  });
}

Var concat(const std::vector<Var>& parts, int axis) {
  if (parts.empty()) throw ShapeError("concat: no operands");
  if (axis == 0) {
    std::size_t total = 0;
    for (const auto& p : parts) {
      if (p->value.rank() != 1) {
        throw ShapeError("concat axis 0: expected rank-1 operands, got " +
                         p->value.shape_string());
      }
      total += p->value.dim();
    }
    Tensor out({total});
    std::size_t offset = 0;
    std::vector<std::size_t> offsets;
    for (const auto& p : parts) {
      offsets.push_back(offset);
      std::copy(p->value.data(), p->value.data() + p->value.dim(), out.data() + offset);
      offset += p->value.dim();
    }
    return make_op(std::move(out), parts, [offsets = std::move(offsets)](Node& self) {
      for (std::size_t i = 0; i < self.parents.size(); ++i) {
        Node& p = *self.parents[i];
        if (!p.requires_grad) continue;
        kernels::axpy(1.0, self.grad.data() + offsets[i], p.ensure_grad().data(),
                      p.value.numel());
      }
    });
  }
  if (axis == 1) {
    const std::size_t rows = parts.front()->value.rows();
    std::size_t total_cols = 0;
    for (const auto& p : parts) {
      if (p->value.rank() != 2 || p->value.rows() != rows) {
        throw ShapeError("concat axis 1: operand " + p->value.shape_string() +
                         " does not share the row count " + std::to_string(rows));
      }
      total_cols += p->value.cols();
    }
    Tensor out({rows, total_cols});
    std::vector<std::size_t> col_off;
    std::size_t offset = 0;
    for (const auto& p : parts) {
      col_off.push_back(offset);
      for (std::size_t r = 0; r < rows; ++r) {
        std::copy(p->value.row_ptr(r), p->value.row_ptr(r) + p->value.cols(),
                  out.row_ptr(r) + offset);
      }
      offset += p->value.cols();
    }
    return make_op(std::move(out), parts,
                   [col_off = std::move(col_off), rows, total_cols](Node& self) {
                     for (std::size_t i = 0; i < self.parents.size(); ++i) {
                       Node& p = *self.parents[i];
                       if (!p.requires_grad) continue;
                       Tensor& dx = p.ensure_grad();
                       const std::size_t c = p.value.cols();
                       for (std::size_t r = 0; r < rows; ++r) {
                         kernels::axpy(1.0, self.grad.data() + r * total_cols + col_off[i],
                                       dx.row_ptr(r), c);
                       }
                     }
                   });
  }
  throw ShapeError("concat: unsupported axis " + std::to_string(axis));
}

Var stack_rows(const std::vector<Var>& rows) {
  if (rows.empty()) throw ShapeError("stack_rows: no operands");
  const std::size_t d = rows.front()->value.dim();
  for (const auto& r : rows) {
    if (r->value.rank() != 1 || r->value.dim() != d) {
      throw ShapeError("stack_rows: operand " + r->value.shape_string() +
                       " does not match dim " + std::to_string(d));
    }
  }
  Tensor out({rows.size(), d});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::copy(rows[i]->value.data(), rows[i]->value.data() + d, out.row_ptr(i));
  }
  return make_op(std::move(out), rows, [d](Node& self) {
    for (std::size_t i = 0; i < self.parents.size(); ++i) {
      Node& p = *self.parents[i];
      if (!p.requires_grad) continue;
      kernels::axpy(1.0, self.grad.data() + i * d, p.ensure_grad().data(), d);
    }
  });
}

Var row(const Var& x, std::size_t i) {
  const Tensor& xv = x->value;
  if (xv.rank() != 2 || i >= xv.rows()) {
    throw ShapeError("row: index " + std::to_string(i) + " out of range for " +
                     xv.shape_string());
  }
  Tensor out({xv.cols()});
  std::copy(xv.row_ptr(i), xv.row_ptr(i) + xv.cols(), out.data());
  return make_op(std::move(out), {x}, [i](Node& self) {
    Node& p = *self.parents[0];
    if (!p.requires_grad) return;
    kernels::axpy(1.0, self.grad.data(), p.ensure_grad().row_ptr(i), self.grad.numel());
  });
}

Var embedding_lookup(const Var& table, const std::vector<std::size_t>& indices) {
  const Tensor& tv = table->value;
  if (tv.rank() != 2) {
    throw ShapeError("embedding_lookup: table must be rank-2, got " + tv.shape_string());
  }
  if (indices.empty()) throw ShapeError("embedding_lookup: empty index list");
  const std::size_t d = tv.cols();
  for (std::size_t idx : indices) {
    if (idx >= tv.rows()) {
      throw ShapeError("embedding_lookup: index " + std::to_string(idx) +
                       " out of range for table " + tv.shape_string());
    }
  }
  Tensor out({indices.size(), d});
  for (std::size_t t = 0; t < indices.size(); ++t) {
    std::copy(tv.row_ptr(indices[t]), tv.row_ptr(indices[t]) + d, out.row_ptr(t));
  }
  return make_op(std::move(out), {table}, [indices, d](Node& self) {
    Node& p = *self.parents[0];
    if (!p.requires_grad) return;
    Tensor& dt = p.ensure_grad();
    for (std::size_t t = 0; t < indices.size(); ++t) {
      kernels::axpy(1.0, self.grad.data() + t * d, dt.row_ptr(indices[t]), d);
    }
  });
}

Var sum(const Var& a) {
  double total = 0.0;
  for (std::size_t i = 0; i < a->value.numel(); ++i) total += a->value.data()[i];
  return make_op(Tensor::scalar(total), {a}, [](Node& self) {
    Node& p = *self.parents[0];
    if (!p.requires_grad) return;
    double g = self.grad.data()[0];
    double* dx = p.ensure_grad().data();
    for (std::size_t i = 0; i < p.value.numel(); ++i) dx[i] += g;
  });
}

Var mean(const Var& a) {
  if (a->value.numel() == 0) throw ShapeError("mean of an empty tensor");
  double total = 0.0;
  for (std::size_t i = 0; i < a->value.numel(); ++i) total += a->value.data()[i];
  const double inv = 1.0 / static_cast<double>(a->value.numel());
  return make_op(Tensor::scalar(total * inv), {a}, [inv](Node& self) {
    Node& p = *self.parents[0];
    if (!p.requires_grad) return;
    double g = self.grad.data()[0] * inv;
    double* dx = p.ensure_grad().data();
    for (std::size_t i = 0; i < p.value.numel(); ++i) dx[i] += g;
  });
}

Var cross_entropy(const Var& pred, const Tensor& gold,
                  std::atomic<std::uint64_t>* clamp_counter) {
  if (!pred->value.same_shape(gold)) {
    throw ShapeError("cross_entropy: prediction " + pred->value.shape_string() +
                     " and target " + gold.shape_string() + " differ");
  }
  double loss = 0.0;
  for (std::size_t i = 0; i < gold.numel(); ++i) {
    double g = gold.data()[i];
    if (g <= 0.0) continue;
    double p = pred->value.data()[i];
    if (p < kLogClamp) {
      p = kLogClamp;
      if (clamp_counter) clamp_counter->fetch_add(1, std::memory_order_relaxed);
    }
    loss -= g * std::log(p);
  }
  return make_op(Tensor::scalar(loss), {pred}, [gold](Node& self) {
    Node& p = *self.parents[0];
    if (!p.requires_grad) return;
    double g0 = self.grad.data()[0];
    double* dp = p.ensure_grad().data();
    for (std::size_t i = 0; i < gold.numel(); ++i) {
      double g = gold.data()[i];
      if (g <= 0.0) continue;
      double pv = std::max(p.value.data()[i], kLogClamp);
      dp[i] -= g0 * g / pv;
    }
  });
}

}  // namespace nb::tk
