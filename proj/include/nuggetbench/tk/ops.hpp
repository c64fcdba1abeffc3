#pragma once

#include <atomic>
#include <cstdint>
#include <vector>

#include "nuggetbench/tk/graph.hpp"

namespace nb::tk {

Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);  // elementwise
Var scale(const Var& a, double s);
Var one_minus(const Var& a);  // 1 - a

Var sigmoid(const Var& a);
Var tanh(const Var& a);

// (m x k)(k x n) -> (m x n); a rank-1 operand contracts as a row or column
// vector and the result drops that axis.
Var matmul(const Var& a, const Var& b);
Var dot(const Var& a, const Var& b);         // rank-1 . rank-1 -> scalar
Var smul(const Var& s, const Var& v);        // scalar node times tensor
Var affine(const Var& x, const Var& w, const Var& b);  // x.w + b (b broadcast over rows)

// axis 0 over a rank-1 tensor; axis 0 (columns) or 1 (rows) over rank-2.
Var softmax(const Var& a, int axis = 0);
// Rank-1 softmax restricted to mask!=0 entries; masked-out outputs are
// exactly 0 (logits treated as -inf).
Var masked_softmax(const Var& a, std::vector<std::uint8_t> mask);

// x (T x Cin), w ((width*Cin) x Cout), b (Cout); "same" zero padding with
// left pad (width-1)/2, so the output keeps T rows.
Var conv1d(const Var& x, const Var& w, const Var& b, std::size_t width);

// (T x C) -> (C); max over time, first index wins ties.
Var maxpool_time(const Var& x);

// rank-1 concat along axis 0, or rank-2 concat along axis 1 (channels).
Var concat(const std::vector<Var>& parts, int axis = 0);
// k rank-1 tensors of dim d -> (k x d).
Var stack_rows(const std::vector<Var>& rows);
// Row i of a rank-2 tensor as a rank-1 view copy.
Var row(const Var& x, std::size_t i);

// table (V x d), one output row per index.
Var embedding_lookup(const Var& table, const std::vector<std::size_t>& indices);

Var sum(const Var& a);
Var mean(const Var& a);

// Soft-target cross-entropy -sum_c gold_c * log(pred_c) with pred clamped
// at 1e-12 where gold has mass; each clamp increments *clamp_counter.
Var cross_entropy(const Var& pred, const Tensor& gold,
                  std::atomic<std::uint64_t>* clamp_counter = nullptr);

}  // namespace nb::tk
