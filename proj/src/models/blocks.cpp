#include "nuggetbench/models/blocks.hpp"

#include "nuggetbench/tk/init.hpp"

namespace nb::models {

using namespace nb::tk;

GatedConv GatedConv::init(std::size_t width, std::size_t in_ch, std::size_t out_ch, bool gated,
                          Rng& rng, const std::string& prefix) {
  GatedConv c;
  c.gated = gated;
  c.wa = make_parameter(prefix + ".conv_a.w", glorot_uniform({width * in_ch, out_ch}, rng));
  c.ba = make_parameter(prefix + ".conv_a.b", Tensor({out_ch}));
  if (gated) {
    c.wb = make_parameter(prefix + ".conv_b.w", glorot_uniform({width * in_ch, out_ch}, rng));
    c.bb = make_parameter(prefix + ".conv_b.b", Tensor({out_ch}));
  }
  return c;
}

Var GatedConv::apply(const Var& x, std::size_t width) const {
  Var a = conv1d(x, wa, ba, width);
  if (gated) {
    return mul(a, sigmoid(conv1d(x, wb, bb, width)));
  }
  return tk::tanh(a);
}

void GatedConv::collect(std::vector<Var>& out) const {
  out.push_back(wa);
  out.push_back(ba);
  if (gated) {
    out.push_back(wb);
    out.push_back(bb);
  }
}

BiGru BiGru::init(std::size_t in_dim, std::size_t hidden, Rng& rng, const std::string& prefix) {
  BiGru b;
  b.fwd = GruParams::init(in_dim, hidden, rng, prefix + ".fwd");
  b.bwd = GruParams::init(in_dim, hidden, rng, prefix + ".bwd");
  return b;
}

std::vector<Var> BiGru::apply(const std::vector<Var>& seq) const {
  const std::size_t k = seq.size();
  const std::size_t hidden = fwd.hidden();
  std::vector<Var> forward(k), backward(k);
  Var h = constant(Tensor({hidden}));
  for (std::size_t i = 0; i < k; ++i) {
    h = gru_cell(seq[i], h, fwd);
    forward[i] = h;
  }
  h = constant(Tensor({hidden}));
  for (std::size_t i = k; i-- > 0;) {
    h = gru_cell(seq[i], h, bwd);
    backward[i] = h;
  }
  std::vector<Var> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = tk::tanh(add(forward[i], backward[i]));
  return out;
}

void BiGru::collect(std::vector<Var>& out) const {
  for (const auto& p : fwd.parameters()) out.push_back(p);
  for (const auto& p : bwd.parameters()) out.push_back(p);
}

MemoryLayer MemoryLayer::init(std::size_t dim, Rng& rng, const std::string& prefix) {
  MemoryLayer m;
  m.input_memory = BiGru::init(dim, dim, rng, prefix + ".in");
  m.output_memory = BiGru::init(dim, dim, rng, prefix + ".out");
  return m;
}

std::vector<Var> MemoryLayer::apply(const std::vector<Var>& cl) const {
  std::vector<Var> keys = input_memory.apply(cl);
  std::vector<Var> values = output_memory.apply(cl);
  Var key_mat = stack_rows(keys);
  Var value_mat = stack_rows(values);
  std::vector<Var> out(cl.size());
  for (std::size_t i = 0; i < cl.size(); ++i) {
    Var scores = matmul(key_mat, cl[i]);
    Var weights = softmax(scores);
    Var attended = matmul(weights, value_mat);
    out[i] = add(attended, cl[i]);
  }
  return out;
}

void MemoryLayer::collect(std::vector<Var>& out) const {
  input_memory.collect(out);
  output_memory.collect(out);
}

Var speaker_onehot(Speaker s) {
  Tensor t({2});
  t.data()[s == Speaker::Customer ? 0 : 1] = 1.0;
  return constant(std::move(t));
}

std::vector<std::uint8_t> role_mask(Speaker s) {
  std::vector<std::uint8_t> mask(kNuggetCount, 0);
  for (std::size_t i = 0; i < kNuggetCount; ++i) {
    mask[i] = nugget_valid_for(i, s) ? 1 : 0;
  }
  return mask;
}

}  // namespace nb::models
