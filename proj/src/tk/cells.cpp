#include "nuggetbench/tk/cells.hpp"

#include "nuggetbench/tk/init.hpp"

namespace nb::tk {

namespace {

Var gate_pre(const Var& x, const Var& w, const Var& h, const Var& u, const Var& b) {
  return add(affine(x, w, b), matmul(h, u));
}

}  // namespace

GruParams GruParams::init(std::size_t in_dim, std::size_t hidden, Rng& rng,
                          const std::string& prefix) {
  GruParams p;
  auto weight = [&](const char* name, std::size_t r, std::size_t c) {
    return make_parameter(prefix + "." + name, glorot_uniform({r, c}, rng));
  };
  auto bias = [&](const char* name) {
    return make_parameter(prefix + "." + name, Tensor({hidden}));
  };
  p.wz = weight("wz", in_dim, hidden);
  p.uz = weight("uz", hidden, hidden);
  p.bz = bias("bz");
  p.wr = weight("wr", in_dim, hidden);
  p.ur = weight("ur", hidden, hidden);
  p.br = bias("br");
  p.wh = weight("wh", in_dim, hidden);
  p.uh = weight("uh", hidden, hidden);
  p.bh = bias("bh");
  return p;
}

std::vector<Var> GruParams::parameters() const {
  return {wz, uz, bz, wr, ur, br, wh, uh, bh};
}

Var gru_cell(const Var& x, const Var& h_prev, const GruParams& p) {
  Var z = sigmoid(gate_pre(x, p.wz, h_prev, p.uz, p.bz));
  Var r = sigmoid(gate_pre(x, p.wr, h_prev, p.ur, p.br));
  Var hcand = tanh(add(affine(x, p.wh, p.bh), matmul(mul(r, h_prev), p.uh)));
  return add(mul(one_minus(z), h_prev), mul(z, hcand));
}

LstmParams LstmParams::init(std::size_t in_dim, std::size_t hidden, Rng& rng,
                            const std::string& prefix) {
  LstmParams p;
  auto weight = [&](const char* name, std::size_t r, std::size_t c) {
    return make_parameter(prefix + "." + name, glorot_uniform({r, c}, rng));
  };
  auto bias = [&](const char* name) {
    return make_parameter(prefix + "." + name, Tensor({hidden}));
  };
  p.wf = weight("wf", in_dim, hidden);
  p.uf = weight("uf", hidden, hidden);
  p.bf = bias("bf");
  p.wi = weight("wi", in_dim, hidden);
  p.ui = weight("ui", hidden, hidden);
  p.bi = bias("bi");
  p.wo = weight("wo", in_dim, hidden);
  p.uo = weight("uo", hidden, hidden);
  p.bo = bias("bo");
  p.wg = weight("wg", in_dim, hidden);
  p.ug = weight("ug", hidden, hidden);
  p.bg = bias("bg");
  return p;
}

std::vector<Var> LstmParams::parameters() const {
  return {wf, uf, bf, wi, ui, bi, wo, uo, bo, wg, ug, bg};
}

LstmState lstm_cell(const Var& x, const LstmState& prev, const LstmParams& p) {
  Var f = sigmoid(gate_pre(x, p.wf, prev.h, p.uf, p.bf));
  Var i = sigmoid(gate_pre(x, p.wi, prev.h, p.ui, p.bi));
  Var o = sigmoid(gate_pre(x, p.wo, prev.h, p.uo, p.bo));
  Var g = tanh(gate_pre(x, p.wg, prev.h, p.ug, p.bg));
  Var c = add(mul(f, prev.c), mul(i, g));
  Var h = mul(o, tanh(c));
  return {h, c};
}

}  // namespace nb::tk
