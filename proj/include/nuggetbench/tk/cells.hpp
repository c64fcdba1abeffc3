#pragma once

#include <string>
#include <utility>

#include "nuggetbench/core/rng.hpp"
#include "nuggetbench/tk/ops.hpp"

namespace nb::tk {

// Gate conventions are pinned here:
//   z = sig(x.Wz + h.Uz + bz)
//   r = sig(x.Wr + h.Ur + br)
//   hcand = tanh(x.Wh + (r*h).Uh + bh)
//   h' = (1-z)*h + z*hcand
struct GruParams {
  Var wz, uz, bz;
  Var wr, ur, br;
  Var wh, uh, bh;

  static GruParams init(std::size_t in_dim, std::size_t hidden, Rng& rng,
                        const std::string& prefix);
  std::vector<Var> parameters() const;
  std::size_t hidden() const { return bz->value.dim(); }
};

Var gru_cell(const Var& x, const Var& h_prev, const GruParams& p);

// f,i,o = sig(x.W* + h.U* + b*), g = tanh(x.Wg + h.Ug + bg),
// c' = f*c + i*g, h' = o*tanh(c').
struct LstmParams {
  Var wf, uf, bf;
  Var wi, ui, bi;
  Var wo, uo, bo;
  Var wg, ug, bg;

  static LstmParams init(std::size_t in_dim, std::size_t hidden, Rng& rng,
                         const std::string& prefix);
  std::vector<Var> parameters() const;
  std::size_t hidden() const { return bf->value.dim(); }
};

struct LstmState {
  Var h;
  Var c;
};

LstmState lstm_cell(const Var& x, const LstmState& prev, const LstmParams& p);

}  // namespace nb::tk
