#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nuggetbench/tk/graph.hpp"

namespace nb::tk {

struct GradCheckOptions {
  double eps = 1e-4;        // central-difference half-step
  double rel_tol = 1e-3;    // |analytic - fd| <= rel_tol * max(|a|,|fd|) + abs_slack
  double abs_slack = 1e-7;  // absorbs fd truncation noise near zero
};

struct GradCheckReport {
  bool pass = true;
  double max_rel_err = 0.0;
  std::string worst;  // "param[index]" of the worst entry
  std::size_t checked = 0;

  std::string summary() const;
};

// Compares every entry of every parameter's analytic gradient against
// central finite differences of the rebuilt loss. `build_loss` must
// construct a fresh graph over the same parameter nodes on each call.
GradCheckReport check_gradients(const std::function<Var()>& build_loss,
                                const std::vector<Var>& params,
                                const GradCheckOptions& options = {});

}  // namespace nb::tk
