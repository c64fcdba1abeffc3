#include "nuggetbench/tk/gradcheck.hpp"

#include <cmath>

namespace nb::tk {

std::string GradCheckReport::summary() const {
  return (pass ? std::string("pass") : std::string("FAIL")) + " (" + std::to_string(checked) +
         " entries, max rel err " + std::to_string(max_rel_err) +
         (worst.empty() ? "" : ", worst at " + worst) + ")";
}

GradCheckReport check_gradients(const std::function<Var()>& build_loss,
                                const std::vector<Var>& params,
                                const GradCheckOptions& options) {
  for (const auto& p : params) p->zero_grad();
  Var loss = build_loss();
  backward(loss);

  // Snapshot analytic gradients before the probes rebuild the graph.
  std::vector<Tensor> analytic;
  analytic.reserve(params.size());
  for (const auto& p : params) {
    analytic.push_back(p->grad.numel() ? p->grad : Tensor(p->value.shape()));
  }

  GradCheckReport report;
  NoGradGuard eval_only;
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    Node& p = *params[pi];
    for (std::size_t j = 0; j < p.value.numel(); ++j) {
      const double saved = p.value.data()[j];
      p.value.data()[j] = saved + options.eps;
      double up = build_loss()->value.data()[0];
      p.value.data()[j] = saved - options.eps;
      double down = build_loss()->value.data()[0];
      p.value.data()[j] = saved;
      const double fd = (up - down) / (2.0 * options.eps);
      const double a = analytic[pi].data()[j];
      const double err = std::abs(a - fd);
      const double bound = options.rel_tol * std::max(std::abs(a), std::abs(fd)) +
                           options.abs_slack;
      const double rel = err / std::max({std::abs(a), std::abs(fd), 1.0});
      ++report.checked;
      if (rel > report.max_rel_err) {
        report.max_rel_err = rel;
        report.worst = p.name + "[" + std::to_string(j) + "]";
      }
      if (err > bound) report.pass = false;
    }
  }
  for (const auto& p : params) p->zero_grad();
  return report;
}

}  // namespace nb::tk
