#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "nuggetbench/tk/tensor.hpp"

namespace nb::tk {

// One vertex of the reverse-mode graph. Children hold their parents, so the
// graph is acyclic by construction and freed when handles go out of scope.
struct Node {
  Tensor value;
  Tensor grad;  // empty until first needed; zero-initialized on allocation
  bool requires_grad = false;
  std::string name;  // parameters only
  std::vector<std::shared_ptr<Node>> parents;
  // Reads this node's grad, accumulates into the parents' grads.
  std::function<void(Node&)> backprop;

  Tensor& ensure_grad() {
    if (grad.numel() == 0) grad = Tensor(value.shape());
    return grad;
  }
  void zero_grad() {
    if (grad.numel() != 0) grad.fill(0.0);
  }
};

using Var = std::shared_ptr<Node>;

Var constant(Tensor value);
Var make_parameter(std::string name, Tensor value);

// Evaluation-only regions skip backprop bookkeeping on new nodes.
bool grad_enabled();
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool prev_;
};

// Internal op constructor: value plus a backward rule over the parents.
// Drops the rule (and the parent edges) when no parent needs gradients.
Var make_op(Tensor value, std::vector<Var> parents, std::function<void(Node&)> backprop);

// Accumulates d(loss)/d(node) into every reachable node with
// requires_grad, traversing in reverse topological order. Repeated calls
// without zeroing accumulate additively. The loss must be scalar.
void backward(const Var& loss);

}  // namespace nb::tk
