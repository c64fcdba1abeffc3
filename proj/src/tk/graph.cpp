#include "nuggetbench/tk/graph.hpp"

#include <unordered_set>

namespace nb::tk {

namespace {
thread_local bool g_grad_enabled = true;
}

bool grad_enabled() { return g_grad_enabled; }

NoGradGuard::NoGradGuard() : prev_(g_grad_enabled) { g_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { g_grad_enabled = prev_; }

Var constant(Tensor value) {
  auto n = std::make_shared<Node>();
  n->value = std::move(value);
  return n;
}

Var make_parameter(std::string name, Tensor value) {
  auto n = std::make_shared<Node>();
  n->value = std::move(value);
  n->name = std::move(name);
  n->requires_grad = true;
  return n;
}

Var make_op(Tensor value, std::vector<Var> parents, std::function<void(Node&)> backprop) {
  auto n = std::make_shared<Node>();
  n->value = std::move(value);
  bool need = false;
  if (g_grad_enabled) {
    for (const auto& p : parents) {
      if (p->requires_grad) {
        need = true;
        break;
      }
    }
  }
  if (need) {
    n->requires_grad = true;
    n->parents = std::move(parents);
    n->backprop = std::move(backprop);
  }
  return n;
}

void backward(const Var& loss) {
  if (!loss) throw NumericError("backward: null loss node");
  if (loss->value.numel() != 1) {
    throw NumericError("backward requires a scalar loss, got shape " +
                       loss->value.shape_string());
  }
  // Iterative post-order DFS over parent edges; creation order is not
  // tracked, so the traversal builds the topological order directly.
  struct Frame {
    Node* node;
    std::size_t next_parent;
  };
  std::vector<Node*> order;
  std::unordered_set<Node*> visited;
  std::vector<Frame> stack;
  stack.push_back({loss.get(), 0});
  visited.insert(loss.get());
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next_parent < f.node->parents.size()) {
      Node* parent = f.node->parents[f.next_parent++].get();
      if (parent->requires_grad && !visited.count(parent)) {
        visited.insert(parent);
        stack.push_back({parent, 0});
      }
    } else {
      order.push_back(f.node);
      stack.pop_back();
    }
  }
  // Op-node gradients are per-pass scratch and start from zero each time;
  // leaves (parameters) accumulate across passes until zeroed explicitly.
  for (Node* n : order) {
    if (n->backprop) n->zero_grad();
  }
  loss->ensure_grad().data()[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* n = *it;
    if (n->backprop) n->backprop(*n);
  }
}

}  // namespace nb::tk
