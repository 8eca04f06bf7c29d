#pragma once

#include "magrecon/arch/step.hpp"

namespace magrecon::arch {

// Step-level expansion of a canonical architecture. Valid names: alexnet,
// vgg11, vgg16, resnet18, resnet34, resnet50, resnet101. Residual shortcut
// projections are represented at their execution point on the main-path
// tensor so the flattened sequence stays chain-consistent.
NetworkSpec builtin_network(const std::string& name);

std::vector<std::string> builtin_names();

}  // namespace magrecon::arch
