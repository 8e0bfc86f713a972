#pragma once

#include <functional>
#include <string>
#include <vector>

namespace regtree {

struct ExampleOutcome {
  bool pass = false;
  std::string detail;
};

struct Example {
  std::string id;
  std::string module;
  std::string claim;
  std::function<ExampleOutcome()> run;
};

// The worked examples with their expected values.
const std::vector<Example>& worked_examples();

struct ExampleResult {
  std::string id, module, claim, detail;
  bool pass = false;
};

// Runs every example on the worker pool; results follow the catalogue order.
// An exception counts as a failure with its message as detail.
std::vector<ExampleResult> run_examples(unsigned workers);

}  // namespace regtree
