#pragma once

#include <string>
#include <vector>

namespace pars {

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;
};

/// Fast deterministic checks over the computational core: plan arithmetic,
/// forward-model inversion, gridding vs a brute-force scan, interpolation,
/// mixing identities, and a dataset round-trip. Used by `pars validate`.
std::vector<CheckResult> run_selfchecks();

}  // namespace pars
