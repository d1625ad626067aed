#pragma once

// Central finite-difference checks of every analytic derivative in the
// library, on random points of random instances.

#include <cstdint>
#include <string>
#include <vector>

namespace snl {

struct GradcheckResult {
  std::string name;
  int points = 0;
  double worst = 0.0;  ///< worst relative (or absolute, for the Hessian) error
  double tolerance = 0.0;
  bool passed() const { return worst <= tolerance; }
};

struct GradcheckOptions {
  int points = 50;
  int numSensors = 10;
  int numAnchors = 4;
  double radius = 0.5;
  std::uint64_t seed = 1;
};

std::vector<GradcheckResult> runGradchecks(const GradcheckOptions& opts = {});

}  // namespace snl
