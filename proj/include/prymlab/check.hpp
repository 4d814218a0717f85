#pragma once

#include <string>
#include <vector>

#include "prymlab/types.hpp"

namespace prym {

// One line of a verification report.
struct Check {
  std::string id;
  std::string anchor;  // what the check is about, in words
  cplx lhs = 0, rhs = 0;
  double residual = 0, tolerance = 0;
  bool pass = false;
  double wall_time = 0;
};

inline Check make_check(std::string id, std::string anchor, cplx lhs, cplx rhs, double residual, double tol) {
  Check c;
  c.id = std::move(id);
  c.anchor = std::move(anchor);
  c.lhs = lhs;
  c.rhs = rhs;
  c.residual = residual;
  c.tolerance = tol;
  c.pass = residual <= tol;
  return c;
}

inline bool all_pass(const std::vector<Check>& cs) {
  for (const auto& c : cs)
    if (!c.pass) return false;
  return true;
}

}  // namespace prym
