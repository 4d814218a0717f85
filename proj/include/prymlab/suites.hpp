#pragma once

#include <string>
#include <vector>

#include "prymlab/check.hpp"
#include "prymlab/monodromy.hpp"

namespace prym {

struct RunOptions {
  QuadOptions quad;
  OdeOptions ode;
  double fd_step = -1.0;  // < 0: chart default
  int threads = 1;
};

std::vector<Check> verify_geometry(const Surface& s, const Marking& m, const PeriodData& pd,
                                   const RunOptions& opt = {});
std::vector<Check> verify_periods(const Surface& s, const Marking& m, const PeriodData& pd,
                                  const RunOptions& opt = {});
std::vector<Check> verify_bergman(const Surface& s, const Marking& m, const PeriodData& pd,
                                  const RunOptions& opt = {});
std::vector<Check> verify_monodromy(const Surface& s, const Marking& m, const PeriodData& pd,
                                    const RunOptions& opt = {});

// geometry, periods, bergman, monodromy, symplectic, flows
const std::vector<std::string>& suite_names();
// "all" runs every suite. Checks come back sorted by id.
std::vector<Check> run_suite(const std::string& name, const Surface& s, const RunOptions& opt = {});

}  // namespace prym
