#pragma once

#include <cstdio>
#include <string>

#include "fraclab/harness.hpp"

namespace fraclab::cli {

inline int finish(const ExperimentReport& rep, const std::string& out_dir) {
  std::printf("suite %s: %s (%.2fs, %zu members, %zu flagged)\n", rep.suite.c_str(),
              rep.passed ? "PASS" : "FAIL", rep.wall_clock_s, rep.members,
              rep.attrition);
  for (const auto& c : rep.checks)
    std::printf("  [%s] %s: %s\n", c.pass ? "ok" : "FAIL", c.name.c_str(),
                c.detail.c_str());
  for (const auto& q : rep.quantities)
    std::printf("  %s = %.6g (stderr %.3g, n=%zu)\n", q.name.c_str(), q.est.value,
                q.est.stderr_, q.est.n);
  for (const auto& s : rep.slopes)
    std::printf("  slope %s = %.4f (stderr %.3g, R2 %.4f)\n", s.name.c_str(),
                s.fit.slope, s.fit.stderr_, s.fit.r2);
  if (!out_dir.empty())
    std::printf("  report: %s/%s.report.json\n", out_dir.c_str(), rep.suite.c_str());
  return rep.passed ? 0 : 1;
}

}  // namespace fraclab::cli
