// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "confgeo/verify.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = 20260809;
  if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);

  const confgeo::verify::SuiteReport report = confgeo::verify::run_suite("all", seed);
  int failed = 0;
  for (const auto& check : report.checks) {
    std::printf("[%s] %s: %s\n", check.pass ? "PASS" : "FAIL", check.name.c_str(), check.detail.c_str());
    if (!check.pass) ++failed;
  }
  std::printf("%zu criteria, %d failed (seed %llu)\n", report.checks.size(), failed,
              static_cast<unsigned long long>(seed));
  return failed == 0 ? 0 : 1;
}
