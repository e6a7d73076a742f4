#include <iostream>

#include "displab/acceptance.hpp"

int main() {
  displab::AcceptOptions opt;
  int failed = 0;
  for (const auto& r : displab::run_suite(0, opt, &std::cout)) failed += r.pass ? 0 : 1;
  std::cout << failed << " of 10 criteria failed\n";
  return failed ? 1 : 0;
}
