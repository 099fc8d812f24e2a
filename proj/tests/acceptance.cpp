// Acceptance suite: runs every verification criterion at its stated
// tolerance and prints one PASS/FAIL line per criterion.

#include <iostream>

#include "noma/verify.hpp"

int main() {
  const auto results = noma::run_verify(noma::VerifyLevel::full, std::cout);
  std::size_t passed = 0;
  for (const auto& r : results) passed += r.pass ? 1 : 0;
  std::cout << passed << "/" << results.size() << " acceptance criteria passed\n";
  return noma::all_passed(results) ? 0 : 1;
}
