#include <iostream>

#include "faber/verify.hpp"

int main() {
  const int failures = faber::verify::run_acceptance(std::cout);
  std::cout << (failures ? "acceptance: " + std::to_string(failures) + " of 9 failed"
                         : std::string("acceptance: all 9 passed"))
            << "\n";
  return failures ? 1 : 0;
}
