#include <iostream>
#include <string>

#include "cli.hpp"

// Prints one PASS/FAIL line per acceptance criterion.
int main(int argc, char** argv) {
  std::string suite = argc > 1 ? argv[1] : "full";
  try {
    auto res = lspec::cli::run_acceptance(suite, &std::cout);
    int pass = 0, ran = 0;
    for (auto& c : res)
      if (!c.skipped) {
        ++ran;
        pass += c.pass;
      }
    std::cout << pass << "/" << ran << " criteria passed\n";
    return pass == ran ? 0 : 1;
  } catch (const lspec::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}
