// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include "coarsecoh/acceptance.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char **argv) {
  CLI::App app{"acceptance criteria"};
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  app.add_option("--seed", seed, "base seed for the randomized criteria");
  app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  bool all = true;
  for (const auto &r : coarsecoh::runAcceptance(seed, jobs)) {
    std::cout << coarsecoh::formatResult(r) << std::endl;
    all = all && r.pass;
  }
  return all ? 0 : 1;
}
