#include <cstdlib>
#include <cstring>
#include <iostream>

#include "autothermo/acceptance.hpp"

int main(int argc, char** argv) {
  autothermo::acceptance::Options opts;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--slow") == 0) {
      opts.slow = true;
    } else if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      opts.criteria.insert(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance [--criterion N]... [--slow]\n";
      return 2;
    }
  }
  const auto checks = autothermo::acceptance::run(opts, std::cout);
  return autothermo::acceptance::exit_status(checks);
}
