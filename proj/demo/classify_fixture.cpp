// Classifies one built-in fixture and prints a verdict table.
//   winvex_demo [fixture-id]

#include <iomanip>
#include <iostream>

#include "winvex/catalog.hpp"

int main(int argc, char** argv) {
  using namespace winvex;
  const std::string id = argc > 1 ? argv[1] : "preinvex-minus7";
  try {
    const Fixture& f = find_fixture(id);
    std::cout << "fixture " << f.id << "\n  eta(z, y) = " << f.eta << "\n  w(y) = " << f.w << "\n";
    if (f.h) std::cout << "  h(z) = " << *f.h << "\n";

    const FixtureReport r = run_fixture(f);
    for (const auto& v : r.verdicts) {
      std::cout << "  " << std::left << std::setw(30) << to_string(v.cls) << to_string(v.outcome);
      if (v.counterexample) std::cout << "  (violation " << v.counterexample->shrunk.violation << ")";
      std::cout << "\n";
    }
    if (r.pseudo)
      std::cout << "  " << std::left << std::setw(30) << "w-pre-pseudo" << to_string(r.pseudo->verdict.outcome)
                << " [" << to_string(r.config.eta_mode) << "]\n";
    std::cout << (r.matches ? "expectations reproduced\n" : "expectation mismatch\n");
    return r.matches ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}
