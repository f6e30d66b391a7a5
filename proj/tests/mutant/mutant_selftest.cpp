// Linked against the core built with the root label left in place by the
// pushout complement. The soundness property must catch it.

#include <iostream>

#include "tgr/suite.hpp"

int main() {
  tgr::SuiteConfig c;
  c.seed = 0;
  c.cases = 50;
  c.only = {"soundness"};
  tgr::SuiteSummary s = tgr::run_property_suite(c);
  const tgr::PropertyResult* r = s.find("soundness");
  if (!r) return 1;
  std::cout << r->to_text();
  if (r->failures == 0) {
    std::cout << "mutant survived the soundness property\n";
    return 1;
  }
  std::cout << "mutant caught: " << r->failures << " of " << r->cases << " cases fail\n";
  return 0;
}
