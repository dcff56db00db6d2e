#include "vhj/acceptance.hpp"

#include <cstdio>

int main()
{
  int failed = 0;
  for (const auto& c : vhj::acceptance::criteria()) {
    const auto o = vhj::acceptance::run(c);
    std::printf("[%s] criterion %s: %s (%.2fs) %s\n", o.passed ? "PASS" : "FAIL", c.id.c_str(), o.name.c_str(),
                o.seconds, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.passed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(vhj::acceptance::criteria().size()) - failed,
              vhj::acceptance::criteria().size());
  return failed == 0 ? 0 : 1;
}
