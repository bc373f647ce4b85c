#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include "demarg/error.hpp"

int main(int argc, char** argv) {
  // Guard-band warnings are expected in several tests; keep the log readable.
  demarg::set_warning_handler([](const std::string&) {});
  doctest::Context ctx;
  ctx.applyCommandLine(argc, argv);
  return ctx.run();
}
