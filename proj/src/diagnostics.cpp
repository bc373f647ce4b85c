#include "demarg/error.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace demarg {

namespace {

std::mutex& handler_mutex() {
  static std::mutex m;
  return m;
}

WarningHandler& handler_slot() {
  static WarningHandler h = [](const std::string& msg) { std::cerr << "warning: " << msg << '\n'; };
  return h;
}

std::atomic<int>& quiet_depth() {
  static std::atomic<int> d{0};
  return d;
}

}  // namespace

QuietWarnings::QuietWarnings() { ++quiet_depth(); }
QuietWarnings::~QuietWarnings() { --quiet_depth(); }

WarningHandler set_warning_handler(WarningHandler handler) {
  std::lock_guard<std::mutex> lock(handler_mutex());
  WarningHandler old = std::move(handler_slot());
  handler_slot() = std::move(handler);
  return old;
}

void warn(const std::string& message) {
  if (quiet_depth().load() > 0) return;
  std::lock_guard<std::mutex> lock(handler_mutex());
  if (handler_slot()) handler_slot()(message);
}

}  // namespace demarg
