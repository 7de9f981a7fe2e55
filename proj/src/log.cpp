#include "socon/log.hpp"

#include <iostream>
#include <mutex>

namespace socon {
namespace {

std::mutex sink_mutex;
WarningSink& sink() {
  static WarningSink s = [](std::string_view msg) { std::cerr << "warning: " << msg << '\n'; };
  return s;
}

}  // namespace

WarningSink set_warning_sink(WarningSink next) {
  std::lock_guard lock(sink_mutex);
  WarningSink prev = std::move(sink());
  sink() = std::move(next);
  return prev;
}

void warn(std::string_view message) {
  std::lock_guard lock(sink_mutex);
  if (sink()) sink()(message);
}

}  // namespace socon
