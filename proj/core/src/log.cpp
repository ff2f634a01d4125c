#include "hinfraud/log.hpp"

#include <atomic>
#include <cstdarg>

namespace hinfraud {

namespace {
std::atomic<int> g_level{static_cast<int>(LogLevel::info)};

const char* level_tag(LogLevel level) {
  switch (level) {
    case LogLevel::error: return "error";
    case LogLevel::warn: return "warn";
    case LogLevel::info: return "info";
    case LogLevel::debug: return "debug";
  }
  return "?";
}
}  // namespace

LogLevel log_level() { return static_cast<LogLevel>(g_level.load(std::memory_order_relaxed)); }

void set_log_level(LogLevel level) { g_level.store(static_cast<int>(level), std::memory_order_relaxed); }

bool set_log_level(const std::string& name) {
  if (name == "error") set_log_level(LogLevel::error);
  else if (name == "warn") set_log_level(LogLevel::warn);
  else if (name == "info") set_log_level(LogLevel::info);
  else if (name == "debug") set_log_level(LogLevel::debug);
  else return false;
  return true;
}

namespace detail {

void log_line(LogLevel level, const char* fmt, ...) {
  if (static_cast<int>(level) > g_level.load(std::memory_order_relaxed)) return;
  std::fprintf(stderr, "[%s] ", level_tag(level));
  va_list args;
  va_start(args, fmt);
  std::vfprintf(stderr, fmt, args);
  va_end(args);
  std::fputc('\n', stderr);
}

}  // namespace detail
}  // namespace hinfraud
