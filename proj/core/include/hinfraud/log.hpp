#pragma once

#include <cstdio>
#include <string>

namespace hinfraud {

enum class LogLevel { error = 0, warn = 1, info = 2, debug = 3 };

LogLevel log_level();
void set_log_level(LogLevel level);
bool set_log_level(const std::string& name);  // false if name unknown

namespace detail {
void log_line(LogLevel level, const char* fmt, ...);
}

#define HINFRAUD_LOG_WARN(...) ::hinfraud::detail::log_line(::hinfraud::LogLevel::warn, __VA_ARGS__)
#define HINFRAUD_LOG_INFO(...) ::hinfraud::detail::log_line(::hinfraud::LogLevel::info, __VA_ARGS__)
#define HINFRAUD_LOG_DEBUG(...) ::hinfraud::detail::log_line(::hinfraud::LogLevel::debug, __VA_ARGS__)

}  // namespace hinfraud
