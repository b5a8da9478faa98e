#pragma once

#include <string>

namespace santos::log {

enum class Level { Debug = 0, Info = 1, Warn = 2, Error = 3, Off = 4 };

// Threshold comes from set_level() or, by default, the SANTOS_LOG
// environment variable (debug|info|warn|error|off). Default is warn.
void set_level(Level level);
Level level();
Level level_from_string(const std::string& name);

// All diagnostics go to stderr; stdout stays data-only.
void debug(const std::string& msg);
void info(const std::string& msg);
void warn(const std::string& msg);
void error(const std::string& msg);

} // namespace santos::log
