#include "santos/log.hpp"

#include <cstdlib>
#include <iostream>

namespace santos::log {

namespace {

Level g_level = [] {
    const char* env = std::getenv("SANTOS_LOG");
    if (env == nullptr) return Level::Warn;
    return level_from_string(env);
}();

void emit(Level lvl, const char* tag, const std::string& msg) {
    if (lvl < g_level) return;
    std::cerr << "[" << tag << "] " << msg << "\n";
}

} // namespace

void set_level(Level level) { g_level = level; }
Level level() { return g_level; }

Level level_from_string(const std::string& name) {
    if (name == "debug") return Level::Debug;
    if (name == "info") return Level::Info;
    if (name == "warn" || name == "warning") return Level::Warn;
    if (name == "error") return Level::Error;
    if (name == "off" || name == "none") return Level::Off;
    return Level::Warn;
}

void debug(const std::string& msg) { emit(Level::Debug, "debug", msg); }
void info(const std::string& msg) { emit(Level::Info, "info", msg); }
void warn(const std::string& msg) { emit(Level::Warn, "warn", msg); }
void error(const std::string& msg) { emit(Level::Error, "error", msg); }

} // namespace santos::log
