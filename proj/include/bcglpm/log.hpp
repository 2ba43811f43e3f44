#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

namespace bcglpm {

// Verbosity from the BCGLPM_LOG environment variable:
//   0/off = silent, 1/warn = warnings (default), 2/info, 3/debug
inline int log_level() {
  static const int level = [] {
    const char* env = std::getenv("BCGLPM_LOG");
    if (env == nullptr || *env == '\0') return 1;
    if (std::strcmp(env, "off") == 0) return 0;
    if (std::strcmp(env, "warn") == 0) return 1;
    if (std::strcmp(env, "info") == 0) return 2;
    if (std::strcmp(env, "debug") == 0) return 3;
    return std::atoi(env);
  }();
  return level;
}

inline void log_warn(const std::string& msg) {
  if (log_level() >= 1) std::fprintf(stderr, "[bcglpm warn] %s\n", msg.c_str());
}

inline void log_info(const std::string& msg) {
  if (log_level() >= 2) std::fprintf(stderr, "[bcglpm info] %s\n", msg.c_str());
}

inline void log_debug(const std::string& msg) {
  if (log_level() >= 3) std::fprintf(stderr, "[bcglpm debug] %s\n", msg.c_str());
}

}  // namespace bcglpm
