#pragma once

#include <cstdlib>
#include <string>

namespace abv {

// Bundled data directory; overridable with the ABV_DATA_DIR env var.
inline std::string data_dir() {
    if (const char* env = std::getenv("ABV_DATA_DIR")) return env;
#ifdef ABV_DEFAULT_DATA_DIR
    return ABV_DEFAULT_DATA_DIR;
#else
    return "data";
#endif
}

inline std::string data_file(const std::string& name) { return data_dir() + "/" + name; }

}  // namespace abv
