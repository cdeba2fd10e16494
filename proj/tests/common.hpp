#pragma once
#include <fstream>
#include <sstream>
#include <string>

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline std::string data(const std::string& name) { return slurp(std::string(SANDWICH_TEST_DATA) + "/" + name); }
