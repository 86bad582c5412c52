#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "dirac/parser.hpp"

#ifndef DIRAC_MODELS_DIR
#define DIRAC_MODELS_DIR "models"
#endif

inline std::string read_model_file(const std::string& name) {
    std::string path = std::string(DIRAC_MODELS_DIR) + "/" + name + ".model";
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline dirac::Model load_model(const std::string& name) {
    return dirac::parse_model(read_model_file(name));
}
