#pragma once

#include <string>
#include <vector>

#include "bfa/cube_function.hpp"

namespace bfa {

// Parses a family spec string and builds its truth table. Grammar:
//   dictator:n | parity:n | majority:n (n odd) | tribes:w:s (n = w*s)
//   threshold:n:k | subcube:n:k | random:n:seed[:bias] | file:<path>
CubeFunction make_function(const std::string& spec);

// Corpus used by `verify` when no explicit corpus is given.
std::vector<std::string> default_corpus();

}  // namespace bfa
