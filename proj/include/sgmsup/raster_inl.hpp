#pragma once

#include <string>

#include "sgmsup/error.hpp"

namespace sgmsup {

template <typename A, typename B>
void require_same_shape(const A& a, const B& b, const char* what) {
  if (!same_shape(a, b)) {
    throw InvalidArgument(std::string(what) + ": dimension mismatch (" +
                          std::to_string(a.width) + "x" +
                          std::to_string(a.height) + " vs " +
                          std::to_string(b.width) + "x" +
                          std::to_string(b.height) + ")");
  }
}

}  // namespace sgmsup
