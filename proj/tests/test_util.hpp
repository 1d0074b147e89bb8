#pragma once

#include "gjext/vec.hpp"

namespace gjext::test {

inline Rational R(const char* s) { return Rational::parse(s); }

inline RatVec V(std::initializer_list<const char*> xs) {
  std::vector<Rational> out;
  for (const char* s : xs) out.push_back(Rational::parse(s));
  return RatVec(std::move(out));
}

}  // namespace gjext::test
