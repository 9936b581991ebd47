#pragma once

#include "conecrafter/document.hpp"
#include "conecrafter/exact.hpp"

#include <initializer_list>
#include <string>

namespace conecrafter::testing {

inline IntegerMatrix imat(Index rows, Index cols, std::initializer_list<long> entries) {
  IntegerMatrix m(rows, cols);
  auto it = entries.begin();
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) m(r, c) = Integer(*it++);
  return m;
}

inline RationalMatrix rmat(Index rows, Index cols, std::initializer_list<long> entries) {
  return to_rational(imat(rows, cols, entries));
}

inline RationalVector rvec(std::initializer_list<long> entries) {
  RationalVector v(static_cast<Index>(entries.size()));
  Index i = 0;
  for (long e : entries) v(i++) = Rational(e);
  return v;
}

inline std::string corpus_path(const std::string& name) {
  return std::string(CONECRAFTER_CORPUS_DIR) + "/" + name + ".json";
}

inline ProblemDocument corpus(const std::string& name) { return load_document(corpus_path(name)); }

/// Standard J on Z^2 and its block sum on Z^4.
inline RationalMatrix j1() { return rmat(2, 2, {0, -1, 1, 0}); }
inline RationalMatrix j2() {
  RationalMatrix j = RationalMatrix::Zero(4, 4);
  j.topLeftCorner(2, 2) = j1();
  j.bottomRightCorner(2, 2) = j1();
  return j;
}

}  // namespace conecrafter::testing
