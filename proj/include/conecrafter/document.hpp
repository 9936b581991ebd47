#pragma once

// Problem documents: schema "conecrafter/1".

#include "conecrafter/exact.hpp"
#include "conecrafter/torus.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace conecrafter {

class ParseError : public Error {
 public:
  ParseError(std::string field, const std::string& message)
      : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct ReductionSettings {
  std::size_t samples = 1000;
  std::uint64_t seed = 42;
  int max_steps = 200;
  std::vector<RationalMatrix> slice;  // forms spanning a GL_2-stable real slice
};

struct ProblemDocument {
  std::string name;
  std::string kind = "ghv";  // "ghv" or "abelian"
  Index lattice_rank = 0;
  RationalMatrix complex_structure;
  IntegerMatrix polarization;
  std::vector<AffineAuto> group;  // generators
  std::vector<IntegerMatrix> normalizer_generators;
  std::vector<RationalMatrix> test_classes;  // forms
  ReductionSettings reduction;

  PolarizedTorus torus() const { return {complex_structure, polarization}; }
};

ProblemDocument parse_document(const std::string& text);
ProblemDocument load_document(const std::string& path);

}  // namespace conecrafter
