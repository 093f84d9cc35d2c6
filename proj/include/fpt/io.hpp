#pragma once

#include <optional>
#include <string>

#include "fpt/rep.hpp"
#include "fpt/solver.hpp"

namespace fpt {

// Versioned JSON instance and result files.  Parsers are strict: unknown
// keys, duplicate or zero blocks, and out-of-range entries are Parse errors
// with a location in the message.

struct Instance {
  Rep rep;  // parsed but not validated
  std::string family;
  std::optional<long long> seed;
};

Instance parse_instance(const std::string& text);
std::string serialize_instance(const Rep& rep, const std::string& family = "",
                               std::optional<long long> seed = std::nullopt);

std::string serialize_result(u32 p, int d, const FixedVectorResult& res);

struct ParsedResult {
  u32 p = 0;
  int d = 0;
  FixedVectorResult res;
};
ParsedResult parse_result(const std::string& text);

// Scalar Laurent polynomial from "c*t^e+..." terms; integer coefficients are
// reduced mod p, exponents may be negative, bare "c" and "t"/"t^e" allowed.
SeriesVector parse_poly(const std::string& text, u32 p);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace fpt
