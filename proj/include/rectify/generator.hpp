#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "rectify/core.hpp"
#include "rectify/noise.hpp"

namespace rectify {

/// Synthetic clean data: a handful of independent fds, each a one-to-one map
/// from lhs patterns to an rhs value. pattern_multiplicity controls how many
/// tuples share one lhs pattern (high values mimic data sets with very
/// frequent patterns, low values sparse ones).
struct GeneratorConfig {
  int tuple_count = 1000;
  int fd_count = 2;
  int lhs_arity = 1;
  int pattern_multiplicity = 10;
  bool numeric_lhs = false;
  bool uniform_assignment = true;  // round-robin tuples over patterns; false draws at random
  std::uint64_t seed = 1;
};

struct GeneratedData {
  Dataset clean;
  std::vector<FunctionalDependency> fds;
  int patterns_per_fd = 0;
};

namespace detail {

/// Base-15 code where every digit contributes five characters from its own
/// per-block alphabet slice. Any two distinct codes then differ in some
/// block's digit, whose slice character appears five times in one code and
/// never in the other, so their edit distance is at least five. The blocks
/// are interleaved to avoid repeated-character runs (a run of length k maps
/// k different single-character deletions onto one string, which makes
/// colliding typos far more likely).
inline std::string separated_code(int index, int blocks) {
  static const char alphabet[] =
      "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
  std::string out(static_cast<std::size_t>(blocks) * 5, '?');
  int value = index;
  for (int k = 0; k < blocks; ++k) {
    const char c = alphabet[15 * k + value % 15];
    value /= 15;
    for (int r = 0; r < 5; ++r) out[static_cast<std::size_t>(r * blocks + k)] = c;
  }
  return out;
}

inline int blocks_for(int count) {
  // at least three blocks so the value width (and hence the per-tuple cost)
  // does not depend on the pattern count
  int blocks = 3;
  long capacity = 15L * 15L * 15L;
  while (capacity < count && blocks < 4) {
    capacity *= 15;
    ++blocks;
  }
  if (capacity < count) throw Error("generator supports at most 15^4 distinct patterns");
  return blocks;
}

}  // namespace detail

inline GeneratedData generate_clean(const GeneratorConfig& config) {
  if (config.tuple_count <= 0 || config.fd_count <= 0 || config.lhs_arity <= 0 ||
      config.pattern_multiplicity <= 0)
    throw Error("generator parameters must be positive");

  GeneratedData out;
  const int patterns = std::max(1, config.tuple_count / config.pattern_multiplicity);
  out.patterns_per_fd = patterns;
  const int blocks = detail::blocks_for(patterns);

  std::vector<std::pair<std::string, Kind>> columns;
  for (int f = 0; f < config.fd_count; ++f) {
    for (int a = 0; a < config.lhs_arity; ++a)
      columns.push_back({"K" + std::to_string(f) + static_cast<char>('a' + a),
                         config.numeric_lhs ? Kind::Numeric : Kind::String});
    columns.push_back({"V" + std::to_string(f), Kind::String});
  }
  out.clean.schema = make_schema(columns);

  const int stride = config.lhs_arity + 1;
  for (int f = 0; f < config.fd_count; ++f) {
    std::vector<int> lhs;
    for (int a = 0; a < config.lhs_arity; ++a) lhs.push_back(f * stride + a);
    out.fds.push_back(make_fd(std::move(lhs), f * stride + config.lhs_arity));
  }

  Rng rng(config.seed);
  out.clean.tuples.reserve(static_cast<std::size_t>(config.tuple_count));
  for (int i = 0; i < config.tuple_count; ++i) {
    Tuple t;
    t.tuple_id = i;
    t.values.reserve(columns.size());
    for (int f = 0; f < config.fd_count; ++f) {
      const int p = config.uniform_assignment
                        ? i % patterns
                        : static_cast<int>(rng.bounded(static_cast<std::uint64_t>(patterns)));
      for (int a = 0; a < config.lhs_arity; ++a) {
        if (config.numeric_lhs) {
          // spacing of 1000 keeps distinct values far outside the relative
          // numeric threshold of any of them
          t.values.push_back(CellValue::num(10000.0 * (f + 1) + 1000.0 * p + a));
        } else {
          t.values.push_back(CellValue::str(std::string(1, static_cast<char>('a' + a)) +
                                            std::to_string(f) + detail::separated_code(p, blocks)));
        }
      }
      t.values.push_back(CellValue::str("w" + std::to_string(f) + detail::separated_code(p, blocks)));
    }
    out.clean.tuples.push_back(std::move(t));
  }
  return out;
}

}  // namespace rectify
