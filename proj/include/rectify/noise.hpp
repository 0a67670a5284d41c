#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rectify/core.hpp"

namespace rectify {

enum class NoiseKind { Typo, ActiveDomain };

struct ErrorEntry {
  std::int64_t tuple_id = 0;
  int attribute = -1;
  CellValue clean_value;
  CellValue dirty_value;
  NoiseKind kind = NoiseKind::Typo;
};

using ErrorLog = std::vector<ErrorEntry>;

struct NoiseSpec {
  double noise_rate = 0.10;  // fraction of cells over the target attributes
  double typo_rate = 0.5;    // corrupted cells that get a typo; the rest get active-domain errors
  std::uint64_t seed = 42;
  std::vector<int> target_attributes;  // attributes appearing in some fd
  bool lhs_typos_only = false;         // corrupt lhs attributes with typos only
  std::vector<int> lhs_attributes;     // consulted when lhs_typos_only is set

  void validate() const {
    if (noise_rate < 0 || noise_rate > 1 || typo_rate < 0 || typo_rate > 1)
      throw Error("noise rates must lie in [0,1]");
  }
};

inline std::vector<int> fd_attributes(const std::vector<FunctionalDependency>& fds) {
  std::set<int> attrs;
  for (const auto& fd : fds) {
    attrs.insert(fd.lhs.begin(), fd.lhs.end());
    attrs.insert(fd.rhs);
  }
  return {attrs.begin(), attrs.end()};
}

inline std::vector<int> fd_lhs_attributes(const std::vector<FunctionalDependency>& fds) {
  std::set<int> attrs;
  for (const auto& fd : fds) attrs.insert(fd.lhs.begin(), fd.lhs.end());
  return {attrs.begin(), attrs.end()};
}

/// Deterministic random source. Draws go through our own bounding so the
/// stream does not depend on the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  std::uint64_t bounded(std::uint64_t n) {
    if (n == 0) throw Error("bounded(0)");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t draw;
    do { draw = next(); } while (draw >= limit);
    return draw % n;
  }

  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

namespace detail {

constexpr char kTypoAlphabet[] = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
constexpr std::size_t kTypoAlphabetSize = sizeof(kTypoAlphabet) - 1;

inline std::string string_typo(const std::string& text, Rng& rng) {
  std::string out = text;
  // 0 insert, 1 delete, 2 substitute; never delete down to the empty string
  int op = out.empty() ? 0 : static_cast<int>(rng.bounded(3));
  if (op == 1 && out.size() == 1) op = static_cast<int>(rng.bounded(2)) == 0 ? 0 : 2;
  if (op == 0) {
    const auto pos = rng.bounded(out.size() + 1);
    out.insert(out.begin() + static_cast<std::ptrdiff_t>(pos),
               kTypoAlphabet[rng.bounded(kTypoAlphabetSize)]);
  } else if (op == 1) {
    out.erase(out.begin() + static_cast<std::ptrdiff_t>(rng.bounded(out.size())));
  } else {
    const auto pos = rng.bounded(out.size());
    char c;
    do { c = kTypoAlphabet[rng.bounded(kTypoAlphabetSize)]; } while (c == out[pos]);
    out[pos] = c;
  }
  return out;
}

inline CellValue numeric_typo(const CellValue& v, Rng& rng) {
  const std::string& text = v.text();
  std::vector<std::size_t> digits;
  for (std::size_t i = 0; i < text.size(); ++i)
    if (text[i] >= '0' && text[i] <= '9') digits.push_back(i);
  for (int attempt = 0; attempt < 16 && !digits.empty(); ++attempt) {
    std::string out = text;
    const auto pos = digits[rng.bounded(digits.size())];
    char c;
    do { c = static_cast<char>('0' + rng.bounded(10)); } while (c == out[pos]);
    out[pos] = c;
    const auto parsed = parse_number(out);
    if (parsed && *parsed != v.number()) return CellValue::num(*parsed, out);
  }
  // pathological text; shift the magnitude instead
  std::string out = text;
  out.insert(out[0] == '-' ? 1 : 0, 1, '1');
  const auto parsed = parse_number(out);
  if (parsed && *parsed != v.number()) return CellValue::num(*parsed, out);
  return CellValue::num(v.number() + 1.0);
}

}  // namespace detail

/// One random unit edit. Strings get a code-point insert/delete/substitute,
/// numerics a perturbed digit. The result always differs from the input and
/// keeps its kind; the same seed state yields the same output.
inline CellValue make_typo(const CellValue& v, Rng& rng) {
  if (v.kind() == Kind::Numeric) return detail::numeric_typo(v, rng);
  std::string out = detail::string_typo(v.text(), rng);
  return CellValue::str(std::move(out));
}

struct NoisyData {
  Dataset dirty;
  ErrorLog log;
};

namespace detail {

/// First-occurrence-ordered distinct non-empty values of one column.
inline std::vector<CellValue> distinct_column_values(const Dataset& d, int attribute) {
  std::vector<CellValue> out;
  for (const auto& t : d.tuples) {
    const CellValue& v = t.at(attribute);
    if (v.is_empty()) continue;
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  return out;
}

}  // namespace detail

/// Corrupts floor(noise_rate * |tuples| * |target attributes|) distinct
/// cells, chosen uniformly under the seed. Each cell becomes a typo with
/// probability typo_rate, otherwise an active-domain error (a different
/// value of the same attribute taken from the data); when no replacement
/// value exists the cell falls back to a typo. Fully reproducible from the
/// seed.
inline NoisyData inject_noise(const Dataset& clean, const NoiseSpec& spec) {
  spec.validate();
  NoisyData out;
  out.dirty = clean;
  if (spec.target_attributes.empty() || clean.tuples.empty()) return out;

  const std::size_t n_targets = spec.target_attributes.size();
  const std::size_t n_cells = clean.tuples.size() * n_targets;
  const auto budget = static_cast<std::size_t>(spec.noise_rate * static_cast<double>(n_cells));
  if (budget == 0) return out;

  Rng rng(spec.seed);

  // sample distinct cell slots without replacement
  std::vector<std::uint32_t> slots(n_cells);
  for (std::size_t i = 0; i < n_cells; ++i) slots[i] = static_cast<std::uint32_t>(i);
  for (std::size_t i = 0; i < budget; ++i) {
    const std::size_t j = i + rng.bounded(n_cells - i);
    std::swap(slots[i], slots[j]);
  }
  std::vector<std::uint32_t> chosen(slots.begin(), slots.begin() + static_cast<std::ptrdiff_t>(budget));
  std::sort(chosen.begin(), chosen.end());

  std::vector<std::vector<CellValue>> pools(n_targets);  // lazily filled per target
  std::vector<bool> pooled(n_targets, false);

  std::set<int> lhs_set(spec.lhs_attributes.begin(), spec.lhs_attributes.end());

  for (const auto slot : chosen) {
    const std::size_t row = slot / n_targets;
    const std::size_t col = slot % n_targets;
    const int attribute = spec.target_attributes[col];
    Tuple& t = out.dirty.tuples[row];
    const CellValue original = clean.tuples[row].at(attribute);

    bool want_typo = rng.unit() < spec.typo_rate;
    if (spec.lhs_typos_only && lhs_set.count(attribute)) want_typo = true;

    CellValue dirty;
    NoiseKind kind = NoiseKind::Typo;
    if (!want_typo) {
      if (!pooled[col]) {
        pools[col] = detail::distinct_column_values(clean, attribute);
        pooled[col] = true;
      }
      std::vector<const CellValue*> others;
      for (const auto& v : pools[col])
        if (v != original) others.push_back(&v);
      if (!others.empty()) {
        dirty = *others[rng.bounded(others.size())];
        kind = NoiseKind::ActiveDomain;
      } else {
        want_typo = true;  // single-valued column, no replacement exists
      }
    }
    if (want_typo) {
      // a missing cell in a numeric column gets a numeric value to keep the
      // column's kind stable
      if (original.is_empty() && clean.schema.at(attribute).kind == Kind::Numeric) {
        dirty = CellValue::num(static_cast<double>(1 + rng.bounded(999)));
      } else {
        dirty = make_typo(original, rng);
      }
      kind = NoiseKind::Typo;
    }

    t.values[static_cast<std::size_t>(attribute)] = dirty;
    out.log.push_back({t.tuple_id, attribute, original, dirty, kind});
  }
  return out;
}

}  // namespace rectify
