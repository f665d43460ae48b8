#pragma once

#include <cstdint>
#include <vector>

namespace subseg::internal {

using SymbolId = std::uint32_t;

inline std::uint64_t pair_key(SymbolId left, SymbolId right) {
  return (static_cast<std::uint64_t>(left) << 32) | right;
}

// Replaces every occurrence of (left, right) scanning left to right; an
// occurrence overlapping a previous replacement is skipped. Returns whether
// anything was replaced.
inline bool merge_in_place(std::vector<SymbolId>& syms, SymbolId left,
                           SymbolId right, SymbolId merged) {
  std::size_t out = 0;
  bool changed = false;
  for (std::size_t i = 0; i < syms.size();) {
    if (i + 1 < syms.size() && syms[i] == left && syms[i + 1] == right) {
      syms[out++] = merged;
      i += 2;
      changed = true;
    } else {
      syms[out++] = syms[i++];
    }
  }
  syms.resize(out);
  return changed;
}

}  // namespace subseg::internal
