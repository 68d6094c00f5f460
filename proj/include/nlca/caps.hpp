#pragma once

#include <cstdint>
#include <string_view>

namespace nlca {

// Resource caps shared by every exhaustive procedure. Exceeding a cap raises
// CapExceeded; nothing is ever silently truncated.
struct Caps {
  std::uint64_t table_entries = 1ull << 24;   // m^(d+1)
  std::uint64_t subset_states = 1ull << 20;   // subset construction
  std::uint64_t pair_vertices = 1ull << 24;   // m^(2d)
  std::uint64_t search_budget = 1ull << 24;   // representability_search box, family size

  // Parses "key=value[,key=value...]" with keys table_entries, subset_states,
  // pair_vertices, search_budget. Unknown keys throw ParseError.
  static Caps parse(std::string_view text);

  // Defaults overridden by the CA_VERIFY_CAPS environment variable, if set.
  static Caps from_environment();
};

}  // namespace nlca
