#include "nlca/caps.hpp"

#include <charconv>
#include <cstdlib>
#include <string>

#include "nlca/error.hpp"

namespace nlca {

Caps Caps::parse(std::string_view text) {
  Caps caps;
  std::size_t offset = 0;
  while (offset < text.size()) {
    std::size_t end = text.find(',', offset);
    if (end == std::string_view::npos) end = text.size();
    std::string_view item = text.substr(offset, end - offset);
    std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key=value in caps", offset);
    std::string_view key = item.substr(0, eq);
    std::string_view val = item.substr(eq + 1);
    std::uint64_t number = 0;
    auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), number);
    if (ec != std::errc{} || ptr != val.data() + val.size() || number == 0)
      throw ParseError("invalid cap value '" + std::string(val) + "'", offset + eq + 1);
    if (key == "table_entries") caps.table_entries = number;
    else if (key == "subset_states") caps.subset_states = number;
    else if (key == "pair_vertices") caps.pair_vertices = number;
    else if (key == "search_budget") caps.search_budget = number;
    else throw ParseError("unknown cap '" + std::string(key) + "'", offset);
    offset = end + 1;
  }
  return caps;
}

Caps Caps::from_environment() {
  const char* env = std::getenv("CA_VERIFY_CAPS");
  if (env == nullptr || *env == '\0') return Caps{};
  return parse(env);
}

}  // namespace nlca
