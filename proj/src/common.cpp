#include "mac2pc/common.hpp"

namespace mac2pc {

Role parse_role(std::string_view text) {
  if (text == "A" || text == "a" || text == "alice" || text == "Alice") return Role::Alice;
  if (text == "B" || text == "b" || text == "bob" || text == "Bob") return Role::Bob;
  throw UsageError("unknown role '" + std::string(text) + "' (expected A or B)");
}

}  // namespace mac2pc
