#include "counselforge/common/assets.hpp"

#include "counselforge/common/errors.hpp"

namespace counselforge::assets {

std::string_view get(std::string_view name) {
  auto found = find(name);
  if (!found) throw ConfigError("no bundled asset named " + std::string(name));
  return *found;
}

}  // namespace counselforge::assets
