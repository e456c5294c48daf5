#pragma once

#include <algorithm>
#include <initializer_list>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace skor::detail {

using json = nlohmann::json;

/// Strict-schema guard: every key present must be in the allowed list.
inline void check_keys(const json& j, std::initializer_list<const char*> allowed,
                       const std::string& context) {
  if (!j.is_object()) {
    throw std::invalid_argument(context + " must be a JSON object");
  }
  for (const auto& item : j.items()) {
    const bool known =
        std::any_of(allowed.begin(), allowed.end(),
                    [&](const char* k) { return item.key() == k; });
    if (!known) {
      throw std::invalid_argument("unknown key '" + item.key() + "' in " +
                                  context);
    }
  }
}

inline const json& require(const json& j, const char* key,
                           const std::string& context) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw std::invalid_argument("missing key '" + std::string(key) + "' in " +
                                context);
  }
  return *it;
}

}  // namespace skor::detail
