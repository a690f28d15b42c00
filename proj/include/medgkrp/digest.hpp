#pragma once

#include <string>
#include <string_view>

namespace medgkrp {

// SHA-256 hex digest; used for cache keys and manifest entries.
std::string sha256_hex(std::string_view data);

} // namespace medgkrp
