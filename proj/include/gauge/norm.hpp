#pragma once

#include <string>
#include <string_view>

namespace gauge {

enum class NormKind { L1, LInf };

/// "l1" or "linf".
NormKind parse_norm_kind(std::string_view text);
std::string to_string(NormKind kind);

}  // namespace gauge
