#pragma once

#include <cstdint>

namespace adtree {

using Attr = std::uint32_t;         // 0-based attribute (column) index
using Value = std::uint16_t;        // 1-based value code, 1..arity
using Count = std::uint64_t;        // number of matching records
using RecordIndex = std::uint32_t;  // 0-based row index into a Dataset

inline constexpr std::uint32_t kMaxArity = 65535;

}  // namespace adtree
