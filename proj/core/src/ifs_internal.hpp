#pragma once

#include "fel/ifs.hpp"

#include <string>
#include <utility>
#include <vector>

namespace fel::detail {

/// Canonical exact keys of all level-n compositions, in word order.
std::vector<std::pair<std::string, std::uint64_t>> exact_keys(const IFSSystem& ifs, int n);

}  // namespace fel::detail
