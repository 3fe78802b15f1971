#pragma once

#include <string_view>
#include <utility>
#include <vector>

namespace feynred {

// (file name, contents) of every file under catalog/, generated at
// configure time.
const std::vector<std::pair<std::string_view, std::string_view>>& embedded_catalog();

}  // namespace feynred
