#pragma once

#include <functional>
#include <string_view>

namespace wordmap {

using WarningHandler = std::function<void(std::string_view)>;

// Library warnings go through this hook. The default handler writes
// "warning: <message>" to standard error.
void set_warning_handler(WarningHandler handler);
void warn(std::string_view message);

}  // namespace wordmap
