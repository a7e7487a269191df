#pragma once

#include <functional>
#include <string_view>

namespace xit {

using WarningSink = std::function<void(std::string_view)>;

/// Route warnings somewhere other than stderr. Returns the previous sink.
WarningSink set_warning_sink(WarningSink sink);

void warn(std::string_view message);

}  // namespace xit
