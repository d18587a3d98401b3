#pragma once

namespace modfold {

inline constexpr const char* version() { return "0.1.0"; }

}
