#ifndef SORKIN_VERSION_HPP
#define SORKIN_VERSION_HPP

namespace sorkin {

inline constexpr const char* version = "0.1.0";

} // namespace sorkin

#endif
