#ifndef SORKIN_PATHS_HPP
#define SORKIN_PATHS_HPP

#include <array>
#include <string_view>

#include "sorkin/pulse.hpp"

namespace sorkin {

// Subset of the IR components {a,b,c} switched on for a measurement.
// Canonical order: 0, a, b, c, ab, ac, bc, abc.
class PathConfiguration {
public:
    static constexpr int count = 8;

    constexpr PathConfiguration() = default;
    constexpr explicit PathConfiguration(int canonical_index)
        : index_(canonical_index) {}

    static constexpr std::array<PathConfiguration, count> all() {
        return {PathConfiguration{0}, PathConfiguration{1}, PathConfiguration{2},
                PathConfiguration{3}, PathConfiguration{4}, PathConfiguration{5},
                PathConfiguration{6}, PathConfiguration{7}};
    }

    constexpr int index() const { return index_; }
    constexpr unsigned mask() const { return kMasks[index_]; }
    constexpr bool contains(Path j) const {
        return (mask() >> static_cast<int>(j)) & 1u;
    }
    constexpr bool empty() const { return mask() == 0; }
    constexpr int size() const {
        return int(mask() & 1u) + int((mask() >> 1) & 1u) + int((mask() >> 2) & 1u);
    }
    constexpr std::string_view name() const { return kNames[index_]; }

    static PathConfiguration from_name(std::string_view s) {
        for (int i = 0; i < count; ++i)
            if (kNames[i] == s) return PathConfiguration{i};
        throw ConfigError("unknown path configuration name");
    }

    friend constexpr bool operator==(PathConfiguration x, PathConfiguration y) {
        return x.index_ == y.index_;
    }

private:
    static constexpr std::array<unsigned, count> kMasks{0u, 1u, 2u, 4u, 3u, 5u, 6u, 7u};
    static constexpr std::array<std::string_view, count> kNames{
        "0", "a", "b", "c", "ab", "ac", "bc", "abc"};
    int index_ = 0;
};

inline constexpr PathConfiguration config_empty{0};
inline constexpr PathConfiguration config_abc{7};

} // namespace sorkin

#endif
