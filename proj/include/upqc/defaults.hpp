#pragma once

#include <cstdint>
#include <vector>

namespace upqc {

// Reporting defaults. Every emitted report embeds the values it ran with, so
// downstream readers never have to guess.
inline constexpr double kDefaultFloor = 0.05;
inline constexpr double kFlatnessTol = 1e-3;
inline constexpr double kDefaultMarginalCut = 0.01;

inline const std::vector<std::int64_t>& default_grid() {
    static const std::vector<std::int64_t> g = {1000, 10000, 100000};
    return g;
}

// Descending ladder; the violation scan reports the first epsilon that
// exhibits a persistent violation set.
inline const std::vector<double>& default_eps_list() {
    static const std::vector<double> e = {1.0, 0.75, 0.5, 0.3, 0.1};
    return e;
}

}  // namespace upqc
