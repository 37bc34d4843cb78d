// Shared scenarios for the unit and acceptance tests.
#pragma once

#include "ocmsd/envarray.hpp"

namespace ocmsd::testing {

// Shallow-water channel with a thermocline between 8 and 10 m over a fast
// sandy halfspace; the 596 Hz benchmark of the simulation study.
inline Environment yellow_sea() {
    return Environment(SoundSpeedProfile({{0, 1496}, {8, 1496}, {10, 1485}, {31, 1485}}), 31.0,
                       Halfspace{1652.0, 1.77, 0.2});
}

inline constexpr double kBenchFrequency = 596.0;
inline constexpr double kBenchSourceDepth = 20.0;
inline constexpr double kBenchRange = 5000.0;

inline SourceSpec bench_source() {
    return SourceSpec{kBenchFrequency, kBenchSourceDepth, kBenchRange};
}

inline ArrayGeometry bench_array() { return ArrayGeometry::uniform(1.0, 1.0, 30, 31.0); }

}  // namespace ocmsd::testing
