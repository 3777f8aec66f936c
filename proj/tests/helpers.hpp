#ifndef PRMAN_TEST_HELPERS_HPP
#define PRMAN_TEST_HELPERS_HPP

#include <array>
#include <random>
#include <vector>

#include "prman/fabric.hpp"

namespace test_helpers {

using prman::fabric::DeviceGeometry;
using prman::fabric::Half;
using prman::fabric::RegionSpan;
using prman::fabric::ResourceType;

// (CLB x 9, BRAM x 2) repeated, the slot pattern used throughout.
inline std::vector<ResourceType> slot_pattern(int repetitions) {
    std::vector<ResourceType> cols;
    for (int r = 0; r < repetitions; ++r) {
        cols.insert(cols.end(), 9, ResourceType::CLB);
        cols.insert(cols.end(), 2, ResourceType::BRAM);
    }
    return cols;
}

inline DeviceGeometry pattern_device(int repetitions, int rows_top = 2, int rows_bottom = 1) {
    return DeviceGeometry(rows_top, rows_bottom, slot_pattern(repetitions));
}

// Random geometry from a random column pattern repeated a few times.
inline DeviceGeometry random_device(std::mt19937& rng) {
    std::uniform_int_distribution<int> pat_len(1, 4), reps(2, 5), type_pick(0, 2);
    std::vector<ResourceType> pattern;
    int len = pat_len(rng);
    for (int i = 0; i < len; ++i)
        pattern.push_back(std::array{ResourceType::CLB, ResourceType::BRAM,
                                     ResourceType::DSP}[type_pick(rng)]);
    std::vector<ResourceType> cols;
    int n = reps(rng);
    for (int r = 0; r < n; ++r) cols.insert(cols.end(), pattern.begin(), pattern.end());
    return DeviceGeometry(2, 1, std::move(cols));
}

inline RegionSpan random_span(std::mt19937& rng, const DeviceGeometry& geom) {
    std::uniform_int_distribution<int> half_pick(0, 1);
    Half half = half_pick(rng) && geom.rows_bottom() > 0 ? Half::Bottom : Half::Top;
    std::uniform_int_distribution<int> row_pick(0, geom.rows(half) - 1);
    std::uniform_int_distribution<int> count_pick(1, geom.column_count());
    int count = count_pick(rng);
    std::uniform_int_distribution<int> start_pick(0, geom.column_count() - count);
    return RegionSpan{half, row_pick(rng), start_pick(rng), count};
}

} // namespace test_helpers

#endif
