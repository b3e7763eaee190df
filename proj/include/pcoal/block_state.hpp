#pragma once

#include <cstdint>
#include <vector>

namespace pcoal {

/// Block count of an ancestral process at a time (continuous kinds) or step (discrete kinds).
struct BlockState {
    double time = 0.0;
    std::int64_t blocks = 1;
};

struct Trajectory {
    std::vector<BlockState> states;
    std::int64_t events = 0;  // jumps (continuous) or generations (discrete)
    bool truncated = false;   // stopped by the event cap before absorption
};

}  // namespace pcoal
