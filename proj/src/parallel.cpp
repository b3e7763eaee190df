#include "pcoal/parallel.hpp"

namespace pcoal {

namespace {
std::atomic<int> configured_workers{0};
}

int worker_count() {
    const int configured = configured_workers.load();
    if (configured > 0) return configured;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void set_worker_count(int workers) { configured_workers.store(workers > 0 ? workers : 0); }

}  // namespace pcoal
