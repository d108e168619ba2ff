#include "crn/parallel.hpp"

#include <atomic>

namespace crn::par {

namespace {
std::atomic<int> g_jobs{0};
}

int jobs() { return g_jobs.load(std::memory_order_relaxed); }
void set_jobs(int n) { g_jobs.store(n < 0 ? 0 : n, std::memory_order_relaxed); }

}  // namespace crn::par
