#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace netscale {

// Process-wide worker cap, set once by the CLI (--threads). Results never
// depend on it: every parallel site reduces in deterministic index order.
int worker_cap();
void set_worker_cap(int n);

// Runs fn(i) for i in [0, n) across up to worker_cap() threads.
// fn must be safe to call concurrently for distinct i.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace netscale
