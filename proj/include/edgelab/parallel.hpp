#pragma once
#include <functional>

namespace edgelab {

// worker count: EDGELAB_THREADS if set and positive, else hardware concurrency
int thread_budget();

// runs body(i) for i in [0, n); each index is visited exactly once
void parallel_for(int n, const std::function<void(int)>& body);

}
