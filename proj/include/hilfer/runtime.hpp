#pragma once

namespace hilfer {

// Worker count for the column-parallel stages (reachability assembly).
// Defaults to HILFER_THREADS when set, otherwise the hardware concurrency,
// capped at 8. Results do not depend on the value; only wall time does.
int thread_count();
void set_thread_count(int n);

} // namespace hilfer
