#pragma once

namespace besseltrans {

/// Selects the OpenMP kernel or its serial reference implementation.
enum class Execution { serial, parallel };

/// Worker count for parallel kernels: BESSELTRANS_THREADS if set and positive,
/// otherwise the OpenMP default.
int worker_threads();

}  // namespace besseltrans
