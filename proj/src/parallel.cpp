#include "besseltrans/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace besseltrans {

int worker_threads() {
    if (const char* env = std::getenv("BESSELTRANS_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) return n;
        } catch (const std::exception&) {
        }
    }
    return omp_get_max_threads();
}

}  // namespace besseltrans
